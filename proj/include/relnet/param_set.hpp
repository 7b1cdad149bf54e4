#pragma once

#include <string>
#include <vector>

#include "relnet/matrix.hpp"
#include "relnet/rng.hpp"

namespace relnet {

// Ordered collection of named tensors. Iteration order is the insertion
// order, which keeps optimizer state and gradient checks aligned.
class ParamSet {
public:
    struct Entry {
        std::string name;
        Matrix tensor;
    };

    void add(const std::string& name, Matrix tensor);

    Matrix& at(const std::string& name);
    const Matrix& at(const std::string& name) const;
    bool contains(const std::string& name) const;

    std::size_t count() const { return entries_.size(); }
    Entry& entry(std::size_t i) { return entries_[i]; }
    const Entry& entry(std::size_t i) const { return entries_[i]; }

    auto begin() { return entries_.begin(); }
    auto end() { return entries_.end(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

    // Total number of scalar coordinates.
    std::size_t scalar_count() const;
    double get_scalar(std::size_t flat_index) const;
    void set_scalar(std::size_t flat_index, double v);

    // Same names/shapes, all entries zero.
    ParamSet zeros_like() const;

    void check_compatible(const ParamSet& other, const char* what) const;

private:
    std::vector<Entry> entries_;
};

// Glorot-uniform weight init; biases are expected to be left at zero.
void init_glorot(Matrix& w, RngStream& rng);

}  // namespace relnet
