#include "relnet/param_set.hpp"

#include <cmath>
#include <stdexcept>

namespace relnet {

void ParamSet::add(const std::string& name, Matrix tensor) {
    if (contains(name)) {
        throw std::invalid_argument("ParamSet: duplicate parameter name " + name);
    }
    entries_.push_back({name, std::move(tensor)});
}

Matrix& ParamSet::at(const std::string& name) {
    for (auto& e : entries_) {
        if (e.name == name) {
            return e.tensor;
        }
    }
    throw std::out_of_range("ParamSet: no parameter named " + name);
}

const Matrix& ParamSet::at(const std::string& name) const {
    return const_cast<ParamSet*>(this)->at(name);
}

bool ParamSet::contains(const std::string& name) const {
    for (const auto& e : entries_) {
        if (e.name == name) {
            return true;
        }
    }
    return false;
}

std::size_t ParamSet::scalar_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) {
        n += e.tensor.size();
    }
    return n;
}

double ParamSet::get_scalar(std::size_t flat_index) const {
    for (const auto& e : entries_) {
        if (flat_index < e.tensor.size()) {
            return e.tensor.values()[flat_index];
        }
        flat_index -= e.tensor.size();
    }
    throw std::out_of_range("ParamSet: scalar index out of range");
}

void ParamSet::set_scalar(std::size_t flat_index, double v) {
    for (auto& e : entries_) {
        if (flat_index < e.tensor.size()) {
            e.tensor.values()[flat_index] = v;
            return;
        }
        flat_index -= e.tensor.size();
    }
    throw std::out_of_range("ParamSet: scalar index out of range");
}

ParamSet ParamSet::zeros_like() const {
    ParamSet z;
    for (const auto& e : entries_) {
        z.add(e.name, Matrix(e.tensor.rows(), e.tensor.cols()));
    }
    return z;
}

void ParamSet::check_compatible(const ParamSet& other, const char* what) const {
    if (entries_.size() != other.entries_.size()) {
        throw std::invalid_argument(std::string(what) + ": parameter count mismatch");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].name != other.entries_[i].name ||
            !entries_[i].tensor.same_shape(other.entries_[i].tensor)) {
            throw std::invalid_argument(std::string(what) + ": mismatch at parameter " +
                                        entries_[i].name);
        }
    }
}

void init_glorot(Matrix& w, RngStream& rng) {
    const double bound = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
    for (double& v : w.values()) {
        v = rng.uniform(-bound, bound);
    }
}

}  // namespace relnet
