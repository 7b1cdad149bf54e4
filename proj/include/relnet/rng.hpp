#pragma once

#include <cstdint>

namespace relnet {

// Counter-based splittable random stream. The draw at position k is a pure
// function of (seed, stream_id, k), so streams can be split freely for
// parallel generation and replayed exactly.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    // Independent stream derived from this stream's identity.
    RngStream split(std::uint64_t child_id) const;

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    std::uint64_t uniform_index(std::uint64_t n);  // {0, ..., n-1}

    double gaussian();                      // N(0, 1)
    double gaussian(double sigma);
    double half_normal(double sigma);       // |N(0, sigma^2)|, sigma >= 0

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::uint64_t base_;
    std::uint64_t counter_ = 0;
};

}  // namespace relnet
