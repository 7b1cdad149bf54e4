#include "relnet/rng.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace relnet {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id),
      base_(mix64(mix64(seed + kGolden) ^ mix64(stream_id * kGolden + 1))) {}

RngStream RngStream::split(std::uint64_t child_id) const {
    return RngStream(seed_, mix64(stream_id_ + kGolden) ^ child_id);
}

std::uint64_t RngStream::next_u64() {
    ++counter_;
    return mix64(base_ + counter_ * kGolden);
}

double RngStream::uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform();
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("uniform_index: n must be positive");
    }
    return next_u64() % n;
}

double RngStream::gaussian() {
    // Box-Muller, no cached spare: every call consumes exactly two draws.
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
}

double RngStream::gaussian(double sigma) {
    return sigma * gaussian();
}

double RngStream::half_normal(double sigma) {
    if (sigma < 0.0) {
        throw std::invalid_argument("half_normal: sigma must be >= 0");
    }
    if (sigma == 0.0) {
        return 0.0;
    }
    return std::abs(gaussian(sigma));
}

}  // namespace relnet
