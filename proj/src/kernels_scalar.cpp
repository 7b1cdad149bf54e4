#include "relnet/kernels.hpp"

namespace relnet::kernels {

namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += a * x[i];
    }
}

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        s += a[i] * b[i];
    }
    return s;
}

void add_scalar(const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += x[i];
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops{"scalar", axpy_scalar, dot_scalar, add_scalar};
    return ops;
}

}  // namespace relnet::kernels
