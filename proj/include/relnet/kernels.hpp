#pragma once

#include <cstddef>
#include <string_view>

namespace relnet::kernels {

// Inner-loop kernel table. The scalar versions are the reference
// implementations; the AVX2 versions must agree with them to tight relative
// tolerance (exercised in test_numerics).
struct Ops {
    const char* name;
    // y[i] += a * x[i]
    void (*axpy)(double a, const double* x, double* y, std::size_t n);
    double (*dot)(const double* a, const double* b, std::size_t n);
    // y[i] += x[i]
    void (*add)(const double* x, double* y, std::size_t n);
};

const Ops& scalar_ops();
const Ops& avx2_ops();   // valid to call only if avx2_available()

bool avx2_available();

// Backend picked once at startup: AVX2 when the CPU supports it, else scalar.
const Ops& active_ops();

// Test hook: force a specific backend ("scalar" or "avx2"). Throws on an
// unknown name or an unsupported ISA.
void force_backend(std::string_view name);

}  // namespace relnet::kernels
