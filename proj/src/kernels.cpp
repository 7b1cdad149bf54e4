#include "relnet/kernels.hpp"

#include <stdexcept>
#include <string>

namespace relnet::kernels {

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {
const Ops* g_active = nullptr;
}

const Ops& active_ops() {
    if (g_active == nullptr) {
        g_active = avx2_available() ? &avx2_ops() : &scalar_ops();
    }
    return *g_active;
}

void force_backend(std::string_view name) {
    if (name == "scalar") {
        g_active = &scalar_ops();
    } else if (name == "avx2") {
        if (!avx2_available()) {
            throw std::runtime_error("avx2 backend requested but not supported on this CPU");
        }
        g_active = &avx2_ops();
    } else {
        throw std::invalid_argument("unknown kernel backend: " + std::string(name));
    }
}

}  // namespace relnet::kernels
