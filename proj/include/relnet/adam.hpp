#pragma once

#include <cstdint>
#include <vector>

#include "relnet/param_set.hpp"

namespace relnet {

struct AdamState {
    std::uint64_t step = 0;
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
    ParamSet first_moment;
    ParamSet second_moment;

    static AdamState init(const ParamSet& params, double learning_rate);
};

// Bias-corrected Adam update, in place. Rejects non-finite gradients naming
// the offending parameter.
void adam_step(ParamSet& params, const ParamSet& grads, AdamState& state);

}  // namespace relnet
