#pragma once

#include <string>
#include <vector>

#include "relnet/param_set.hpp"

namespace relnet {

// Rectifier hidden layers, linear output.
struct MlpSpec {
    std::size_t input = 0;
    std::vector<std::size_t> hidden;
    std::size_t output = 0;

    std::vector<std::size_t> layer_sizes() const;  // input, hidden..., output
};

std::size_t mlp_param_count(const MlpSpec& spec);

// Parameters are named <prefix>W0/<prefix>b0, ... so that several MLPs can
// share one ParamSet (e.g. the RN's g and f).
// output_scale multiplies the final layer's weights at init, keeping an
// untrained network's logits near zero.
void mlp_init(const MlpSpec& spec, const std::string& prefix, ParamSet& params,
              RngStream& rng, double output_scale = 1.0);

struct MlpCache {
    // Input to each affine layer (layer_inputs[0] is the network input).
    std::vector<Matrix> layer_inputs;
};

Matrix mlp_forward(const Matrix& x, const MlpSpec& spec, const std::string& prefix,
                   const ParamSet& params, MlpCache* cache = nullptr);

// Accumulates parameter gradients into grads (same names as params) and
// returns the gradient w.r.t. the input.
Matrix mlp_backward(const Matrix& grad_out, const MlpSpec& spec, const std::string& prefix,
                    const ParamSet& params, const MlpCache& cache, ParamSet& grads);

// Two-hidden-layer MLP whose total parameter count best matches `target`
// for the given input/output widths.
MlpSpec match_mlp_by_param_count(std::size_t input, std::size_t output,
                                 std::size_t target_params);

}  // namespace relnet
