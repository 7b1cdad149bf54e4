#pragma once

#include "relnet/mlp.hpp"

namespace relnet {

// f( sum over ordered object pairs (i, j), i != j, of g([o_i; o_j]) ).
// The pair sum runs in a fixed lexicographic pair order, which makes the
// forward pass bit-deterministic while staying exactly permutation
// symmetric in exact arithmetic.
struct RnSpec {
    std::size_t object_count = 16;
    std::size_t feature_count = 10;
    MlpSpec g;  // input 2*feature_count, output g_out
    MlpSpec f;  // input g_out, output target width
};

RnSpec make_rn_spec(std::size_t object_count, std::size_t feature_count,
                    std::vector<std::size_t> g_hidden, std::size_t g_out,
                    std::vector<std::size_t> f_hidden, std::size_t out_dim);

std::size_t rn_param_count(const RnSpec& spec);

// output_scale applies to f's final layer (the 240-pair sum makes the
// aggregate large, so the readout starts small to keep untrained logits
// near zero).
void rn_init(const RnSpec& spec, ParamSet& params, RngStream& rng,
             const std::string& prefix = "", double output_scale = 0.01);

struct RnCache {
    MlpCache g_cache;
    MlpCache f_cache;
    std::size_t batch = 0;
};

// Each row of `batch_flat` is a row-major flattened scene
// (object_count * feature_count wide). Returns batch x out_dim logits.
Matrix rn_forward(const Matrix& batch_flat, const RnSpec& spec, const ParamSet& params,
                  RnCache* cache = nullptr, const std::string& prefix = "");

// Accumulates parameter gradients and returns d loss / d input
// (batch x object_count*feature_count), so an upstream layer can train
// through the RN.
Matrix rn_backward(const Matrix& grad_out, const RnSpec& spec, const ParamSet& params,
                   const RnCache& cache, ParamSet& grads,
                   const std::string& prefix = "");

}  // namespace relnet
