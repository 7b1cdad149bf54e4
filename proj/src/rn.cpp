#include "relnet/rn.hpp"

#include <cstring>
#include <stdexcept>

#include "relnet/kernels.hpp"

namespace relnet {

RnSpec make_rn_spec(std::size_t object_count, std::size_t feature_count,
                    std::vector<std::size_t> g_hidden, std::size_t g_out,
                    std::vector<std::size_t> f_hidden, std::size_t out_dim) {
    RnSpec spec;
    spec.object_count = object_count;
    spec.feature_count = feature_count;
    spec.g = {2 * feature_count, std::move(g_hidden), g_out};
    spec.f = {g_out, std::move(f_hidden), out_dim};
    return spec;
}

std::size_t rn_param_count(const RnSpec& spec) {
    return mlp_param_count(spec.g) + mlp_param_count(spec.f);
}

void rn_init(const RnSpec& spec, ParamSet& params, RngStream& rng,
             const std::string& prefix, double output_scale) {
    if (spec.g.input != 2 * spec.feature_count) {
        throw std::invalid_argument("rn_init: g input width must be 2 * feature_count");
    }
    if (spec.f.input != spec.g.output) {
        throw std::invalid_argument("rn_init: f input width must equal g output width");
    }
    mlp_init(spec.g, prefix + "g.", params, rng);
    mlp_init(spec.f, prefix + "f.", params, rng, output_scale);
}

namespace {

std::size_t pair_count(const RnSpec& spec) {
    return spec.object_count * (spec.object_count - 1);
}

// Rows of the pair matrix: for each scene, ordered pairs (i, j), i != j, in
// lexicographic order; each row is [o_i ; o_j].
Matrix build_pair_matrix(const Matrix& batch_flat, const RnSpec& spec) {
    const std::size_t m = spec.object_count;
    const std::size_t n = spec.feature_count;
    const std::size_t batch = batch_flat.rows();
    Matrix pairs(batch * pair_count(spec), 2 * n);
    std::size_t row = 0;
    for (std::size_t s = 0; s < batch; ++s) {
        const double* scene = batch_flat.row(s);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (i == j) {
                    continue;
                }
                double* dst = pairs.row(row++);
                std::memcpy(dst, scene + i * n, n * sizeof(double));
                std::memcpy(dst + n, scene + j * n, n * sizeof(double));
            }
        }
    }
    return pairs;
}

}  // namespace

Matrix rn_forward(const Matrix& batch_flat, const RnSpec& spec, const ParamSet& params,
                  RnCache* cache, const std::string& prefix) {
    const std::size_t m = spec.object_count;
    const std::size_t n = spec.feature_count;
    if (batch_flat.cols() != m * n) {
        throw std::invalid_argument("rn_forward: input width " +
                                    std::to_string(batch_flat.cols()) +
                                    " does not match scene size " + std::to_string(m * n));
    }
    const std::size_t batch = batch_flat.rows();
    const std::size_t pc = pair_count(spec);
    const auto& ops = kernels::active_ops();

    Matrix pairs = build_pair_matrix(batch_flat, spec);
    MlpCache local_g;
    MlpCache* gc = cache != nullptr ? &cache->g_cache : &local_g;
    Matrix g_out = mlp_forward(pairs, spec.g, prefix + "g.", params, gc);

    // Aggregate in fixed pair order.
    Matrix agg(batch, spec.g.output);
    for (std::size_t s = 0; s < batch; ++s) {
        for (std::size_t p = 0; p < pc; ++p) {
            ops.add(g_out.row(s * pc + p), agg.row(s), spec.g.output);
        }
    }

    MlpCache local_f;
    MlpCache* fc = cache != nullptr ? &cache->f_cache : &local_f;
    Matrix logits = mlp_forward(agg, spec.f, prefix + "f.", params, fc);
    if (cache != nullptr) {
        cache->batch = batch;
    }
    return logits;
}

Matrix rn_backward(const Matrix& grad_out, const RnSpec& spec, const ParamSet& params,
                   const RnCache& cache, ParamSet& grads,
                   const std::string& prefix) {
    const std::size_t m = spec.object_count;
    const std::size_t n = spec.feature_count;
    const std::size_t batch = cache.batch;
    const std::size_t pc = pair_count(spec);
    if (grad_out.rows() != batch) {
        throw std::invalid_argument("rn_backward: grad batch mismatch with cache");
    }
    const auto& ops = kernels::active_ops();

    Matrix d_agg = mlp_backward(grad_out, spec.f, prefix + "f.", params, cache.f_cache, grads);

    // Broadcast the aggregate gradient to every pair row of its scene.
    Matrix d_gout(batch * pc, spec.g.output);
    for (std::size_t s = 0; s < batch; ++s) {
        for (std::size_t p = 0; p < pc; ++p) {
            std::memcpy(d_gout.row(s * pc + p), d_agg.row(s),
                        spec.g.output * sizeof(double));
        }
    }

    Matrix d_pairs = mlp_backward(d_gout, spec.g, prefix + "g.", params, cache.g_cache, grads);

    // Scatter pair-input gradients back to the objects.
    Matrix d_input(batch, m * n);
    std::size_t row = 0;
    for (std::size_t s = 0; s < batch; ++s) {
        double* dscene = d_input.row(s);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (i == j) {
                    continue;
                }
                const double* dp = d_pairs.row(row++);
                ops.add(dp, dscene + i * n, n);
                ops.add(dp + n, dscene + j * n, n);
            }
        }
    }
    return d_input;
}

}  // namespace relnet
