#include "relnet/mlp.hpp"

#include <stdexcept>

#include "relnet/kernels.hpp"

namespace relnet {

std::vector<std::size_t> MlpSpec::layer_sizes() const {
    std::vector<std::size_t> sizes;
    sizes.push_back(input);
    sizes.insert(sizes.end(), hidden.begin(), hidden.end());
    sizes.push_back(output);
    return sizes;
}

std::size_t mlp_param_count(const MlpSpec& spec) {
    const auto sizes = spec.layer_sizes();
    std::size_t n = 0;
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        n += sizes[l] * sizes[l + 1] + sizes[l + 1];
    }
    return n;
}

void mlp_init(const MlpSpec& spec, const std::string& prefix, ParamSet& params,
              RngStream& rng, double output_scale) {
    if (spec.input == 0 || spec.output == 0) {
        throw std::invalid_argument("mlp_init: layer sizes must be positive");
    }
    const auto sizes = spec.layer_sizes();
    for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
        Matrix w(sizes[l], sizes[l + 1]);
        init_glorot(w, rng);
        if (l + 2 == sizes.size() && output_scale != 1.0) {
            for (double& v : w.values()) {
                v *= output_scale;
            }
        }
        params.add(prefix + "W" + std::to_string(l), std::move(w));
        params.add(prefix + "b" + std::to_string(l), Matrix(1, sizes[l + 1]));
    }
}

Matrix mlp_forward(const Matrix& x, const MlpSpec& spec, const std::string& prefix,
                   const ParamSet& params, MlpCache* cache) {
    const auto sizes = spec.layer_sizes();
    const std::size_t layers = sizes.size() - 1;
    Matrix a = x;
    if (cache != nullptr) {
        cache->layer_inputs.clear();
    }
    for (std::size_t l = 0; l < layers; ++l) {
        if (cache != nullptr) {
            cache->layer_inputs.push_back(a);
        }
        const Matrix& w = params.at(prefix + "W" + std::to_string(l));
        const Matrix& b = params.at(prefix + "b" + std::to_string(l));
        a = affine_forward(a, w, b);
        if (l + 1 < layers) {
            for (double& v : a.values()) {
                v = v > 0.0 ? v : 0.0;
            }
        }
    }
    return a;
}

Matrix mlp_backward(const Matrix& grad_out, const MlpSpec& spec, const std::string& prefix,
                    const ParamSet& params, const MlpCache& cache, ParamSet& grads) {
    const auto sizes = spec.layer_sizes();
    const std::size_t layers = sizes.size() - 1;
    if (cache.layer_inputs.size() != layers) {
        throw std::invalid_argument("mlp_backward: stale or missing cache");
    }
    const auto& ops = kernels::active_ops();
    Matrix dy = grad_out;
    for (std::size_t l = layers; l-- > 0;) {
        const Matrix& x = cache.layer_inputs[l];
        const std::string wname = prefix + "W" + std::to_string(l);
        const std::string bname = prefix + "b" + std::to_string(l);
        const Matrix& w = params.at(wname);

        Matrix dw = matmul_tn(x, dy);
        Matrix& gw = grads.at(wname);
        ops.add(dw.data(), gw.data(), gw.size());

        Matrix& gb = grads.at(bname);
        for (std::size_t r = 0; r < dy.rows(); ++r) {
            ops.add(dy.row(r), gb.data(), gb.size());
        }

        Matrix dx = matmul_nt(dy, w);
        if (l > 0) {
            // Rectifier mask: the layer input of level l is the activated
            // output of level l-1, so positivity there gives the mask.
            for (std::size_t i = 0; i < dx.size(); ++i) {
                if (x.values()[i] <= 0.0) {
                    dx.values()[i] = 0.0;
                }
            }
        }
        dy = std::move(dx);
    }
    return dy;
}

MlpSpec match_mlp_by_param_count(std::size_t input, std::size_t output,
                                 std::size_t target_params) {
    MlpSpec best;
    std::size_t best_err = static_cast<std::size_t>(-1);
    for (std::size_t w = 1; w <= 4096; ++w) {
        MlpSpec s{input, {w, w}, output};
        const std::size_t n = mlp_param_count(s);
        const std::size_t err = n > target_params ? n - target_params : target_params - n;
        if (err < best_err) {
            best_err = err;
            best = s;
        }
        if (n > target_params && err > best_err) {
            break;
        }
    }
    return best;
}

}  // namespace relnet
