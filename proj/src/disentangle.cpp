#include "relnet/disentangle.hpp"

#include <cmath>
#include <stdexcept>

#include "relnet/kernels.hpp"

namespace relnet {

void disentangle_init(std::size_t n, ParamSet& params, RngStream& rng) {
    Matrix u(n, n);
    init_glorot(u, rng);
    params.add(kDisentangleParam, std::move(u));
}

Matrix disentangle_forward(const Matrix& batch, const ParamSet& params) {
    const Matrix& u = params.at(kDisentangleParam);
    if (batch.cols() != u.cols()) {
        throw std::invalid_argument("disentangle_forward: input width " +
                                    std::to_string(batch.cols()) + " does not match U " +
                                    u.shape_str());
    }
    return matmul_nt(batch, u);
}

Matrix disentangle_backward(const Matrix& grad_out, const Matrix& batch,
                            const ParamSet& params, ParamSet& grads) {
    const Matrix& u = params.at(kDisentangleParam);
    Matrix du = matmul_tn(grad_out, batch);
    Matrix& gu = grads.at(kDisentangleParam);
    kernels::active_ops().add(du.data(), gu.data(), gu.size());
    return matmul(grad_out, u);
}

Matrix permutation_matrix(const Permutation& p) {
    Matrix b(p.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        b(i, p.perm[i]) = 1.0;
    }
    return b;
}

Matrix ub_block_mass(const Matrix& u, const Permutation& b,
                     std::size_t object_count, std::size_t feature_count) {
    const std::size_t n = object_count * feature_count;
    if (u.rows() != n || u.cols() != n || b.size() != n) {
        throw std::invalid_argument("ub_block_mass: U must be " + std::to_string(n) +
                                    "x" + std::to_string(n) + ", got " + u.shape_str());
    }
    // (U B)[i][j] = U[i][k] with perm[k] = j, so UB is a column gather of U.
    const Permutation inv = b.inverse();
    Matrix mass(object_count, object_count);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            mass(i / feature_count, j / feature_count) += std::abs(u(i, inv.perm[j]));
        }
    }
    return mass;
}

double ub_block_score(const Matrix& u, const Permutation& b,
                      std::size_t object_count, std::size_t feature_count) {
    const Matrix mass = ub_block_mass(u, b, object_count, feature_count);
    double score = 0.0;
    for (std::size_t j = 0; j < object_count; ++j) {
        double total = 0.0;
        double best = 0.0;
        for (std::size_t i = 0; i < object_count; ++i) {
            total += mass(i, j);
            best = std::max(best, mass(i, j));
        }
        score += total > 0.0 ? best / total : 1.0 / static_cast<double>(object_count);
    }
    return score / static_cast<double>(object_count);
}

UbBaseline ub_random_baseline(const Permutation& b, std::size_t trials, RngStream& rng,
                              std::size_t object_count, std::size_t feature_count) {
    if (trials < 2) {
        throw std::invalid_argument("ub_random_baseline: need at least 2 trials");
    }
    const std::size_t n = object_count * feature_count;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        RngStream trial_rng = rng.split(t);
        Matrix u(n, n);
        init_glorot(u, trial_rng);
        const double s = ub_block_score(u, b, object_count, feature_count);
        sum += s;
        sum_sq += s * s;
    }
    UbBaseline out;
    out.trials = trials;
    out.mean = sum / static_cast<double>(trials);
    const double var = sum_sq / static_cast<double>(trials) - out.mean * out.mean;
    out.stddev = std::sqrt(std::max(var, 0.0));
    return out;
}

}  // namespace relnet
