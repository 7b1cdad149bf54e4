#pragma once

#include "relnet/param_set.hpp"
#include "relnet/scene.hpp"

namespace relnet {

// Learnable square linear map (no bias) that precedes the RN on entangled
// inputs. Stored in a ParamSet under the name "U".
inline constexpr const char* kDisentangleParam = "U";

void disentangle_init(std::size_t n, ParamSet& params, RngStream& rng);

// out = v U^T per row, i.e. each row v maps to U v. The caller reshapes the
// 160-wide rows to 16x10 scenes (rn_forward takes them flattened).
Matrix disentangle_forward(const Matrix& batch, const ParamSet& params);

// Accumulates dU and returns the gradient w.r.t. the input batch.
Matrix disentangle_backward(const Matrix& grad_out, const Matrix& batch,
                            const ParamSet& params, ParamSet& grads);

// Dense permutation matrix of B: out = B * in for column vectors, matching
// apply_permutation (out[i] = in[perm[i]]).
Matrix permutation_matrix(const Permutation& p);

// Block-concentration score of |U B|: partitions into an object-by-object
// grid of feature blocks and measures how much of each block-column's mass
// sits in its heaviest block-row. 1 means every ground-truth object maps
// into exactly one perceived object slot; uniform spread gives
// 1/object_count.
double ub_block_score(const Matrix& u, const Permutation& b,
                      std::size_t object_count = kObjectCount,
                      std::size_t feature_count = kFeatureCount);

// Monte-Carlo distribution of ub_block_score for Glorot-random U against a
// fixed B; reference point for judging trained scores.
struct UbBaseline {
    double mean = 0.0;
    double stddev = 0.0;
    std::size_t trials = 0;
};

UbBaseline ub_random_baseline(const Permutation& b, std::size_t trials, RngStream& rng,
                              std::size_t object_count = kObjectCount,
                              std::size_t feature_count = kFeatureCount);

// The object_count x object_count block-mass matrix behind the score
// (each entry is the absolute mass of one block of |U B|).
Matrix ub_block_mass(const Matrix& u, const Permutation& b,
                     std::size_t object_count = kObjectCount,
                     std::size_t feature_count = kFeatureCount);

}  // namespace relnet
