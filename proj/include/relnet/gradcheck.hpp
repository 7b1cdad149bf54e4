#pragma once

#include <functional>

#include "relnet/param_set.hpp"
#include "relnet/rng.hpp"

namespace relnet {

// Evaluates loss and its analytic gradient w.r.t. params.
using LossGradFn = std::function<std::pair<double, ParamSet>(const ParamSet&)>;
// Evaluates loss only (used for the central differences).
using LossOnlyFn = std::function<double(const ParamSet&)>;

// Compares the analytic gradient to central differences at probe_count
// randomly chosen scalar coordinates. Returns the max relative error
// |a - n| / max(|a|, |n|, 1e-8).
double finite_diff_gradcheck(const LossGradFn& fn, const ParamSet& params,
                             std::size_t probe_count, double eps, RngStream& rng);

// Same check against an externally supplied analytic gradient (useful when
// the gradient w.r.t. an input rather than a parameter is under test).
double finite_diff_against(const LossOnlyFn& loss_fn, const ParamSet& params,
                           const ParamSet& analytic_grads,
                           std::size_t probe_count, double eps, RngStream& rng);

}  // namespace relnet
