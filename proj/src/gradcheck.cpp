#include "relnet/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relnet {

double finite_diff_against(const LossOnlyFn& loss_fn, const ParamSet& params,
                           const ParamSet& analytic_grads,
                           std::size_t probe_count, double eps, RngStream& rng) {
    if (eps < 1e-7 || eps > 1e-3) {
        throw std::invalid_argument("gradcheck: eps must be in [1e-7, 1e-3]");
    }
    const std::size_t n = params.scalar_count();
    if (n == 0) {
        return 0.0;
    }
    ParamSet work = params;
    double max_rel = 0.0;
    for (std::size_t probe = 0; probe < probe_count; ++probe) {
        const std::size_t idx = rng.uniform_index(n);
        const double w0 = work.get_scalar(idx);

        work.set_scalar(idx, w0 + eps);
        const double lp = loss_fn(work);
        work.set_scalar(idx, w0 - eps);
        const double lm = loss_fn(work);
        work.set_scalar(idx, w0);

        if (!std::isfinite(lp) || !std::isfinite(lm)) {
            throw std::runtime_error("gradcheck: non-finite loss at coordinate " +
                                     std::to_string(idx));
        }
        const double numeric = (lp - lm) / (2.0 * eps);
        const double analytic = analytic_grads.get_scalar(idx);
        const double rel = std::abs(analytic - numeric) /
                           std::max({std::abs(analytic), std::abs(numeric), 1e-8});
        max_rel = std::max(max_rel, rel);
    }
    return max_rel;
}

double finite_diff_gradcheck(const LossGradFn& fn, const ParamSet& params,
                             std::size_t probe_count, double eps, RngStream& rng) {
    auto [loss0, grads] = fn(params);
    if (!std::isfinite(loss0)) {
        throw std::runtime_error("gradcheck: non-finite loss at base point");
    }
    auto loss_only = [&fn](const ParamSet& p) { return fn(p).first; };
    return finite_diff_against(loss_only, params, grads, probe_count, eps, rng);
}

}  // namespace relnet
