#include "relnet/adam.hpp"

#include <cmath>
#include <stdexcept>

namespace relnet {

AdamState AdamState::init(const ParamSet& params, double learning_rate) {
    AdamState s;
    s.learning_rate = learning_rate;
    s.first_moment = params.zeros_like();
    s.second_moment = params.zeros_like();
    return s;
}

void adam_step(ParamSet& params, const ParamSet& grads, AdamState& state) {
    params.check_compatible(grads, "adam_step");
    params.check_compatible(state.first_moment, "adam_step moments");

    state.step += 1;
    const double t = static_cast<double>(state.step);
    const double bc1 = 1.0 - std::pow(state.beta1, t);
    const double bc2 = 1.0 - std::pow(state.beta2, t);

    for (std::size_t p = 0; p < params.count(); ++p) {
        auto& w = params.entry(p).tensor.values();
        const auto& g = grads.entry(p).tensor.values();
        auto& m = state.first_moment.entry(p).tensor.values();
        auto& v = state.second_moment.entry(p).tensor.values();
        for (std::size_t i = 0; i < w.size(); ++i) {
            if (!std::isfinite(g[i])) {
                throw std::runtime_error("adam_step: non-finite gradient in parameter " +
                                         params.entry(p).name);
            }
            m[i] = state.beta1 * m[i] + (1.0 - state.beta1) * g[i];
            v[i] = state.beta2 * v[i] + (1.0 - state.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            w[i] -= state.learning_rate * m_hat / (std::sqrt(v_hat) + state.epsilon);
        }
    }
}

}  // namespace relnet
