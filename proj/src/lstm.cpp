#include "relnet/lstm.hpp"

#include <cmath>
#include <stdexcept>

#include "relnet/kernels.hpp"
#include "relnet/losses.hpp"

namespace relnet {

std::size_t lstm_param_count(const LstmSpec& spec) {
    return 4 * spec.hidden * (spec.input + spec.hidden + 1);
}

void lstm_init(const LstmSpec& spec, const std::string& prefix, ParamSet& params,
               RngStream& rng) {
    if (spec.input == 0 || spec.hidden == 0) {
        throw std::invalid_argument("lstm_init: sizes must be positive");
    }
    Matrix wx(spec.input, 4 * spec.hidden);
    Matrix wh(spec.hidden, 4 * spec.hidden);
    init_glorot(wx, rng);
    init_glorot(wh, rng);
    Matrix b(1, 4 * spec.hidden);
    for (std::size_t i = 0; i < spec.hidden; ++i) {
        b(0, spec.hidden + i) = 1.0;  // forget gate bias
    }
    params.add(prefix + "Wx", std::move(wx));
    params.add(prefix + "Wh", std::move(wh));
    params.add(prefix + "b", std::move(b));
}

LstmState lstm_step(const Matrix& x, const LstmState& state, const LstmSpec& spec,
                    const std::string& prefix, const ParamSet& params,
                    LstmStepCache* cache) {
    const std::size_t h = spec.hidden;
    if (x.rows() != 1 || x.cols() != spec.input) {
        throw std::invalid_argument("lstm_step: input must be 1x" + std::to_string(spec.input) +
                                    ", got " + x.shape_str());
    }
    Matrix pre = affine_forward(x, params.at(prefix + "Wx"), params.at(prefix + "b"));
    Matrix hid = matmul(state.h, params.at(prefix + "Wh"));
    kernels::active_ops().add(hid.data(), pre.data(), pre.size());

    Matrix gi(1, h), gf(1, h), gc(1, h), go(1, h);
    LstmState next = LstmState::zero(h);
    Matrix tanh_c(1, h);
    for (std::size_t k = 0; k < h; ++k) {
        gi(0, k) = sigmoid(pre(0, k));
        gf(0, k) = sigmoid(pre(0, h + k));
        gc(0, k) = std::tanh(pre(0, 2 * h + k));
        go(0, k) = sigmoid(pre(0, 3 * h + k));
        next.c(0, k) = gf(0, k) * state.c(0, k) + gi(0, k) * gc(0, k);
        tanh_c(0, k) = std::tanh(next.c(0, k));
        next.h(0, k) = go(0, k) * tanh_c(0, k);
    }
    if (cache != nullptr) {
        cache->x = x;
        cache->h_prev = state.h;
        cache->c_prev = state.c;
        cache->gi = std::move(gi);
        cache->gf = std::move(gf);
        cache->gc = std::move(gc);
        cache->go = std::move(go);
        cache->c_new = next.c;
        cache->tanh_c_new = std::move(tanh_c);
    }
    return next;
}

LstmStepGrads lstm_step_backward(const Matrix& dh, const Matrix& dc, const LstmSpec& spec,
                                 const std::string& prefix, const ParamSet& params,
                                 const LstmStepCache& cache, ParamSet& grads) {
    const std::size_t h = spec.hidden;
    const auto& ops = kernels::active_ops();

    Matrix dpre(1, 4 * h);
    Matrix dc_total = dc;
    LstmStepGrads out;
    out.dc_prev = Matrix(1, h);
    for (std::size_t k = 0; k < h; ++k) {
        const double tc = cache.tanh_c_new(0, k);
        const double go = cache.go(0, k);
        // h = go * tanh(c)
        const double d_go = dh(0, k) * tc;
        dc_total(0, k) += dh(0, k) * go * (1.0 - tc * tc);

        const double gi = cache.gi(0, k);
        const double gf = cache.gf(0, k);
        const double gc = cache.gc(0, k);
        const double d_gi = dc_total(0, k) * gc;
        const double d_gf = dc_total(0, k) * cache.c_prev(0, k);
        const double d_gc = dc_total(0, k) * gi;
        out.dc_prev(0, k) = dc_total(0, k) * gf;

        dpre(0, k) = d_gi * gi * (1.0 - gi);
        dpre(0, h + k) = d_gf * gf * (1.0 - gf);
        dpre(0, 2 * h + k) = d_gc * (1.0 - gc * gc);
        dpre(0, 3 * h + k) = d_go * go * (1.0 - go);
    }

    Matrix dwx = matmul_tn(cache.x, dpre);
    Matrix dwh = matmul_tn(cache.h_prev, dpre);
    Matrix& gwx = grads.at(prefix + "Wx");
    Matrix& gwh = grads.at(prefix + "Wh");
    Matrix& gb = grads.at(prefix + "b");
    ops.add(dwx.data(), gwx.data(), gwx.size());
    ops.add(dwh.data(), gwh.data(), gwh.size());
    ops.add(dpre.data(), gb.data(), gb.size());

    out.dx = matmul_nt(dpre, params.at(prefix + "Wx"));
    out.dh_prev = matmul_nt(dpre, params.at(prefix + "Wh"));
    return out;
}

}  // namespace relnet
