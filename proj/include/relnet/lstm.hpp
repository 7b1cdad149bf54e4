#pragma once

#include <string>

#include "relnet/param_set.hpp"

namespace relnet {

struct LstmSpec {
    std::size_t input = 0;
    std::size_t hidden = 0;
};

std::size_t lstm_param_count(const LstmSpec& spec);

// Parameters: <prefix>Wx (input x 4h), <prefix>Wh (h x 4h), <prefix>b (1 x 4h).
// Gate column order: [input, forget, candidate, output]. Forget bias starts
// at 1.
void lstm_init(const LstmSpec& spec, const std::string& prefix, ParamSet& params,
               RngStream& rng);

struct LstmState {
    Matrix h;  // 1 x hidden
    Matrix c;  // 1 x hidden
    static LstmState zero(std::size_t hidden) { return {Matrix(1, hidden), Matrix(1, hidden)}; }
};

struct LstmStepCache {
    Matrix x;
    Matrix h_prev;
    Matrix c_prev;
    Matrix gi, gf, gc, go;  // post-nonlinearity gate values, 1 x h each
    Matrix c_new;
    Matrix tanh_c_new;
};

LstmState lstm_step(const Matrix& x, const LstmState& state, const LstmSpec& spec,
                    const std::string& prefix, const ParamSet& params,
                    LstmStepCache* cache = nullptr);

struct LstmStepGrads {
    Matrix dx;
    Matrix dh_prev;
    Matrix dc_prev;
};

// dh/dc are the gradients arriving at this step's outputs. Parameter
// gradients are accumulated into grads.
LstmStepGrads lstm_step_backward(const Matrix& dh, const Matrix& dc, const LstmSpec& spec,
                                 const std::string& prefix, const ParamSet& params,
                                 const LstmStepCache& cache, ParamSet& grads);

}  // namespace relnet
