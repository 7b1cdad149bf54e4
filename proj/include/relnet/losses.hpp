#pragma once

#include <utility>

#include "relnet/matrix.hpp"

namespace relnet {

struct LossResult {
    double loss = 0.0;
    Matrix grad;  // d loss / d logits
};

// Mean binary cross entropy over all entries, evaluated in the stable
// max(z,0) - z t + log1p(exp(-|z|)) form. Targets must be exactly 0 or 1.
LossResult sigmoid_bce(const Matrix& logits, const Matrix& targets);

// Mean softmax cross entropy over rows. Each target row must be one-hot.
LossResult softmax_xent(const Matrix& logits, const Matrix& one_hot_targets);

double sigmoid(double z);

// Row-wise softmax (shift-by-max).
Matrix softmax_rows(const Matrix& logits);

}  // namespace relnet
