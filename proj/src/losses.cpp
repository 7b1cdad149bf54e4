#include "relnet/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace relnet {

double sigmoid(double z) {
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

LossResult sigmoid_bce(const Matrix& logits, const Matrix& targets) {
    check_same_shape(logits, targets, "sigmoid_bce");
    const std::size_t n = logits.size();
    if (n == 0) {
        throw std::invalid_argument("sigmoid_bce: empty input");
    }
    LossResult out;
    out.grad = Matrix(logits.rows(), logits.cols());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = logits.values()[i];
        const double t = targets.values()[i];
        if (t != 0.0 && t != 1.0) {
            throw std::invalid_argument("sigmoid_bce: target entries must be 0 or 1");
        }
        total += std::max(z, 0.0) - z * t + std::log1p(std::exp(-std::abs(z)));
        out.grad.values()[i] = (sigmoid(z) - t) / static_cast<double>(n);
    }
    out.loss = total / static_cast<double>(n);
    return out;
}

Matrix softmax_rows(const Matrix& logits) {
    Matrix p(logits.rows(), logits.cols());
    for (std::size_t r = 0; r < logits.rows(); ++r) {
        double mx = logits(r, 0);
        for (std::size_t c = 1; c < logits.cols(); ++c) {
            mx = std::max(mx, logits(r, c));
        }
        double denom = 0.0;
        for (std::size_t c = 0; c < logits.cols(); ++c) {
            p(r, c) = std::exp(logits(r, c) - mx);
            denom += p(r, c);
        }
        for (std::size_t c = 0; c < logits.cols(); ++c) {
            p(r, c) /= denom;
        }
    }
    return p;
}

LossResult softmax_xent(const Matrix& logits, const Matrix& one_hot_targets) {
    check_same_shape(logits, one_hot_targets, "softmax_xent");
    const std::size_t batch = logits.rows();
    if (batch == 0) {
        throw std::invalid_argument("softmax_xent: empty batch");
    }
    for (std::size_t r = 0; r < batch; ++r) {
        double sum = 0.0;
        for (std::size_t c = 0; c < one_hot_targets.cols(); ++c) {
            const double t = one_hot_targets(r, c);
            if (t != 0.0 && t != 1.0) {
                throw std::invalid_argument("softmax_xent: target row " +
                                            std::to_string(r) + " is not one-hot");
            }
            sum += t;
        }
        if (sum != 1.0) {
            throw std::invalid_argument("softmax_xent: target row " +
                                        std::to_string(r) + " is not one-hot");
        }
    }

    LossResult out;
    Matrix p = softmax_rows(logits);
    out.grad = Matrix(logits.rows(), logits.cols());
    double total = 0.0;
    for (std::size_t r = 0; r < batch; ++r) {
        double mx = logits(r, 0);
        for (std::size_t c = 1; c < logits.cols(); ++c) {
            mx = std::max(mx, logits(r, c));
        }
        double lse = 0.0;
        for (std::size_t c = 0; c < logits.cols(); ++c) {
            lse += std::exp(logits(r, c) - mx);
        }
        lse = mx + std::log(lse);
        for (std::size_t c = 0; c < logits.cols(); ++c) {
            const double t = one_hot_targets(r, c);
            if (t == 1.0) {
                total += lse - logits(r, c);
            }
            out.grad(r, c) = (p(r, c) - t) / static_cast<double>(batch);
        }
    }
    out.loss = total / static_cast<double>(batch);
    return out;
}

}  // namespace relnet
