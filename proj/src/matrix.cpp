#include "relnet/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "relnet/kernels.hpp"

namespace relnet {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("Matrix: value count " + std::to_string(data_.size()) +
                                    " does not match shape " + shape_str());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

std::string Matrix::shape_str() const {
    return std::to_string(rows_) + "x" + std::to_string(cols_);
}

bool Matrix::all_finite() const {
    for (double v : data_) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

void Matrix::fill(double v) {
    for (double& x : data_) {
        x = v;
    }
}

void check_same_shape(const Matrix& a, const Matrix& b, const char* what) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument(std::string(what) + ": shape mismatch " +
                                    a.shape_str() + " vs " + b.shape_str());
    }
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: shape mismatch " + a.shape_str() +
                                    " * " + b.shape_str());
    }
    const auto& ops = kernels::active_ops();
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double* arow = a.row(i);
        double* crow = c.row(i);
        for (std::size_t k = 0; k < a.cols(); ++k) {
            ops.axpy(arow[k], b.row(k), crow, b.cols());
        }
    }
    return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("matmul_tn: shape mismatch " + a.shape_str() +
                                    "^T * " + b.shape_str());
    }
    const auto& ops = kernels::active_ops();
    Matrix c(a.cols(), b.cols());
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const double* arow = a.row(k);
        const double* brow = b.row(k);
        for (std::size_t i = 0; i < a.cols(); ++i) {
            ops.axpy(arow[i], brow, c.row(i), b.cols());
        }
    }
    return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.cols()) {
        throw std::invalid_argument("matmul_nt: shape mismatch " + a.shape_str() +
                                    " * " + b.shape_str() + "^T");
    }
    const auto& ops = kernels::active_ops();
    Matrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* crow = c.row(i);
        for (std::size_t j = 0; j < b.rows(); ++j) {
            crow[j] = ops.dot(a.row(i), b.row(j), a.cols());
        }
    }
    return c;
}

Matrix affine_forward(const Matrix& x, const Matrix& W, const Matrix& b) {
    if (x.cols() != W.rows()) {
        throw std::invalid_argument("affine_forward: input " + x.shape_str() +
                                    " incompatible with weights " + W.shape_str());
    }
    if (b.size() != 0 && (b.rows() != 1 || b.cols() != W.cols())) {
        throw std::invalid_argument("affine_forward: bias " + b.shape_str() +
                                    " incompatible with weights " + W.shape_str());
    }
    Matrix y = matmul(x, W);
    if (b.size() != 0) {
        const auto& ops = kernels::active_ops();
        for (std::size_t i = 0; i < y.rows(); ++i) {
            ops.add(b.row(0), y.row(i), y.cols());
        }
    }
    return y;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            t(j, i) = a(i, j);
        }
    }
    return t;
}

}  // namespace relnet
