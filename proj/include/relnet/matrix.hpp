#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace relnet {

// Dense row-major double matrix. The storage for scene descriptions, weights
// and activations alike.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    double* row(std::size_t r) { return data_.data() + r * cols_; }
    const double* row(std::size_t r) const { return data_.data() + r * cols_; }
    std::vector<double>& values() { return data_; }
    const std::vector<double>& values() const { return data_; }

    bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }
    std::string shape_str() const;

    bool all_finite() const;
    void fill(double v);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// y = x W + b, b is 1 x out (broadcast over rows); b may be empty for "no bias".
Matrix affine_forward(const Matrix& x, const Matrix& W, const Matrix& b);

// c = a b
Matrix matmul(const Matrix& a, const Matrix& b);
// c = a^T b
Matrix matmul_tn(const Matrix& a, const Matrix& b);
// c = a b^T
Matrix matmul_nt(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

void check_same_shape(const Matrix& a, const Matrix& b, const char* what);

}  // namespace relnet
