#ifndef HOMEFIT_MATRIX_HPP
#define HOMEFIT_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <vector>

namespace homefit {

// Dense vector of finite doubles. Every entry is checked finite on
// construction; operations that build results re-validate through the
// constructor.
class RealVector {
public:
    RealVector() = default;
    explicit RealVector(std::size_t size) : data_(size, 0.0) {}
    explicit RealVector(std::vector<double> data);
    RealVector(std::initializer_list<double> init)
        : RealVector(std::vector<double>(init)) {}

    std::size_t size() const noexcept { return data_.size(); }
    double operator[](std::size_t i) const { return data_[i]; }
    double& operator[](std::size_t i) { return data_[i]; }
    const std::vector<double>& data() const noexcept { return data_; }

    auto begin() const noexcept { return data_.begin(); }
    auto end() const noexcept { return data_.end(); }

private:
    std::vector<double> data_;
};

// Row-major dense matrix of finite doubles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static DenseMatrix identity(std::size_t n);
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const std::vector<double>& data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// All sums below run over ascending index, so results are bitwise
// reproducible across runs and platforms with the same inputs.

// a (m x k) times b (k x n); throws std::invalid_argument on inner mismatch
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);

// a^T a; exactly symmetric because entry (i,j) and (j,i) sum identical terms
DenseMatrix gram(const DenseMatrix& a);

// prepend a column of ones
DenseMatrix augment_ones(const DenseMatrix& x);

// a (m x n) times v (n); ascending-index accumulation per row
RealVector matvec(const DenseMatrix& a, const RealVector& v);

// a^T (m x n)^T times y (m): result[j] = sum_i a(i,j) y[i], ascending i
RealVector transpose_matvec(const DenseMatrix& a, const RealVector& y);

double dot(const RealVector& a, const RealVector& b);

double frobenius_norm(const DenseMatrix& a);

}  // namespace homefit

#endif
