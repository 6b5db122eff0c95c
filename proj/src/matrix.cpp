#include "homefit/matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace homefit {

namespace {

void check_finite(const std::vector<double>& data, const char* what) {
    for (std::size_t i = 0; i < data.size(); ++i) {
        if (!std::isfinite(data[i])) {
            throw std::invalid_argument(std::string(what) + ": non-finite entry at index " +
                                        std::to_string(i));
        }
    }
}

}  // namespace

RealVector::RealVector(std::vector<double> data) : data_(std::move(data)) {
    check_finite(data_, "RealVector");
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("DenseMatrix: data size " + std::to_string(data_.size()) +
                                    " does not match " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
    }
    check_finite(data_, "DenseMatrix");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    std::size_t r = rows.size();
    std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<double> data;
    data.reserve(r * c);
    for (const auto& row : rows) {
        if (row.size() != c) throw std::invalid_argument("DenseMatrix::from_rows: ragged rows");
        data.insert(data.end(), row.begin(), row.end());
    }
    return DenseMatrix(r, c, std::move(data));
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimensions " + std::to_string(a.cols()) +
                                    " and " + std::to_string(b.rows()) + " do not match");
    }
    DenseMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * b(k, j);
            out(i, j) = acc;
        }
    }
    return out;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

DenseMatrix gram(const DenseMatrix& a) {
    DenseMatrix out(a.cols(), a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.rows(); ++k) acc += a(k, i) * a(k, j);
            out(i, j) = acc;
        }
    }
    return out;
}

DenseMatrix augment_ones(const DenseMatrix& x) {
    DenseMatrix out(x.rows(), x.cols() + 1);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        out(i, 0) = 1.0;
        for (std::size_t j = 0; j < x.cols(); ++j) out(i, j + 1) = x(i, j);
    }
    return out;
}

RealVector matvec(const DenseMatrix& a, const RealVector& v) {
    if (a.cols() != v.size()) {
        throw std::invalid_argument("matvec: matrix has " + std::to_string(a.cols()) +
                                    " columns but vector has " + std::to_string(v.size()));
    }
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double acc = 0.0;
        for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * v[k];
        out[i] = acc;
    }
    return RealVector(std::move(out));
}

RealVector transpose_matvec(const DenseMatrix& a, const RealVector& y) {
    if (a.rows() != y.size()) {
        throw std::invalid_argument("transpose_matvec: matrix has " + std::to_string(a.rows()) +
                                    " rows but vector has " + std::to_string(y.size()));
    }
    std::vector<double> out(a.cols(), 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        double acc = 0.0;
        for (std::size_t i = 0; i < a.rows(); ++i) acc += a(i, j) * y[i];
        out[j] = acc;
    }
    return RealVector(std::move(out));
}

double dot(const RealVector& a, const RealVector& b) {
    if (a.size() != b.size()) {
        throw std::invalid_argument("dot: lengths " + std::to_string(a.size()) + " and " +
                                    std::to_string(b.size()) + " differ");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double frobenius_norm(const DenseMatrix& a) {
    double acc = 0.0;
    for (double v : a.data()) acc += v * v;
    return std::sqrt(acc);
}

}  // namespace homefit
