#ifndef HOMEFIT_SOLVERS_HPP
#define HOMEFIT_SOLVERS_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "homefit/matrix.hpp"

namespace homefit {

struct GeConfig {
    // pivots smaller in magnitude than this are nudged before elimination
    double reg_factor = 1e-10;
};

// fitted coefficients: values[0] pairs with layout[0] == "intercept",
// values[k] with the k-th feature column name
struct CoefficientVector {
    RealVector values;
    std::vector<std::string> layout;
};

struct LUFactors {
    DenseMatrix l;  // unit lower triangular
    DenseMatrix u;  // upper triangular (strictly-below-diagonal entries zero)
};

// layout {"intercept", "x0", "x1", ...} for n_features feature columns
std::vector<std::string> default_coef_layout(std::size_t n_features);

// Gaussian elimination with partial pivoting on the augmented system
// [1 | x_train | y_train]. Near-zero pivots (|p| < reg_factor) are offset by
// +-reg_factor in place; note the offset enters a second time in the
// elimination denominator (pivot + offset again) -- kept as-is deliberately.
// This solves the square subsystem selected by pivoting, not the
// least-squares problem, so on overdetermined noisy data it is expected to
// disagree with the other solvers. Throws SingularError (with the row index)
// when a back-substitution divisor stays below reg_factor; throws
// std::invalid_argument when rows < cols + 1 or reg_factor <= 0.
CoefficientVector ge_partial_pivot_fit(const DenseMatrix& x_train, const RealVector& y_train,
                                       const GeConfig& cfg = {});

// Doolittle LU without pivoting. Throws SingularError (with the column
// index) on an exactly zero or non-finite-producing pivot; throws
// std::invalid_argument for non-square input. No pivoting means exact zeros
// reachable by row arithmetic fail loudly, while near-singular input
// silently yields wildly inaccurate factors -- that behavior is the point.
LUFactors lu_decompose_no_pivot(const DenseMatrix& a);

// solve l y = b, unit or general lower triangular l (diagonal as stored)
RealVector forward_substitution(const DenseMatrix& l, const RealVector& b);

// solve u x = y; throws SingularError on an exactly zero diagonal entry
RealVector backward_substitution(const DenseMatrix& u, const RealVector& y);

// least squares via the normal equations: (A^T A) w = A^T y with
// A = augment_ones(x_train), solved by no-pivot LU. Inherits that
// factorization's failure modes: exact singularity raises SingularError,
// near-singularity returns garbage coefficients without complaint.
CoefficientVector lu_normal_fit(const DenseMatrix& x_train, const RealVector& y_train);

// least squares via Householder QR. Columns whose |R diagonal| falls below
// 1e-12 * max_j |R_jj| are treated as dead: their coefficients are forced to
// zero and their rows skipped in back-substitution, so rank-deficient input
// (duplicate or collinear columns) still yields a bounded solution.
CoefficientVector qr_least_squares_fit(const DenseMatrix& x_train, const RealVector& y_train);

// predictions augment_ones(x) . coef, accumulated per row in ascending
// column order (intercept term first)
RealVector predict(const CoefficientVector& coef, const DenseMatrix& x);

// spectral condition number sqrt(lambda_max / lambda_min) of a^T a,
// estimated by power iteration and inverse power iteration (relative
// eigenvalue change < 1e-10, at most 10000 iterations, fixed internal
// seed). Returns +infinity when a^T a is numerically singular.
double condition_number(const DenseMatrix& a);

}  // namespace homefit

#endif
