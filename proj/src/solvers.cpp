#include "homefit/solvers.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "homefit/errors.hpp"
#include "homefit/rng.hpp"

namespace homefit {

namespace {

constexpr double kQrRankTol = 1e-12;  // dead column: |R_ii| < tol * max_j |R_jj|

// Householder QR of an m x n matrix (m >= n). a holds R on and above the
// diagonal and the reflector tails below it; v0/beta complete each
// reflector (v = [v0, tail], H = I - beta v v^T).
struct HouseholderQr {
    DenseMatrix a;
    std::vector<double> v0;
    std::vector<double> beta;

    std::size_t rows() const { return a.rows(); }
    std::size_t cols() const { return a.cols(); }
    double rdiag(std::size_t k) const { return a(k, k); }

    double max_abs_rdiag() const {
        double best = 0.0;
        for (std::size_t k = 0; k < cols(); ++k) best = std::max(best, std::fabs(rdiag(k)));
        return best;
    }
};

HouseholderQr householder_factor(const DenseMatrix& input) {
    if (input.rows() < input.cols()) {
        throw std::invalid_argument("householder_factor: need rows >= cols, got " +
                                    std::to_string(input.rows()) + " x " +
                                    std::to_string(input.cols()));
    }
    HouseholderQr f{input, std::vector<double>(input.cols(), 0.0),
                    std::vector<double>(input.cols(), 0.0)};
    DenseMatrix& a = f.a;
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    for (std::size_t k = 0; k < n; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k; i < m; ++i) norm2 += a(i, k) * a(i, k);
        double norm = std::sqrt(norm2);
        if (norm == 0.0) continue;  // column already zero below (and at) the diagonal
        double alpha = a(k, k) >= 0.0 ? -norm : norm;
        double v0 = a(k, k) - alpha;
        double vnorm2 = v0 * v0;
        for (std::size_t i = k + 1; i < m; ++i) vnorm2 += a(i, k) * a(i, k);
        double beta = 2.0 / vnorm2;
        for (std::size_t j = k + 1; j < n; ++j) {
            double s = v0 * a(k, j);
            for (std::size_t i = k + 1; i < m; ++i) s += a(i, k) * a(i, j);
            s *= beta;
            a(k, j) -= s * v0;
            for (std::size_t i = k + 1; i < m; ++i) a(i, j) -= s * a(i, k);
        }
        a(k, k) = alpha;
        f.v0[k] = v0;
        f.beta[k] = beta;
    }
    return f;
}

// y <- Q^T y, applying the stored reflectors in order
void apply_q_transpose(const HouseholderQr& f, std::vector<double>& y) {
    const std::size_t m = f.rows();
    const std::size_t n = f.cols();
    for (std::size_t k = 0; k < n; ++k) {
        if (f.beta[k] == 0.0) continue;
        double s = f.v0[k] * y[k];
        for (std::size_t i = k + 1; i < m; ++i) s += f.a(i, k) * y[i];
        s *= f.beta[k];
        y[k] -= s * f.v0[k];
        for (std::size_t i = k + 1; i < m; ++i) y[i] -= s * f.a(i, k);
    }
}

// Solve R x = c. With tolerate_deficiency, diagonal entries below the rank
// threshold force their coefficient to zero and the row is skipped; without
// it the same condition throws SingularError.
std::vector<double> solve_r(const HouseholderQr& f, const std::vector<double>& c,
                            bool tolerate_deficiency) {
    const std::size_t n = f.cols();
    const double threshold = kQrRankTol * f.max_abs_rdiag();
    std::vector<double> x(n, 0.0);
    for (std::size_t ip1 = n; ip1 > 0; --ip1) {
        const std::size_t i = ip1 - 1;
        if (std::fabs(f.rdiag(i)) <= threshold) {
            if (!tolerate_deficiency) {
                throw SingularError("qr solve: rank-deficient triangular factor at column " +
                                        std::to_string(i),
                                    i);
            }
            x[i] = 0.0;
            continue;
        }
        double acc = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) acc += f.a(i, j) * x[j];
        x[i] = (c[i] - acc) / f.rdiag(i);
    }
    return x;
}

void check_fit_shapes(const char* who, const DenseMatrix& x, const RealVector& y) {
    if (x.rows() == 0 || x.cols() == 0) {
        throw std::invalid_argument(std::string(who) + ": empty design matrix");
    }
    if (x.rows() != y.size()) {
        throw std::invalid_argument(std::string(who) + ": " + std::to_string(x.rows()) +
                                    " rows but " + std::to_string(y.size()) + " targets");
    }
    if (x.rows() < x.cols() + 1) {
        throw std::invalid_argument(std::string(who) + ": need at least cols+1 = " +
                                    std::to_string(x.cols() + 1) + " rows, got " +
                                    std::to_string(x.rows()));
    }
}

}  // namespace

std::vector<std::string> default_coef_layout(std::size_t n_features) {
    std::vector<std::string> layout;
    layout.reserve(n_features + 1);
    layout.push_back("intercept");
    for (std::size_t i = 0; i < n_features; ++i) layout.push_back("x" + std::to_string(i));
    return layout;
}

CoefficientVector ge_partial_pivot_fit(const DenseMatrix& x_train, const RealVector& y_train,
                                       const GeConfig& cfg) {
    check_fit_shapes("ge_partial_pivot_fit", x_train, y_train);
    if (!(cfg.reg_factor > 0.0)) {
        throw std::invalid_argument("ge_partial_pivot_fit: reg_factor must be positive");
    }
    const double reg = cfg.reg_factor;
    const std::size_t m = x_train.rows();
    const std::size_t n = x_train.cols() + 1;  // intercept + features

    // working tableau [1 | x | y], m rows by n+1 columns
    DenseMatrix a(m, n + 1);
    for (std::size_t i = 0; i < m; ++i) {
        a(i, 0) = 1.0;
        for (std::size_t j = 0; j < x_train.cols(); ++j) a(i, j + 1) = x_train(i, j);
        a(i, n) = y_train[i];
    }

    for (std::size_t i = 0; i < n; ++i) {
        // pivot row: first row of maximal |entry| among rows i..m-1
        std::size_t max_row = i;
        double best = std::fabs(a(i, i));
        for (std::size_t k = i + 1; k < m; ++k) {
            if (std::fabs(a(k, i)) > best) {
                best = std::fabs(a(k, i));
                max_row = k;
            }
        }
        double regularization = 0.0;
        if (std::fabs(a(max_row, i)) < reg) {
            regularization = a(max_row, i) >= 0.0 ? reg : -reg;
            a(max_row, i) += regularization;
        }
        if (max_row != i) {
            for (std::size_t j = 0; j <= n; ++j) std::swap(a(i, j), a(max_row, j));
        }
        // the offset is added to the stored pivot above AND again in the
        // divisor below; the doubled nudge is intentional
        for (std::size_t k = i + 1; k < m; ++k) {
            double factor = a(k, i) / (a(i, i) + regularization);
            for (std::size_t j = i; j <= n; ++j) a(k, j) -= factor * a(i, j);
        }
    }

    std::vector<double> x(n, 0.0);
    for (std::size_t ip1 = n; ip1 > 0; --ip1) {
        const std::size_t i = ip1 - 1;
        if (std::fabs(a(i, i)) < reg) {
            throw SingularError("ge_partial_pivot_fit: pivot too small for stable solution at row " +
                                    std::to_string(i),
                                i);
        }
        double acc = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) acc += a(i, j) * x[j];
        x[i] = (a(i, n) - acc) / a(i, i);
    }
    return CoefficientVector{RealVector(std::move(x)), default_coef_layout(x_train.cols())};
}

LUFactors lu_decompose_no_pivot(const DenseMatrix& a) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw std::invalid_argument("lu_decompose_no_pivot: need a non-empty square matrix, got " +
                                    std::to_string(a.rows()) + " x " + std::to_string(a.cols()));
    }
    const std::size_t n = a.rows();
    DenseMatrix l = DenseMatrix::identity(n);
    DenseMatrix u = a;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (u(k, k) == 0.0) {
            throw SingularError("lu_decompose_no_pivot: zero pivot at column " + std::to_string(k),
                                k);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            double factor = u(i, k) / u(k, k);
            if (!std::isfinite(factor)) {
                throw SingularError("lu_decompose_no_pivot: pivot at column " + std::to_string(k) +
                                        " produced a non-finite multiplier",
                                    k);
            }
            l(i, k) = factor;
            for (std::size_t j = k + 1; j < n; ++j) u(i, j) -= factor * u(k, j);
        }
    }
    // the eliminated entries are conceptually zero; store them as exact zeros
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) u(i, j) = 0.0;
    return LUFactors{std::move(l), std::move(u)};
}

RealVector forward_substitution(const DenseMatrix& l, const RealVector& b) {
    if (l.rows() != l.cols()) {
        throw std::invalid_argument("forward_substitution: matrix must be square");
    }
    if (l.rows() != b.size()) {
        throw std::invalid_argument("forward_substitution: matrix is " + std::to_string(l.rows()) +
                                    "x" + std::to_string(l.cols()) + " but vector has " +
                                    std::to_string(b.size()) + " entries");
    }
    const std::size_t n = l.rows();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < i; ++j) acc += l(i, j) * y[j];
        y[i] = (b[i] - acc) / l(i, i);
    }
    return RealVector(std::move(y));
}

RealVector backward_substitution(const DenseMatrix& u, const RealVector& y) {
    if (u.rows() != u.cols()) {
        throw std::invalid_argument("backward_substitution: matrix must be square");
    }
    if (u.rows() != y.size()) {
        throw std::invalid_argument("backward_substitution: matrix is " + std::to_string(u.rows()) +
                                    "x" + std::to_string(u.cols()) + " but vector has " +
                                    std::to_string(y.size()) + " entries");
    }
    const std::size_t n = u.rows();
    std::vector<double> x(n, 0.0);
    for (std::size_t ip1 = n; ip1 > 0; --ip1) {
        const std::size_t i = ip1 - 1;
        if (u(i, i) == 0.0) {
            throw SingularError("backward_substitution: zero diagonal entry at row " +
                                    std::to_string(i),
                                i);
        }
        double acc = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) acc += u(i, j) * x[j];
        x[i] = (y[i] - acc) / u(i, i);
    }
    return RealVector(std::move(x));
}

CoefficientVector lu_normal_fit(const DenseMatrix& x_train, const RealVector& y_train) {
    check_fit_shapes("lu_normal_fit", x_train, y_train);
    DenseMatrix a = augment_ones(x_train);
    DenseMatrix g = gram(a);
    RealVector rhs = transpose_matvec(a, y_train);
    LUFactors f = lu_decompose_no_pivot(g);
    RealVector w = forward_substitution(f.l, rhs);
    RealVector x = backward_substitution(f.u, w);
    return CoefficientVector{std::move(x), default_coef_layout(x_train.cols())};
}

CoefficientVector qr_least_squares_fit(const DenseMatrix& x_train, const RealVector& y_train) {
    check_fit_shapes("qr_least_squares_fit", x_train, y_train);
    HouseholderQr f = householder_factor(augment_ones(x_train));
    std::vector<double> c = y_train.data();
    apply_q_transpose(f, c);
    std::vector<double> x = solve_r(f, c, /*tolerate_deficiency=*/true);
    return CoefficientVector{RealVector(std::move(x)), default_coef_layout(x_train.cols())};
}

RealVector predict(const CoefficientVector& coef, const DenseMatrix& x) {
    if (coef.values.size() != coef.layout.size()) {
        throw std::invalid_argument("predict: coefficient values and layout lengths differ");
    }
    if (x.cols() + 1 != coef.values.size()) {
        throw std::invalid_argument("predict: " + std::to_string(x.cols()) +
                                    " feature columns need " + std::to_string(x.cols() + 1) +
                                    " coefficients, got " + std::to_string(coef.values.size()));
    }
    std::vector<double> out(x.rows(), 0.0);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double acc = coef.values[0];  // intercept times the implicit ones column
        for (std::size_t j = 0; j < x.cols(); ++j) acc += x(i, j) * coef.values[j + 1];
        out[i] = acc;
    }
    return RealVector(std::move(out));
}

namespace {

constexpr double kEigTol = 1e-10;
constexpr int kEigMaxIter = 10000;
constexpr std::uint64_t kEigSeed = 0x9e3779b97f4a7c15ULL;

std::vector<double> random_unit_vector(std::size_t n, Rng& rng) {
    std::vector<double> v(n, 0.0);
    double norm2 = 0.0;
    while (norm2 == 0.0) {
        for (std::size_t i = 0; i < n; ++i) v[i] = rng.next_in(-1.0, 1.0);
        norm2 = 0.0;
        for (double e : v) norm2 += e * e;
    }
    double inv = 1.0 / std::sqrt(norm2);
    for (double& e : v) e *= inv;
    return v;
}

// largest-magnitude eigenvalue of the map `mul` (assumed symmetric
// positive semi-definite); returns NaN if the iteration breaks down
template <typename Mul>
double dominant_eigenvalue(std::size_t n, Rng& rng, Mul&& mul) {
    std::vector<double> v = random_unit_vector(n, rng);
    std::vector<double> w(n, 0.0);
    double lam_prev = 0.0;
    for (int it = 0; it < kEigMaxIter; ++it) {
        if (!mul(v, w)) return std::numeric_limits<double>::quiet_NaN();
        double lam = 0.0;
        for (std::size_t i = 0; i < n; ++i) lam += v[i] * w[i];  // Rayleigh quotient, |v| = 1
        double norm2 = 0.0;
        for (double e : w) norm2 += e * e;
        if (!std::isfinite(norm2)) return std::numeric_limits<double>::quiet_NaN();
        if (norm2 == 0.0) return 0.0;
        double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] * inv;
        if (it > 0 && std::fabs(lam - lam_prev) < kEigTol * std::fabs(lam)) return lam;
        lam_prev = lam;
    }
    return lam_prev;
}

}  // namespace

double condition_number(const DenseMatrix& a) {
    if (a.rows() == 0 || a.cols() == 0) {
        throw std::invalid_argument("condition_number: empty matrix");
    }
    if (a.rows() < a.cols()) {
        throw std::invalid_argument("condition_number: need rows >= cols, got " +
                                    std::to_string(a.rows()) + " x " + std::to_string(a.cols()));
    }
    const double inf = std::numeric_limits<double>::infinity();
    const DenseMatrix g = gram(a);
    const std::size_t n = g.rows();
    Rng rng(kEigSeed);

    double lam_max = dominant_eigenvalue(n, rng, [&](const std::vector<double>& v,
                                                     std::vector<double>& w) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < n; ++j) acc += g(i, j) * v[j];
            w[i] = acc;
        }
        return true;
    });
    if (!std::isfinite(lam_max) || lam_max <= 0.0) return inf;

    // smallest eigenvalue via inverse iteration; each step solves g w = v
    // through a strict QR solve, so a rank-deficient gram matrix is
    // reported as +infinity rather than a finite estimate
    HouseholderQr f = householder_factor(g);
    if (f.max_abs_rdiag() == 0.0) return inf;
    const double threshold = kQrRankTol * f.max_abs_rdiag();
    for (std::size_t k = 0; k < n; ++k) {
        if (std::fabs(f.rdiag(k)) <= threshold) return inf;
    }

    double mu = dominant_eigenvalue(n, rng, [&](const std::vector<double>& v,
                                                std::vector<double>& w) {
        std::vector<double> c = v;
        apply_q_transpose(f, c);
        std::vector<double> x;
        try {
            x = solve_r(f, c, /*tolerate_deficiency=*/false);
        } catch (const SingularError&) {
            return false;
        }
        for (double e : x) {
            if (!std::isfinite(e)) return false;
        }
        w = std::move(x);
        return true;
    });
    if (!std::isfinite(mu) || mu <= 0.0) return inf;

    double lam_min = 1.0 / mu;
    return std::sqrt(lam_max / lam_min);
}

}  // namespace homefit
