#ifndef HOMEFIT_METRICS_HPP
#define HOMEFIT_METRICS_HPP

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "homefit/matrix.hpp"
#include "homefit/solvers.hpp"

namespace homefit {

// coefficient of determination 1 - SS_res / SS_tot. Throws
// std::invalid_argument on length mismatch, empty input, or a constant
// y_true (zero variance leaves the score undefined).
double r2_score(const RealVector& y_true, const RealVector& y_pred);

// mean squared error; throws on length mismatch or empty input
double mse(const RealVector& y_true, const RealVector& y_pred);

// y_true - y_pred, elementwise
RealVector residuals(const RealVector& y_true, const RealVector& y_pred);

// uniform bins over [min, max]; the top edge closes the last bin, and a
// single-valued input widens to [v - 0.5, v + 0.5]
struct Histogram {
    std::vector<double> bin_edges;      // bins + 1 ascending edges
    std::vector<std::size_t> counts;    // bins entries, summing to the input size
};

Histogram histogram(const RealVector& values, std::size_t bins = 30);

// per-solver evaluation of one fitted model
struct EvalReport {
    std::string solver;
    double train_r2 = 0.0;
    double test_r2 = 0.0;
    double mse = 0.0;        // on the test split
    double runtime_ms = 0.0;
    CoefficientVector coefficients;
    RealVector residuals_test;
};

// rows: the k coefficients largest in |value| under the first report
// (ties broken toward the lower index), one column per report. All reports
// must share a coefficient layout; k is clamped to the layout size.
struct TopKTable {
    std::vector<std::string> solvers;
    std::vector<std::string> names;
    std::vector<std::vector<double>> values;  // values[row][solver]
};

TopKTable top_k_coefficients(const std::vector<EvalReport>& reports, std::size_t k);

// wall-clock milliseconds of one call (steady clock)
double time_solver(const std::function<void()>& work);

using FitFunction =
    std::function<CoefficientVector(const DenseMatrix&, const RealVector&)>;

// fit + predict on the test split, timed; repeat > 1 reruns the cycle and
// reports the median time. Fills every EvalReport field.
EvalReport evaluate_solver(const std::string& name, const FitFunction& fit,
                           const DenseMatrix& x_train, const RealVector& y_train,
                           const DenseMatrix& x_test, const RealVector& y_test,
                           std::size_t repeat = 1);

}  // namespace homefit

#endif
