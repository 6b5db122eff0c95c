#include "homefit/metrics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "homefit/pipeline.hpp"  // median()

namespace homefit {

namespace {

void check_pair(const char* who, const RealVector& y_true, const RealVector& y_pred) {
    if (y_true.size() == 0) {
        throw std::invalid_argument(std::string(who) + ": empty input");
    }
    if (y_true.size() != y_pred.size()) {
        throw std::invalid_argument(std::string(who) + ": lengths " +
              std::to_string(y_true.size()) + " and " + std::to_string(y_pred.size()) +
              " differ");
    }
}

}  // namespace

double r2_score(const RealVector& y_true, const RealVector& y_pred) {
    check_pair("r2_score", y_true, y_pred);
    const std::size_t n = y_true.size();
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += y_true[i];
    mean /= static_cast<double>(n);
    double ss_res = 0.0;
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y_true[i] - y_pred[i];
        const double d = y_true[i] - mean;
        ss_res += r * r;
        ss_tot += d * d;
    }
    if (ss_tot == 0.0) {
        throw std::invalid_argument("r2_score: y_true is constant, score undefined");
    }
    return 1.0 - ss_res / ss_tot;
}

double mse(const RealVector& y_true, const RealVector& y_pred) {
    check_pair("mse", y_true, y_pred);
    double acc = 0.0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const double r = y_true[i] - y_pred[i];
        acc += r * r;
    }
    return acc / static_cast<double>(y_true.size());
}

RealVector residuals(const RealVector& y_true, const RealVector& y_pred) {
    check_pair("residuals", y_true, y_pred);
    std::vector<double> out(y_true.size(), 0.0);
    for (std::size_t i = 0; i < y_true.size(); ++i) out[i] = y_true[i] - y_pred[i];
    return RealVector(std::move(out));
}

Histogram histogram(const RealVector& values, std::size_t bins) {
    if (values.size() == 0) {
        throw std::invalid_argument("histogram: empty input");
    }
    if (bins == 0) {
        throw std::invalid_argument("histogram: need at least one bin");
    }
    double lo = values[0];
    double hi = values[0];
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (lo == hi) {  // all entries identical: widen so every bin is non-degenerate
        lo -= 0.5;
        hi += 0.5;
    }
    Histogram h;
    h.bin_edges.resize(bins + 1);
    const double width = (hi - lo) / static_cast<double>(bins);
    for (std::size_t i = 0; i <= bins; ++i) {
        h.bin_edges[i] = lo + width * static_cast<double>(i);
    }
    h.bin_edges[bins] = hi;  // exact top edge regardless of rounding
    h.counts.assign(bins, 0);
    const double span = hi - lo;
    for (double v : values) {
        auto idx = static_cast<std::size_t>((v - lo) / span * static_cast<double>(bins));
        if (idx >= bins) idx = bins - 1;  // the max lands in the last bin
        ++h.counts[idx];
    }
    return h;
}

TopKTable top_k_coefficients(const std::vector<EvalReport>& reports, std::size_t k) {
    if (reports.empty()) {
        throw std::invalid_argument("top_k_coefficients: no reports");
    }
    if (k == 0) {
        throw std::invalid_argument("top_k_coefficients: k must be at least 1");
    }
    const auto& layout = reports.front().coefficients.layout;
    for (const EvalReport& r : reports) {
        if (r.coefficients.layout != layout) {
            throw std::invalid_argument("top_k_coefficients: coefficient layouts differ between '" +
                                        reports.front().solver + "' and '" + r.solver + "'");
        }
    }
    k = std::min(k, layout.size());
    const RealVector& ref = reports.front().coefficients.values;
    std::vector<std::size_t> order(layout.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double fa = std::fabs(ref[a]);
        const double fb = std::fabs(ref[b]);
        if (fa != fb) return fa > fb;
        return a < b;  // equal magnitudes keep the lower index first
    });

    TopKTable table;
    for (const EvalReport& r : reports) table.solvers.push_back(r.solver);
    for (std::size_t row = 0; row < k; ++row) {
        const std::size_t idx = order[row];
        table.names.push_back(layout[idx]);
        std::vector<double> vals;
        vals.reserve(reports.size());
        for (const EvalReport& r : reports) vals.push_back(r.coefficients.values[idx]);
        table.values.push_back(std::move(vals));
    }
    return table;
}

double time_solver(const std::function<void()>& work) {
    const auto start = std::chrono::steady_clock::now();
    work();
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count();
}

EvalReport evaluate_solver(const std::string& name, const FitFunction& fit,
                           const DenseMatrix& x_train, const RealVector& y_train,
                           const DenseMatrix& x_test, const RealVector& y_test,
                           std::size_t repeat) {
    if (repeat == 0) {
        throw std::invalid_argument("evaluate_solver: repeat must be at least 1");
    }
    EvalReport report;
    report.solver = name;
    CoefficientVector coef;
    RealVector pred_test;
    std::vector<double> times;
    times.reserve(repeat);
    for (std::size_t i = 0; i < repeat; ++i) {
        times.push_back(time_solver([&] {
            coef = fit(x_train, y_train);
            pred_test = predict(coef, x_test);
        }));
    }
    report.runtime_ms = median(times);
    report.coefficients = std::move(coef);
    RealVector pred_train = predict(report.coefficients, x_train);
    report.train_r2 = r2_score(y_train, pred_train);
    report.test_r2 = r2_score(y_test, pred_test);
    report.mse = mse(y_test, pred_test);
    report.residuals_test = residuals(y_test, pred_test);
    return report;
}

}  // namespace homefit
