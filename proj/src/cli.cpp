#include "homefit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <system_error>
#include <utility>
#include <vector>

#include "homefit/csv.hpp"
#include "homefit/errors.hpp"
#include "homefit/features.hpp"
#include "homefit/metrics.hpp"
#include "homefit/report.hpp"
#include "homefit/rng.hpp"
#include "homefit/solvers.hpp"

namespace homefit {

namespace {

namespace fs = std::filesystem;

// top-level exception -> exit code mapping shared by every subcommand
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

std::vector<std::string> requested_solvers(const std::string& selection) {
    if (selection == "all") return {"qr", "ge", "lu"};
    if (selection == "qr" || selection == "ge" || selection == "lu") return {selection};
    throw std::invalid_argument("unknown solver '" + selection +
                                "' (expected qr, ge, lu, or all)");
}

FitFunction make_fit(const std::string& name, double reg_factor) {
    if (name == "qr") {
        return [](const DenseMatrix& x, const RealVector& y) {
            return qr_least_squares_fit(x, y);
        };
    }
    if (name == "ge") {
        return [reg_factor](const DenseMatrix& x, const RealVector& y) {
            return ge_partial_pivot_fit(x, y, GeConfig{reg_factor});
        };
    }
    return [](const DenseMatrix& x, const RealVector& y) { return lu_normal_fit(x, y); };
}

DatasetSummary summarize(const std::vector<TownYearGroup>& groups, const DesignMatrix& design) {
    DatasetSummary s;
    s.rows = design.x.rows();
    s.feature_columns = design.x.cols();
    std::set<std::string> towns;
    int year_min = groups.front().year;
    int year_max = groups.front().year;
    for (const TownYearGroup& g : groups) {
        towns.insert(g.town);
        year_min = std::min(year_min, g.year);
        year_max = std::max(year_max, g.year);
    }
    s.towns = towns.size();
    s.year_min = year_min;
    s.year_max = year_max;
    return s;
}

// the fit/evaluate phase shared by run and compare
ComparisonReport fit_all(const std::string& data_path, const std::vector<std::string>& solvers,
                         double test_size, std::uint64_t seed, double reg_factor,
                         std::size_t repeat) {
    std::vector<TownYearGroup> groups = read_preprocessed_csv(data_path);
    DesignMatrix design = build_design_matrix(groups);
    SplitIndices split = train_test_split(design.x.rows(), test_size, seed);
    DenseMatrix x_train = select_rows(design.x, split.train);
    RealVector y_train = select_entries(design.y, split.train);
    DenseMatrix x_test = select_rows(design.x, split.test);
    RealVector y_test = select_entries(design.y, split.test);

    ComparisonReport report;
    report.dataset = summarize(groups, design);
    report.condition_number = condition_number(augment_ones(design.x));

    std::vector<std::string> layout;
    layout.reserve(design.column_names.size() + 1);
    layout.push_back("intercept");
    layout.insert(layout.end(), design.column_names.begin(), design.column_names.end());

    for (const std::string& name : solvers) {
        SolverOutcome outcome;
        outcome.solver = name;
        try {
            EvalReport er = evaluate_solver(name, make_fit(name, reg_factor), x_train, y_train,
                                            x_test, y_test, repeat);
            er.coefficients.layout = layout;  // feature names instead of x0..xN
            outcome.report = std::move(er);
        } catch (const std::exception& e) {
            outcome.error = e.what();
        }
        report.outcomes.push_back(std::move(outcome));
    }
    return report;
}

std::size_t count_ok(const ComparisonReport& report) {
    std::size_t n = 0;
    for (const SolverOutcome& o : report.outcomes) {
        if (o.report) ++n;
    }
    return n;
}

void print_solver_lines(std::ostream& out, const ComparisonReport& report) {
    for (const SolverOutcome& o : report.outcomes) {
        if (o.report) {
            char buf[160];
            std::snprintf(buf, sizeof buf,
                          "%s: train_r2=%.6g test_r2=%.6g mse=%.6g runtime_ms=%.3f",
                          o.solver.c_str(), o.report->train_r2, o.report->test_r2, o.report->mse,
                          o.report->runtime_ms);
            out << buf << "\n";
        } else {
            out << o.solver << ": FAILED: " << o.error << "\n";
        }
    }
}

std::string condition_text(double kappa) {
    return std::isfinite(kappa) ? format_real(kappa) : "inf";
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << content;
    if (!out.flush()) {
        throw IoError("write error on '" + path + "'");
    }
}

}  // namespace

ColumnMap parse_column_map(const std::string& spec) {
    static const std::set<std::string> canonical = {
        "Town", "Year", "Assessed Value", "Sale Amount", "Sales Ratio", "Date", "Interest Rate",
    };
    ColumnMap map;
    if (spec.empty()) return map;
    std::stringstream ss(spec);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
        auto eq = pair.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 >= pair.size()) {
            throw std::invalid_argument("column-map entry '" + pair +
                                        "' is not of the form Canonical=Actual");
        }
        std::string key = pair.substr(0, eq);
        std::string value = pair.substr(eq + 1);
        if (canonical.find(key) == canonical.end()) {
            throw std::invalid_argument("column-map names unknown column '" + key + "'");
        }
        map[key] = value;
    }
    return map;
}

int cmd_preprocess(const PreprocessArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        PreprocessConfig cfg;
        cfg.investment = args.investment;
        cfg.term_years = args.term_years;
        cfg.payments_per_year = args.payments_per_year;
        ColumnMap column_map = parse_column_map(args.column_map_spec);
        PreprocessResult result = run_preprocess(args.sales_path, args.rates_path, cfg, column_map);
        for (const std::string& w : result.warnings) err << "warning: " << w << "\n";
        write_preprocessed_csv(args.out_path, result.groups);
        out << "sales rows: " << result.sales_rows << "\n";
        out << "groups: " << result.groups.size() << "\n";
        out << "dropped (no rate year): " << result.dropped << "\n";
        out << "wrote " << args.out_path << "\n";
        return kExitOk;
    });
}

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::vector<std::string> solvers = requested_solvers(args.solver);
        if (args.repeat == 0) {
            throw std::invalid_argument("repeat must be at least 1");
        }
        ComparisonReport report = fit_all(args.data_path, solvers, args.test_size, args.seed,
                                          args.reg_factor, args.repeat);
        report.settings.data_path = args.data_path;
        report.settings.solver = args.solver;
        report.settings.test_size = args.test_size;
        report.settings.seed = args.seed;
        report.settings.reg_factor = args.reg_factor;
        report.settings.repeat = args.repeat;

        std::ostringstream json;
        write_report_json(json, "run", report);
        write_text_file(args.report_path, json.str());

        const DatasetSummary& d = report.dataset;
        out << "rows: " << d.rows << "  features: " << d.feature_columns << "  towns: " << d.towns
            << "  years: " << d.year_min << "-" << d.year_max << "\n";
        out << "condition number: " << condition_text(report.condition_number) << "\n";
        print_solver_lines(out, report);
        out << "report: " << args.report_path << "\n";
        return count_ok(report) > 0 ? kExitOk : kExitAllSolversFailed;
    });
}

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (args.k == 0) {
            throw std::invalid_argument("k must be at least 1");
        }
        if (args.bins == 0) {
            throw std::invalid_argument("bins must be at least 1");
        }
        if (args.repeat == 0) {
            throw std::invalid_argument("repeat must be at least 1");
        }
        ComparisonReport report = fit_all(args.data_path, {"qr", "ge", "lu"}, args.test_size,
                                          args.seed, args.reg_factor, args.repeat);
        report.settings.data_path = args.data_path;
        report.settings.solver = "all";
        report.settings.test_size = args.test_size;
        report.settings.seed = args.seed;
        report.settings.reg_factor = args.reg_factor;
        report.settings.repeat = args.repeat;
        report.k_requested = args.k;
        report.bins = args.bins;

        std::vector<EvalReport> successes;
        for (const SolverOutcome& o : report.outcomes) {
            if (o.report) successes.push_back(*o.report);
        }
        report.k_effective =
            successes.empty() ? 0
                              : std::min(args.k, successes.front().coefficients.layout.size());

        const bool dir_existed = fs::exists(args.out_dir);
        std::error_code ec;
        fs::create_directories(args.out_dir, ec);
        if (ec) {
            throw IoError("cannot create directory '" + args.out_dir + "': " + ec.message());
        }
        std::vector<std::string> written;
        auto emit = [&](const std::string& name, const std::string& content) {
            std::string path = (fs::path(args.out_dir) / name).string();
            write_text_file(path, content);
            written.push_back(path);
        };
        try {
            {
                std::ostringstream json;
                write_report_json(json, "compare", report);
                emit("report.json", json.str());
            }
            {
                std::ostringstream csv;
                csv << "solver,train_r2,test_r2,mse,runtime_ms\n";
                for (const SolverOutcome& o : report.outcomes) {
                    if (!o.report) continue;
                    csv << o.solver << ',' << format_real(o.report->train_r2) << ','
                        << format_real(o.report->test_r2) << ',' << format_real(o.report->mse)
                        << ',' << format_real(o.report->runtime_ms) << "\n";
                }
                emit("metrics.csv", csv.str());
            }
            {
                std::ostringstream csv;
                csv << "rank,name";
                for (const EvalReport& r : successes) csv << ',' << r.solver;
                csv << "\n";
                if (!successes.empty()) {
                    TopKTable table = top_k_coefficients(successes, report.k_effective);
                    for (std::size_t row = 0; row < table.names.size(); ++row) {
                        csv << (row + 1) << ',' << csv_escape(table.names[row]);
                        for (double v : table.values[row]) csv << ',' << format_real(v);
                        csv << "\n";
                    }
                }
                emit("coefficients_topk.csv", csv.str());
            }
            for (const SolverOutcome& o : report.outcomes) {
                if (!o.report) continue;
                Histogram h = histogram(o.report->residuals_test, args.bins);
                std::ostringstream csv;
                csv << "kind,index,value\n";
                for (std::size_t i = 0; i < h.bin_edges.size(); ++i) {
                    csv << "bin_edge," << i << ',' << format_real(h.bin_edges[i]) << "\n";
                }
                for (std::size_t i = 0; i < h.counts.size(); ++i) {
                    csv << "bin_count," << i << ',' << h.counts[i] << "\n";
                }
                const RealVector& res = o.report->residuals_test;
                for (std::size_t i = 0; i < res.size(); ++i) {
                    csv << "residual," << i << ',' << format_real(res[i]) << "\n";
                }
                emit("residuals_" + o.solver + ".csv", csv.str());
            }
        } catch (...) {
            // keep the output directory as it was before this invocation
            for (const std::string& path : written) fs::remove(path, ec);
            if (!dir_existed) fs::remove(args.out_dir, ec);  // only removes an empty dir
            throw;
        }

        const DatasetSummary& d = report.dataset;
        out << "rows: " << d.rows << "  features: " << d.feature_columns << "  towns: " << d.towns
            << "  years: " << d.year_min << "-" << d.year_max << "\n";
        out << "condition number: " << condition_text(report.condition_number) << "\n";
        print_solver_lines(out, report);
        out << "top-k: " << report.k_effective << " of " << report.k_requested << " requested\n";
        out << "wrote " << written.size() << " files to " << args.out_dir << "\n";
        return count_ok(report) > 0 ? kExitOk : kExitAllSolversFailed;
    });
}

namespace {

struct YearRange {
    int lo = 0;
    int hi = 0;
};

YearRange parse_years(const std::string& spec) {
    auto sep = spec.find("..");
    if (sep == std::string::npos) {
        throw std::invalid_argument("years must be given as a..b, got '" + spec + "'");
    }
    YearRange r;
    r.lo = static_cast<int>(parse_integer(spec.substr(0, sep), "years"));
    r.hi = static_cast<int>(parse_integer(spec.substr(sep + 2), "years"));
    if (r.lo < 1900 || r.hi > 2100 || r.lo > r.hi) {
        throw std::invalid_argument("years range " + spec + " is invalid (need 1900 <= a <= b <= 2100)");
    }
    return r;
}

std::string town_name(std::size_t index, std::size_t towns) {
    std::size_t width = 2;
    for (std::size_t v = towns > 0 ? towns - 1 : 0; v >= 100; v /= 10) ++width;
    std::string digits = std::to_string(index);
    std::string name = "T";
    name.append(width > digits.size() ? width - digits.size() : 0, '0');
    name += digits;
    return name;
}

}  // namespace

int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (args.rows == 0) {
            throw std::invalid_argument("rows must be at least 1");
        }
        if (args.towns == 0) {
            throw std::invalid_argument("towns must be at least 1");
        }
        if (!(args.noise >= 0.0) || !std::isfinite(args.noise)) {
            throw std::invalid_argument("noise must be a non-negative number");
        }
        YearRange years = parse_years(args.years_spec);
        const std::size_t n_years = static_cast<std::size_t>(years.hi - years.lo + 1);
        if (args.rows > args.towns * n_years) {
            throw std::invalid_argument(
                "rows=" + std::to_string(args.rows) + " exceeds towns*years=" +
                std::to_string(args.towns * n_years) + " distinct (town, year) cells");
        }

        Rng rng(args.seed);
        // draw order is part of the determinism contract: rates per year,
        // town effects, global effects, cell shuffle, then per-row draws
        std::vector<double> rate_by_year(n_years, 0.0);
        for (std::size_t i = 0; i < n_years; ++i) rate_by_year[i] = rng.next_in(2.5, 8.5);
        std::vector<double> town_effect(args.towns, 0.0);
        for (std::size_t t = 0; t < args.towns; ++t) town_effect[t] = rng.next_in(-0.2, 0.2);
        const double c_year = rng.next_in(-0.02, 0.02);
        const double c_rate = rng.next_in(-0.06, 0.06);
        const double c_ratio = rng.next_in(-0.5, 0.5);
        const double year_mid = (static_cast<double>(years.lo) + static_cast<double>(years.hi)) / 2.0;
        // center the response near the 0.5 threshold at the predictor means
        const double c0 = 0.5 - (c_year * year_mid + c_rate * 5.5 + c_ratio * 0.75);

        std::vector<std::size_t> cells(args.towns * n_years);
        for (std::size_t i = 0; i < cells.size(); ++i) cells[i] = i;
        rng.shuffle(cells);
        cells.resize(args.rows);
        std::sort(cells.begin(), cells.end());  // cell id = town * n_years + year offset

        const PreprocessConfig cfg;  // defaults price the synthetic columns
        std::ostringstream csv;
        csv << "Town,Year,Median Rate,Median Sale Ratio,Sale Count,"
               "Assessed Value,Total Payment,Metric,Buy Recommendation\n";
        for (std::size_t cell : cells) {
            const std::size_t t = cell / n_years;
            const std::size_t yi = cell % n_years;
            const int year = years.lo + static_cast<int>(yi);
            const double rate = rate_by_year[yi];
            const double ratio = rng.next_in(0.4, 1.1);
            const double eps = rng.next_normal();
            const std::size_t count = 1 + static_cast<std::size_t>(rng.next_below(40));
            const double response = c0 + town_effect[t] + c_year * static_cast<double>(year) +
                                    c_rate * rate + c_ratio * ratio + args.noise * eps;
            const double assessed = cfg.investment * ratio;
            const double total = mortgage_total_payment(cfg.investment, rate, cfg);
            const double metric = total - assessed;
            csv << town_name(t, args.towns) << ',' << year << ',' << format_real(rate) << ','
                << format_real(ratio) << ',' << count << ',' << format_real(assessed) << ','
                << format_real(total) << ',' << format_real(metric) << ',';
            if (args.regression_target) {
                csv << format_real(response) << "\n";
            } else {
                csv << (response > 0.5 ? 1 : 0) << "\n";
            }
        }
        write_text_file(args.out_path, csv.str());

        if (!args.planted_path.empty()) {
            std::ostringstream planted;
            planted << "name,value\n";
            planted << "intercept," << format_real(c0) << "\n";
            for (std::size_t t = 0; t < args.towns; ++t) {
                planted << "town=" << town_name(t, args.towns) << ','
                        << format_real(town_effect[t]) << "\n";
            }
            planted << "year," << format_real(c_year) << "\n";
            planted << "median_rate," << format_real(c_rate) << "\n";
            planted << "median_sale_ratio," << format_real(c_ratio) << "\n";
            write_text_file(args.planted_path, planted.str());
        }

        out << "rows: " << args.rows << "  towns: " << args.towns << "  years: " << years.lo
            << "-" << years.hi << "\n";
        out << "wrote " << args.out_path << "\n";
        if (!args.planted_path.empty()) out << "wrote " << args.planted_path << "\n";
        return kExitOk;
    });
}

}  // namespace homefit
