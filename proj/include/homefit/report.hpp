#ifndef HOMEFIT_REPORT_HPP
#define HOMEFIT_REPORT_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "homefit/metrics.hpp"

namespace homefit {

// Hand-rolled JSON emitter: keys stay in insertion order and every double
// is rendered with %.17g, so identical inputs give byte-identical files.
// Non-finite doubles become the strings "inf", "-inf", "nan".
class JsonWriter {
public:
    explicit JsonWriter(std::ostream& out) : out_(out) {}

    void begin_object();
    void end_object();
    void begin_array();
    void end_array();
    void key(const std::string& name);

    void value(const std::string& text);
    void value(const char* text) { value(std::string(text)); }
    void value(double number);
    void value(long number);
    void value(std::size_t number) { value(static_cast<long>(number)); }
    void value(int number) { value(static_cast<long>(number)); }
    void value(bool flag);

private:
    void comma_if_needed();
    void indent();

    std::ostream& out_;
    std::vector<bool> needs_comma_;
    bool after_key_ = false;
};

std::string json_escape(const std::string& text);

// the outcome of one solver inside a run/compare invocation; exactly one of
// report / error is meaningful
struct SolverOutcome {
    std::string solver;
    std::optional<EvalReport> report;
    std::string error;
};

struct DatasetSummary {
    std::size_t rows = 0;
    std::size_t feature_columns = 0;
    std::size_t towns = 0;
    int year_min = 0;
    int year_max = 0;
};

struct RunSettings {
    std::string data_path;
    std::string solver = "all";  // qr | ge | lu | all
    double test_size = 0.25;
    std::uint64_t seed = 42;
    double reg_factor = 1e-10;
    std::size_t repeat = 1;
};

struct ComparisonReport {
    RunSettings settings;
    DatasetSummary dataset;
    double condition_number = 0.0;  // +inf encoded as the string "inf"
    std::vector<SolverOutcome> outcomes;
    std::size_t k_requested = 0;    // compare only
    std::size_t k_effective = 0;    // compare only
    std::size_t bins = 0;           // compare only
};

// write the JSON report; `command` is "run" or "compare"
void write_report_json(std::ostream& out, const std::string& command,
                       const ComparisonReport& report);

}  // namespace homefit

#endif
