#include "homefit/report.hpp"

#include <cmath>
#include <cstdio>

#include "homefit/csv.hpp"

namespace homefit {

void JsonWriter::comma_if_needed() {
    if (after_key_) {
        after_key_ = false;
        return;
    }
    if (!needs_comma_.empty()) {
        if (needs_comma_.back()) out_ << ",";
        needs_comma_.back() = true;
        out_ << "\n";
        indent();
    }
}

void JsonWriter::indent() {
    for (std::size_t i = 0; i < needs_comma_.size(); ++i) out_ << "  ";
}

void JsonWriter::begin_object() {
    comma_if_needed();
    out_ << "{";
    needs_comma_.push_back(false);
}

void JsonWriter::end_object() {
    bool had_entries = needs_comma_.back();
    needs_comma_.pop_back();
    if (had_entries) {
        out_ << "\n";
        indent();
    }
    out_ << "}";
    if (needs_comma_.empty()) out_ << "\n";
}

void JsonWriter::begin_array() {
    comma_if_needed();
    out_ << "[";
    needs_comma_.push_back(false);
}

void JsonWriter::end_array() {
    bool had_entries = needs_comma_.back();
    needs_comma_.pop_back();
    if (had_entries) {
        out_ << "\n";
        indent();
    }
    out_ << "]";
}

void JsonWriter::key(const std::string& name) {
    comma_if_needed();
    out_ << '"' << json_escape(name) << "\": ";
    after_key_ = true;
}

void JsonWriter::value(const std::string& text) {
    comma_if_needed();
    out_ << '"' << json_escape(text) << '"';
}

void JsonWriter::value(double number) {
    if (!std::isfinite(number)) {
        // JSON has no infinity literal; a fixed string keeps the file parseable
        if (std::isnan(number)) value("nan");
        else value(number > 0 ? "inf" : "-inf");
        return;
    }
    comma_if_needed();
    out_ << format_real(number);
}

void JsonWriter::value(long number) {
    comma_if_needed();
    out_ << number;
}

void JsonWriter::value(bool flag) {
    comma_if_needed();
    out_ << (flag ? "true" : "false");
}

std::string json_escape(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (unsigned char c : text) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (c < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out.push_back(static_cast<char>(c));
                }
        }
    }
    return out;
}

void write_report_json(std::ostream& out, const std::string& command,
                       const ComparisonReport& report) {
    JsonWriter w(out);
    w.begin_object();
    w.key("schema_version");
    w.value(1L);
    w.key("command");
    w.value(command);

    w.key("config");
    w.begin_object();
    w.key("data");
    w.value(report.settings.data_path);
    w.key("solver");
    w.value(report.settings.solver);
    w.key("test_size");
    w.value(report.settings.test_size);
    w.key("seed");
    w.value(static_cast<long>(report.settings.seed));
    w.key("reg_factor");
    w.value(report.settings.reg_factor);
    w.key("repeat");
    w.value(report.settings.repeat);
    if (command == "compare") {
        w.key("k_requested");
        w.value(report.k_requested);
        w.key("k_effective");
        w.value(report.k_effective);
        w.key("bins");
        w.value(report.bins);
    }
    w.end_object();

    w.key("dataset");
    w.begin_object();
    w.key("rows");
    w.value(report.dataset.rows);
    w.key("feature_columns");
    w.value(report.dataset.feature_columns);
    w.key("towns");
    w.value(report.dataset.towns);
    w.key("year_min");
    w.value(report.dataset.year_min);
    w.key("year_max");
    w.value(report.dataset.year_max);
    w.end_object();

    w.key("condition_number");
    w.value(report.condition_number);

    w.key("solvers");
    w.begin_array();
    for (const SolverOutcome& outcome : report.outcomes) {
        w.begin_object();
        w.key("solver");
        w.value(outcome.solver);
        w.key("ok");
        w.value(outcome.report.has_value());
        if (outcome.report) {
            const EvalReport& er = *outcome.report;
            w.key("train_r2");
            w.value(er.train_r2);
            w.key("test_r2");
            w.value(er.test_r2);
            w.key("mse");
            w.value(er.mse);
            w.key("runtime_ms");
            w.value(er.runtime_ms);
            w.key("coefficients");
            w.begin_array();
            for (std::size_t i = 0; i < er.coefficients.values.size(); ++i) {
                w.begin_object();
                w.key("name");
                w.value(er.coefficients.layout[i]);
                w.key("value");
                w.value(er.coefficients.values[i]);
                w.end_object();
            }
            w.end_array();
            w.key("residuals_test");
            w.begin_array();
            for (double r : er.residuals_test) w.value(r);
            w.end_array();
        } else {
            w.key("error");
            w.value(outcome.error);
        }
        w.end_object();
    }
    w.end_array();

    w.end_object();
}

}  // namespace homefit
