#include "homefit/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <utility>

#include "homefit/errors.hpp"

namespace homefit {

namespace {

// split one physical-or-logical CSV record; `line` may grow by pulling more
// physical lines when a quoted field spans newlines
std::vector<std::string> split_record(const std::string& record, const std::string& path,
                                      std::size_t line_no) {
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    for (std::size_t i = 0; i < record.size(); ++i) {
        char c = record[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < record.size() && record[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"') {
            in_quotes = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(c);
        }
    }
    if (in_quotes) {
        throw SchemaError(path + ":" + std::to_string(line_no) + ": unterminated quoted field");
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

}  // namespace

std::size_t CsvTable::find_column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return i;
    }
    return npos;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "' for reading");
    }
    CsvTable table;
    table.path = path;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (!have_header && line.empty()) continue;  // leading blank lines
        if (line.empty()) continue;                  // skip blank data lines
        std::vector<std::string> fields = split_record(line, path, line_no);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw SchemaError(path + ":" + std::to_string(line_no) + ": expected " +
                              std::to_string(table.header.size()) + " fields, got " +
                              std::to_string(fields.size()));
        }
        table.rows.push_back(std::move(fields));
        table.line_numbers.push_back(line_no);
    }
    if (in.bad()) {
        throw IoError("read error on '" + path + "'");
    }
    if (!have_header) {
        throw SchemaError(path + ": missing header row");
    }
    return table;
}

std::string csv_escape(const std::string& field) {
    bool needs_quotes = false;
    for (char c : field) {
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs_quotes = true;
            break;
        }
    }
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

double parse_real(const std::string& text, const std::string& context) {
    if (text.empty()) {
        throw SchemaError(context + ": empty numeric field");
    }
    errno = 0;
    char* end = nullptr;
    double value = std::strtod(text.c_str(), &end);
    while (end && (*end == ' ' || *end == '\t')) ++end;
    if (end == text.c_str() || (end && *end != '\0')) {
        throw SchemaError(context + ": cannot parse '" + text + "' as a number");
    }
    if (errno == ERANGE) {
        throw SchemaError(context + ": number '" + text + "' out of range");
    }
    return value;
}

long parse_integer(const std::string& text, const std::string& context) {
    if (text.empty()) {
        throw SchemaError(context + ": empty integer field");
    }
    errno = 0;
    char* end = nullptr;
    long value = std::strtol(text.c_str(), &end, 10);
    while (end && (*end == ' ' || *end == '\t')) ++end;
    if (end == text.c_str() || (end && *end != '\0')) {
        throw SchemaError(context + ": cannot parse '" + text + "' as an integer");
    }
    if (errno == ERANGE) {
        throw SchemaError(context + ": integer '" + text + "' out of range");
    }
    return value;
}

}  // namespace homefit
