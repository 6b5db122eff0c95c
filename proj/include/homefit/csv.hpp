#ifndef HOMEFIT_CSV_HPP
#define HOMEFIT_CSV_HPP

#include <cstddef>
#include <string>
#include <vector>

namespace homefit {

// minimal RFC-4180-ish table: quoted fields, doubled quotes, CRLF tolerated
struct CsvTable {
    std::string path;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;  // each padded/validated to header size
    std::vector<std::size_t> line_numbers;       // 1-based source line per row

    // index of a header, or npos
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t find_column(const std::string& name) const;
};

// throws IoError if unreadable, SchemaError on structural problems
CsvTable read_csv(const std::string& path);

// quote a field when it contains a comma, quote, or newline
std::string csv_escape(const std::string& field);

// shortest %.17g rendering; round-trips every finite double
std::string format_real(double value);

// parse helpers: throw SchemaError mentioning `context` on failure
double parse_real(const std::string& text, const std::string& context);
long parse_integer(const std::string& text, const std::string& context);

}  // namespace homefit

#endif
