#include "homefit/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "homefit/csv.hpp"
#include "homefit/errors.hpp"

namespace homefit {

namespace {

constexpr int kYearMin = 1900;
constexpr int kYearMax = 2100;

void check_config(const PreprocessConfig& cfg) {
    if (!(cfg.investment > 0.0) || !std::isfinite(cfg.investment)) {
        throw std::invalid_argument("preprocess config: investment must be a positive amount");
    }
    if (cfg.term_years <= 0) {
        throw std::invalid_argument("preprocess config: term_years must be positive");
    }
    if (cfg.payments_per_year <= 0) {
        throw std::invalid_argument("preprocess config: payments_per_year must be positive");
    }
}

std::string row_context(const CsvTable& table, std::size_t row) {
    return table.path + ":" + std::to_string(table.line_numbers[row]);
}

// resolve a canonical column through the rename map, then in the header
std::size_t resolve_column(const CsvTable& table, const ColumnMap& column_map,
                           const std::string& canonical, bool required) {
    std::string actual = canonical;
    auto it = column_map.find(canonical);
    if (it != column_map.end()) actual = it->second;
    std::size_t idx = table.find_column(actual);
    if (idx == CsvTable::npos && required) {
        throw SchemaError(table.path + ": missing required column \"" + actual + "\"");
    }
    return idx;
}

Date parse_iso_date(const std::string& text, const std::string& context) {
    // YYYY-MM-DD
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw SchemaError(context + ": cannot parse '" + text + "' as an ISO date");
    }
    Date d;
    d.year = static_cast<int>(parse_integer(text.substr(0, 4), context));
    d.month = static_cast<int>(parse_integer(text.substr(5, 2), context));
    d.day = static_cast<int>(parse_integer(text.substr(8, 2), context));
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) {
        throw SchemaError(context + ": date '" + text + "' out of range");
    }
    return d;
}

}  // namespace

double median(std::vector<double> values) {
    if (values.empty()) {
        throw std::invalid_argument("median: empty input");
    }
    std::sort(values.begin(), values.end());
    std::size_t m = values.size();
    if (m % 2 == 1) return values[m / 2];
    return (values[m / 2 - 1] + values[m / 2]) / 2.0;
}

std::map<int, double> median_rate_by_year(const std::vector<RateRecord>& rates) {
    if (rates.empty()) {
        throw std::invalid_argument("median_rate_by_year: empty input");
    }
    std::map<int, std::vector<double>> by_year;
    for (const RateRecord& r : rates) by_year[r.date.year].push_back(r.rate);
    std::map<int, double> out;
    for (auto& [year, values] : by_year) out[year] = median(std::move(values));
    return out;
}

MergeResult merge_rates(const std::vector<SaleRecord>& sales,
                        const std::map<int, double>& rate_by_year) {
    MergeResult result;
    for (const SaleRecord& sale : sales) {
        auto it = rate_by_year.find(sale.year);
        if (it == rate_by_year.end()) {
            ++result.dropped;
            continue;
        }
        result.rows.push_back(JoinedSale{sale, it->second});
    }
    return result;
}

std::vector<TownYearGroup> aggregate_town_year(const std::vector<JoinedSale>& rows) {
    if (rows.empty()) {
        throw std::invalid_argument("aggregate_town_year: empty input");
    }
    // key order (town, year) gives the output ordering directly
    std::map<std::pair<std::string, int>, std::vector<const JoinedSale*>> cells;
    for (const JoinedSale& row : rows) {
        cells[{row.sale.town, row.sale.year}].push_back(&row);
    }
    std::vector<TownYearGroup> out;
    out.reserve(cells.size());
    for (auto& [key, members] : cells) {
        TownYearGroup g;
        g.town = key.first;
        g.year = key.second;
        g.median_rate = members.front()->median_rate;
        std::vector<double> ratios;
        ratios.reserve(members.size());
        for (const JoinedSale* m : members) ratios.push_back(m->sale.sale_ratio);
        g.median_sale_ratio = median(std::move(ratios));
        g.sale_count = members.size();
        out.push_back(std::move(g));
    }
    return out;
}

double affordable_assessed_value(const PreprocessConfig& cfg, double median_sale_ratio) {
    check_config(cfg);
    if (!(median_sale_ratio > 0.0) || !std::isfinite(median_sale_ratio)) {
        throw std::invalid_argument("affordable_assessed_value: ratio must be positive");
    }
    return cfg.investment * median_sale_ratio;
}

double mortgage_total_payment(double principal, double annual_rate, const PreprocessConfig& cfg) {
    check_config(cfg);
    if (!(principal > 0.0) || !std::isfinite(principal)) {
        throw std::invalid_argument("mortgage_total_payment: principal must be positive");
    }
    if (annual_rate < 0.0 || !std::isfinite(annual_rate)) {
        throw std::invalid_argument("mortgage_total_payment: rate must be non-negative");
    }
    const int n = cfg.term_years * cfg.payments_per_year;
    const double r = annual_rate / 100.0 / cfg.payments_per_year;
    if (r == 0.0) return principal;  // interest-free: total equals principal
    const double q = std::pow(1.0 + r, static_cast<double>(n));
    const double payment = principal * r * q / (q - 1.0);
    return payment * n;
}

std::vector<TownYearGroup> apply_investment_math(std::vector<TownYearGroup> groups,
                                                 const PreprocessConfig& cfg) {
    check_config(cfg);
    for (TownYearGroup& g : groups) {
        g.assessed_value = affordable_assessed_value(cfg, g.median_sale_ratio);
        g.total_payment = mortgage_total_payment(cfg.investment, g.median_rate, cfg);
    }
    return groups;
}

std::vector<TownYearGroup> label_buy_recommendations(std::vector<TownYearGroup> groups,
                                                     const PreprocessConfig&) {
    for (TownYearGroup& g : groups) {
        if (!g.assessed_value || !g.total_payment) {
            throw std::invalid_argument("label_buy_recommendations: " + g.town + "/" +
                                        std::to_string(g.year) +
                                        " is missing its financial fields");
        }
        g.metric = *g.total_payment - *g.assessed_value;
    }
    // town means accumulate in (town, year) order
    std::sort(groups.begin(), groups.end(), [](const TownYearGroup& a, const TownYearGroup& b) {
        return std::tie(a.town, a.year) < std::tie(b.town, b.year);
    });
    std::map<std::string, std::pair<double, std::size_t>> sums;
    for (const TownYearGroup& g : groups) {
        auto& [sum, count] = sums[g.town];
        sum += *g.metric;
        ++count;
    }
    for (TownYearGroup& g : groups) {
        const auto& [sum, count] = sums[g.town];
        double mean = sum / static_cast<double>(count);
        g.buy = *g.metric < mean ? 1 : 0;
    }
    return groups;
}

std::vector<SaleRecord> read_sales_csv(const std::string& path, const ColumnMap& column_map) {
    CsvTable table = read_csv(path);
    std::size_t town_col = resolve_column(table, column_map, "Town", true);
    std::size_t year_col = resolve_column(table, column_map, "Year", false);
    if (year_col == CsvTable::npos && column_map.find("Year") == column_map.end()) {
        year_col = table.find_column("List Year");
    }
    if (year_col == CsvTable::npos) {
        throw SchemaError(path + ": missing required column \"Year\" (or \"List Year\")");
    }
    std::size_t assessed_col = resolve_column(table, column_map, "Assessed Value", true);
    std::size_t amount_col = resolve_column(table, column_map, "Sale Amount", true);
    std::size_t ratio_col = resolve_column(table, column_map, "Sales Ratio", true);

    std::vector<SaleRecord> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string ctx = row_context(table, r);
        SaleRecord rec;
        rec.town = row[town_col];
        if (rec.town.empty()) {
            throw SchemaError(ctx + ": empty town name");
        }
        rec.year = static_cast<int>(parse_integer(row[year_col], ctx));
        if (rec.year < kYearMin || rec.year > kYearMax) {
            throw SchemaError(ctx + ": year " + std::to_string(rec.year) + " outside " +
                              std::to_string(kYearMin) + ".." + std::to_string(kYearMax));
        }
        rec.assessed_value = parse_real(row[assessed_col], ctx);
        rec.sale_amount = parse_real(row[amount_col], ctx);
        rec.sale_ratio = parse_real(row[ratio_col], ctx);
        if (rec.assessed_value < 0.0 || rec.sale_amount < 0.0) {
            throw SchemaError(ctx + ": negative monetary amount");
        }
        if (!(rec.sale_ratio > 0.0)) {
            throw SchemaError(ctx + ": sales ratio must be positive");
        }
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<RateRecord> read_rates_csv(const std::string& path, const ColumnMap& column_map) {
    CsvTable table = read_csv(path);
    std::size_t date_col = resolve_column(table, column_map, "Date", false);
    std::size_t year_col = CsvTable::npos;
    if (date_col == CsvTable::npos) {
        year_col = resolve_column(table, column_map, "Year", false);
        if (year_col == CsvTable::npos) {
            throw SchemaError(path + ": missing required column \"Date\" (or \"Year\")");
        }
    }
    std::size_t rate_col = resolve_column(table, column_map, "Interest Rate", true);

    std::vector<RateRecord> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string ctx = row_context(table, r);
        RateRecord rec;
        if (date_col != CsvTable::npos) {
            rec.date = parse_iso_date(row[date_col], ctx);
        } else {
            rec.date.year = static_cast<int>(parse_integer(row[year_col], ctx));
            rec.date.month = 1;
            rec.date.day = 1;
        }
        if (rec.date.year < kYearMin || rec.date.year > kYearMax) {
            throw SchemaError(ctx + ": year " + std::to_string(rec.date.year) + " outside " +
                              std::to_string(kYearMin) + ".." + std::to_string(kYearMax));
        }
        rec.rate = parse_real(row[rate_col], ctx);
        if (rec.rate < 0.0) {
            throw SchemaError(ctx + ": negative interest rate");
        }
        out.push_back(rec);
    }
    return out;
}

namespace {

const char* const kPreprocessedHeader =
    "Town,Year,Median Rate,Median Sale Ratio,Sale Count,"
    "Assessed Value,Total Payment,Metric,Buy Recommendation";

}  // namespace

void write_preprocessed_csv(const std::string& path, const std::vector<TownYearGroup>& groups) {
    std::vector<TownYearGroup> sorted = groups;
    std::sort(sorted.begin(), sorted.end(), [](const TownYearGroup& a, const TownYearGroup& b) {
        return std::tie(a.town, a.year) < std::tie(b.town, b.year);
    });
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    out << kPreprocessedHeader << '\n';
    for (const TownYearGroup& g : sorted) {
        if (!g.assessed_value || !g.total_payment || !g.metric || !g.buy) {
            throw std::invalid_argument("write_preprocessed_csv: " + g.town + "/" +
                                        std::to_string(g.year) + " is not fully labeled");
        }
        out << csv_escape(g.town) << ',' << g.year << ',' << format_real(g.median_rate) << ','
            << format_real(g.median_sale_ratio) << ',' << g.sale_count << ','
            << format_real(*g.assessed_value) << ',' << format_real(*g.total_payment) << ','
            << format_real(*g.metric) << ',' << *g.buy << '\n';
    }
    if (!out.flush()) {
        throw IoError("write error on '" + path + "'");
    }
}

std::vector<TownYearGroup> read_preprocessed_csv(const std::string& path) {
    CsvTable table = read_csv(path);
    auto need = [&](const char* name) {
        std::size_t idx = table.find_column(name);
        if (idx == CsvTable::npos) {
            throw SchemaError(path + ": missing required column \"" + name + "\"");
        }
        return idx;
    };
    std::size_t town_col = need("Town");
    std::size_t year_col = need("Year");
    std::size_t rate_col = need("Median Rate");
    std::size_t ratio_col = need("Median Sale Ratio");
    std::size_t count_col = need("Sale Count");
    std::size_t assessed_col = need("Assessed Value");
    std::size_t total_col = need("Total Payment");
    std::size_t metric_col = need("Metric");
    std::size_t buy_col = need("Buy Recommendation");

    std::vector<TownYearGroup> out;
    out.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        const std::string ctx = row_context(table, r);
        TownYearGroup g;
        g.town = row[town_col];
        if (g.town.empty()) {
            throw SchemaError(ctx + ": empty town name");
        }
        g.year = static_cast<int>(parse_integer(row[year_col], ctx));
        if (g.year < kYearMin || g.year > kYearMax) {
            throw SchemaError(ctx + ": year " + std::to_string(g.year) + " outside " +
                              std::to_string(kYearMin) + ".." + std::to_string(kYearMax));
        }
        g.median_rate = parse_real(row[rate_col], ctx);
        g.median_sale_ratio = parse_real(row[ratio_col], ctx);
        if (!(g.median_sale_ratio > 0.0)) {
            throw SchemaError(ctx + ": median sale ratio must be positive");
        }
        long count = parse_integer(row[count_col], ctx);
        if (count < 1) {
            throw SchemaError(ctx + ": sale count must be at least 1");
        }
        g.sale_count = static_cast<std::size_t>(count);
        g.assessed_value = parse_real(row[assessed_col], ctx);
        g.total_payment = parse_real(row[total_col], ctx);
        g.metric = parse_real(row[metric_col], ctx);
        long buy = parse_integer(row[buy_col], ctx);
        if (buy != 0 && buy != 1) {
            throw SchemaError(ctx + ": buy recommendation must be 0 or 1");
        }
        g.buy = static_cast<int>(buy);
        out.push_back(std::move(g));
    }
    if (out.empty()) {
        throw SchemaError(path + ": no data rows");
    }
    return out;
}

PreprocessResult run_preprocess(const std::string& sales_path, const std::string& rates_path,
                                const PreprocessConfig& cfg, const ColumnMap& column_map) {
    check_config(cfg);
    PreprocessResult result;
    std::vector<SaleRecord> sales = read_sales_csv(sales_path, column_map);
    std::vector<RateRecord> rates = read_rates_csv(rates_path, column_map);
    if (sales.empty()) {
        throw SchemaError(sales_path + ": no data rows");
    }
    if (rates.empty()) {
        throw SchemaError(rates_path + ": no data rows");
    }
    for (const RateRecord& r : rates) {
        if (r.rate < 0.5) {
            result.warnings.push_back("rate " + format_real(r.rate) + " in year " +
                                      std::to_string(r.date.year) +
                                      " looks like a fraction, not a percentage");
            break;  // one warning is enough
        }
    }
    result.sales_rows = sales.size();
    std::map<int, double> rate_by_year = median_rate_by_year(rates);
    MergeResult merged = merge_rates(sales, rate_by_year);
    result.dropped = merged.dropped;
    if (merged.rows.empty()) {
        throw SchemaError("no usable data: no sales year matches a rate year (dropped " +
                          std::to_string(merged.dropped) + " rows)");
    }
    std::vector<TownYearGroup> groups = aggregate_town_year(merged.rows);
    groups = apply_investment_math(std::move(groups), cfg);
    groups = label_buy_recommendations(std::move(groups), cfg);
    result.groups = std::move(groups);
    return result;
}

}  // namespace homefit
