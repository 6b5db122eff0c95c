#ifndef HOMEFIT_PIPELINE_HPP
#define HOMEFIT_PIPELINE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace homefit {

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;
};

struct RateRecord {
    Date date;
    double rate = 0.0;  // annual percentage, e.g. 6.5 means 6.5%
};

struct SaleRecord {
    std::string town;
    int year = 0;
    double assessed_value = 0.0;
    double sale_amount = 0.0;
    double sale_ratio = 0.0;  // assessed value / sale amount as reported
};

// one (town, year) cell after aggregation; financial fields are filled by
// apply_investment_math, metric and buy by label_buy_recommendations
struct TownYearGroup {
    std::string town;
    int year = 0;
    double median_rate = 0.0;
    double median_sale_ratio = 0.0;
    std::size_t sale_count = 0;
    std::optional<double> assessed_value;
    std::optional<double> total_payment;
    std::optional<double> metric;
    std::optional<int> buy;
};

struct PreprocessConfig {
    double investment = 500000.0;
    int term_years = 30;
    int payments_per_year = 12;
};

// sorted-middle median; even length averages the two middle values.
// Throws std::invalid_argument on empty input.
double median(std::vector<double> values);

// median interest rate per calendar year, keyed ascending
std::map<int, double> median_rate_by_year(const std::vector<RateRecord>& rates);

struct JoinedSale {
    SaleRecord sale;
    double median_rate = 0.0;
};

struct MergeResult {
    std::vector<JoinedSale> rows;
    std::size_t dropped = 0;  // sales whose year had no rate observation
};

// inner join of sales with the per-year median rate
MergeResult merge_rates(const std::vector<SaleRecord>& sales,
                        const std::map<int, double>& rate_by_year);

// group by (town, year), median sale ratio per group, output sorted by
// town then year
std::vector<TownYearGroup> aggregate_town_year(const std::vector<JoinedSale>& rows);

// what a buyer paying cfg.investment would expect the assessment to be
double affordable_assessed_value(const PreprocessConfig& cfg, double median_sale_ratio);

// closed-form total of all mortgage payments for the given principal and
// annual rate (percent); a zero rate degenerates to the principal itself
double mortgage_total_payment(double principal, double annual_rate, const PreprocessConfig& cfg);

// fill assessed_value and total_payment on every group
std::vector<TownYearGroup> apply_investment_math(std::vector<TownYearGroup> groups,
                                                 const PreprocessConfig& cfg);

// metric = total_payment - assessed_value; buy = 1 iff metric is strictly
// below the town's mean metric (a town with one group gets buy = 0)
std::vector<TownYearGroup> label_buy_recommendations(std::vector<TownYearGroup> groups,
                                                     const PreprocessConfig& cfg);

// canonical column name -> header actually present in the file
using ColumnMap = std::map<std::string, std::string>;

std::vector<SaleRecord> read_sales_csv(const std::string& path, const ColumnMap& column_map = {});
std::vector<RateRecord> read_rates_csv(const std::string& path, const ColumnMap& column_map = {});

void write_preprocessed_csv(const std::string& path, const std::vector<TownYearGroup>& groups);
std::vector<TownYearGroup> read_preprocessed_csv(const std::string& path);

struct PreprocessResult {
    std::vector<TownYearGroup> groups;
    std::size_t sales_rows = 0;
    std::size_t dropped = 0;
    std::vector<std::string> warnings;
};

// the full pipeline: read both files, join, aggregate, price, label
PreprocessResult run_preprocess(const std::string& sales_path, const std::string& rates_path,
                                const PreprocessConfig& cfg, const ColumnMap& column_map = {});

}  // namespace homefit

#endif
