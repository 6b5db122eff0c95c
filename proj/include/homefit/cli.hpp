#ifndef HOMEFIT_CLI_HPP
#define HOMEFIT_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>

#include "homefit/pipeline.hpp"

namespace homefit {

// Exit codes shared by every subcommand:
//   0 success, 1 usage/validation error, 2 I/O error, 3 all solvers failed.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitAllSolversFailed = 3;

struct PreprocessArgs {
    std::string sales_path;
    std::string rates_path;
    std::string out_path;
    double investment = 500000.0;
    int term_years = 30;
    int payments_per_year = 12;
    std::string column_map_spec;  // "Canonical=Actual,..." renames
};

struct RunArgs {
    std::string data_path;
    std::string report_path;
    std::string solver = "all";  // qr | ge | lu | all
    double test_size = 0.25;
    std::uint64_t seed = 42;
    double reg_factor = 1e-10;
    std::size_t repeat = 1;
};

struct CompareArgs {
    std::string data_path;
    std::string out_dir;
    std::size_t k = 10;
    std::size_t bins = 30;
    double test_size = 0.25;
    std::uint64_t seed = 42;
    double reg_factor = 1e-10;
    std::size_t repeat = 1;
};

struct SynthArgs {
    std::size_t rows = 0;
    std::size_t towns = 0;
    std::string years_spec;  // "a..b" inclusive
    std::uint64_t seed = 0;
    std::string out_path;
    double noise = 0.1;
    std::string planted_path;        // empty: do not write planted coefficients
    bool regression_target = false;  // write the raw response instead of 0/1 labels
};

// "Canonical=Actual,..." -> map; throws std::invalid_argument on unknown
// canonical names or malformed pairs
ColumnMap parse_column_map(const std::string& spec);

int cmd_preprocess(const PreprocessArgs& args, std::ostream& out, std::ostream& err);
int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err);
int cmd_synth(const SynthArgs& args, std::ostream& out, std::ostream& err);

}  // namespace homefit

#endif
