#ifndef HOMEFIT_FEATURES_HPP
#define HOMEFIT_FEATURES_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "homefit/matrix.hpp"
#include "homefit/pipeline.hpp"

namespace homefit {

// category list is sorted and duplicate-free; row encoding is one-hot
struct CategoryEncoder {
    std::vector<std::string> categories;
};

// collect the distinct towns, sorted lexicographically; empty input throws
CategoryEncoder fit_one_hot(const std::vector<std::string>& towns);

// one row per input town, one column per category; an unknown town throws
// std::invalid_argument naming it
DenseMatrix encode(const CategoryEncoder& encoder, const std::vector<std::string>& towns);

// design matrix [one-hot town block | year | median rate | median sale
// ratio] with buy as the target. The full one-hot block plus the intercept
// the solvers add is deliberately collinear -- that redundancy is the
// dataset's defining numerical hazard and is preserved as-is.
struct DesignMatrix {
    DenseMatrix x;
    RealVector y;
    std::vector<std::string> column_names;  // "town=<name>"..., "year", "median_rate", "median_sale_ratio"
};

// groups must be non-empty and fully labeled
DesignMatrix build_design_matrix(const std::vector<TownYearGroup>& groups);

// deterministic shuffle of 0..m-1; the first round(m * test_size) indices
// are the test set. Throws std::invalid_argument when either side would be
// empty (degenerate split) or test_size is outside (0, 1).
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

SplitIndices train_test_split(std::size_t m, double test_size, std::uint64_t seed);

DenseMatrix select_rows(const DenseMatrix& a, const std::vector<std::size_t>& indices);
RealVector select_entries(const RealVector& v, const std::vector<std::size_t>& indices);

}  // namespace homefit

#endif
