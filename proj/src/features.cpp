#include "homefit/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "homefit/rng.hpp"

namespace homefit {

CategoryEncoder fit_one_hot(const std::vector<std::string>& towns) {
    if (towns.empty()) {
        throw std::invalid_argument("fit_one_hot: empty category list");
    }
    std::vector<std::string> cats = towns;
    std::sort(cats.begin(), cats.end());
    cats.erase(std::unique(cats.begin(), cats.end()), cats.end());
    return CategoryEncoder{std::move(cats)};
}

DenseMatrix encode(const CategoryEncoder& encoder, const std::vector<std::string>& towns) {
    if (encoder.categories.empty()) {
        throw std::invalid_argument("encode: encoder has no categories");
    }
    DenseMatrix out(towns.size(), encoder.categories.size());
    for (std::size_t i = 0; i < towns.size(); ++i) {
        auto it = std::lower_bound(encoder.categories.begin(), encoder.categories.end(), towns[i]);
        if (it == encoder.categories.end() || *it != towns[i]) {
            throw std::invalid_argument("encode: unknown category \"" + towns[i] + "\"");
        }
        out(i, static_cast<std::size_t>(it - encoder.categories.begin())) = 1.0;
    }
    return out;
}

DesignMatrix build_design_matrix(const std::vector<TownYearGroup>& groups) {
    if (groups.empty()) {
        throw std::invalid_argument("build_design_matrix: empty group list");
    }
    std::vector<std::string> towns;
    towns.reserve(groups.size());
    for (const TownYearGroup& g : groups) {
        if (!g.buy) {
            throw std::invalid_argument("build_design_matrix: " + g.town + "/" +
                                        std::to_string(g.year) + " has no buy label");
        }
        towns.push_back(g.town);
    }
    CategoryEncoder encoder = fit_one_hot(towns);
    const std::size_t t = encoder.categories.size();
    DenseMatrix onehot = encode(encoder, towns);

    DesignMatrix design;
    design.x = DenseMatrix(groups.size(), t + 3);
    std::vector<double> y(groups.size(), 0.0);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        for (std::size_t j = 0; j < t; ++j) design.x(i, j) = onehot(i, j);
        design.x(i, t) = static_cast<double>(groups[i].year);
        design.x(i, t + 1) = groups[i].median_rate;
        design.x(i, t + 2) = groups[i].median_sale_ratio;
        y[i] = static_cast<double>(*groups[i].buy);
    }
    design.y = RealVector(std::move(y));
    design.column_names.reserve(t + 3);
    for (const std::string& cat : encoder.categories) design.column_names.push_back("town=" + cat);
    design.column_names.push_back("year");
    design.column_names.push_back("median_rate");
    design.column_names.push_back("median_sale_ratio");
    return design;
}

SplitIndices train_test_split(std::size_t m, double test_size, std::uint64_t seed) {
    if (m < 2) {
        throw std::invalid_argument("train_test_split: need at least 2 rows, got " +
                                    std::to_string(m));
    }
    if (!(test_size > 0.0) || !(test_size < 1.0)) {
        throw std::invalid_argument("train_test_split: test_size must be inside (0, 1)");
    }
    const auto n_test = static_cast<std::size_t>(
        std::llround(static_cast<double>(m) * test_size));
    if (n_test == 0 || n_test >= m) {
        throw std::invalid_argument("train_test_split: degenerate split (" +
                                    std::to_string(n_test) + " of " + std::to_string(m) +
                                    " rows in the test set)");
    }
    std::vector<std::size_t> indices(m);
    for (std::size_t i = 0; i < m; ++i) indices[i] = i;
    Rng rng(seed);
    rng.shuffle(indices);
    SplitIndices split;
    split.test.assign(indices.begin(), indices.begin() + static_cast<std::ptrdiff_t>(n_test));
    split.train.assign(indices.begin() + static_cast<std::ptrdiff_t>(n_test), indices.end());
    return split;
}

DenseMatrix select_rows(const DenseMatrix& a, const std::vector<std::size_t>& indices) {
    DenseMatrix out(indices.size(), a.cols());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= a.rows()) {
            throw std::invalid_argument("select_rows: index out of range");
        }
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(indices[i], j);
    }
    return out;
}

RealVector select_entries(const RealVector& v, const std::vector<std::size_t>& indices) {
    std::vector<double> out(indices.size(), 0.0);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (indices[i] >= v.size()) {
            throw std::invalid_argument("select_entries: index out of range");
        }
        out[i] = v[indices[i]];
    }
    return RealVector(std::move(out));
}

}  // namespace homefit
