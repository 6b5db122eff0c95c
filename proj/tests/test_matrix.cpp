#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <limits>
#include <stdexcept>
#include <vector>

#include "homefit/matrix.hpp"
#include "homefit/rng.hpp"
#include "oracles.hpp"

using namespace homefit;

TEST_CASE("construction validates size and finiteness") {
    CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(DenseMatrix(1, 2, {1.0, inf}), std::invalid_argument);
    CHECK_THROWS_AS(DenseMatrix(1, 2, {nan, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(RealVector({1.0, -inf}), std::invalid_argument);
    CHECK_NOTHROW(DenseMatrix(2, 2, {1.0, 2.0, 3.0, 4.0}));
    CHECK(RealVector(3).size() == 3);
    CHECK(RealVector(3)[2] == 0.0);
}

TEST_CASE("matmul matches a hand-computed product") {
    auto a = DenseMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}, {5.0, 6.0}});
    auto b = DenseMatrix::from_rows({{7.0, 8.0, 9.0}, {10.0, 11.0, 12.0}});
    auto c = matmul(a, b);
    REQUIRE(c.rows() == 3);
    REQUIRE(c.cols() == 3);
    CHECK(c(0, 0) == 27.0);
    CHECK(c(0, 1) == 30.0);
    CHECK(c(0, 2) == 33.0);
    CHECK(c(1, 0) == 61.0);
    CHECK(c(2, 2) == 117.0);
    CHECK_THROWS_AS(matmul(a, a), std::invalid_argument);
}

TEST_CASE("matmul agrees with a different accumulation order") {
    Rng rng(101);
    for (int trial = 0; trial < 5; ++trial) {
        auto a = oracles::random_matrix(rng, 7, 5);
        auto b = oracles::random_matrix(rng, 5, 6);
        auto fast = matmul(a, b);
        auto slow = oracles::matmul_k_outer(a, b);
        CHECK(oracles::max_abs_diff(fast, slow) < 1e-14);
    }
}

TEST_CASE("matmul is associative within round-off") {
    Rng rng(202);
    for (int trial = 0; trial < 5; ++trial) {
        auto a = oracles::random_matrix(rng, 4, 6);
        auto b = oracles::random_matrix(rng, 6, 3);
        auto c = oracles::random_matrix(rng, 3, 5);
        auto left = matmul(matmul(a, b), c);
        auto right = matmul(a, matmul(b, c));
        double denom = frobenius_norm(left);
        REQUIRE(denom > 0.0);
        double num = 0.0;
        for (std::size_t i = 0; i < left.rows(); ++i)
            for (std::size_t j = 0; j < left.cols(); ++j) {
                double d = left(i, j) - right(i, j);
                num += d * d;
            }
        CHECK(std::sqrt(num) / denom < 1e-9);
    }
}

TEST_CASE("transpose is an involution and swaps indices") {
    Rng rng(303);
    auto a = oracles::random_matrix(rng, 4, 7);
    auto at = transpose(a);
    REQUIRE(at.rows() == 7);
    REQUIRE(at.cols() == 4);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) CHECK(at(j, i) == a(i, j));
    auto att = transpose(at);
    CHECK(oracles::max_abs_diff(a, att) == 0.0);
}

TEST_CASE("gram is exactly symmetric and matches column dot products") {
    Rng rng(404);
    auto a = oracles::random_matrix(rng, 9, 5);
    auto g = gram(a);
    REQUIRE(g.rows() == 5);
    REQUIRE(g.cols() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            CHECK(g(i, j) == g(j, i));  // same summation order both triangles: exact
            double acc = 0.0;
            for (std::size_t k = 0; k < a.rows(); ++k) acc += a(k, i) * a(k, j);
            CHECK(g(i, j) == acc);
        }
    }
    // definition check against the generic product
    auto via_matmul = matmul(transpose(a), a);
    CHECK(oracles::max_abs_diff(g, via_matmul) < 1e-14);
}

TEST_CASE("augment_ones prepends a ones column and shifts the rest") {
    auto x = DenseMatrix::from_rows({{2.0, 3.0}, {4.0, 5.0}});
    auto a = augment_ones(x);
    REQUIRE(a.rows() == 2);
    REQUIRE(a.cols() == 3);
    CHECK(a(0, 0) == 1.0);
    CHECK(a(1, 0) == 1.0);
    CHECK(a(0, 1) == 2.0);
    CHECK(a(0, 2) == 3.0);
    CHECK(a(1, 1) == 4.0);
    CHECK(a(1, 2) == 5.0);
}

TEST_CASE("matvec and transpose_matvec agree with matmul") {
    Rng rng(505);
    auto a = oracles::random_matrix(rng, 6, 4);
    auto v = oracles::random_vector(rng, 4);
    auto y = oracles::random_vector(rng, 6);

    auto av = matvec(a, v);
    REQUIRE(av.size() == 6);
    DenseMatrix vcol(4, 1, std::vector<double>(v.data()));
    auto av_ref = matmul(a, vcol);
    for (std::size_t i = 0; i < 6; ++i) CHECK(av[i] == av_ref(i, 0));

    auto aty = transpose_matvec(a, y);
    REQUIRE(aty.size() == 4);
    DenseMatrix ycol(6, 1, std::vector<double>(y.data()));
    auto aty_ref = matmul(transpose(a), ycol);
    for (std::size_t j = 0; j < 4; ++j) CHECK(aty[j] == aty_ref(j, 0));

    CHECK_THROWS_AS(matvec(a, y), std::invalid_argument);
    CHECK_THROWS_AS(transpose_matvec(a, v), std::invalid_argument);
}

TEST_CASE("dot validates lengths and sums ascending") {
    RealVector a{1.0, 2.0, 3.0};
    RealVector b{4.0, 5.0, 6.0};
    CHECK(dot(a, b) == 32.0);
    CHECK_THROWS_AS(dot(a, RealVector{1.0}), std::invalid_argument);
}

TEST_CASE("identity behaves as the multiplicative unit") {
    Rng rng(606);
    auto a = oracles::random_matrix(rng, 5, 5);
    auto i = DenseMatrix::identity(5);
    CHECK(oracles::max_abs_diff(matmul(a, i), a) == 0.0);
    CHECK(oracles::max_abs_diff(matmul(i, a), a) == 0.0);
}
