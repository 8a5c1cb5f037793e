#include "citefit/errors.hpp"
#include "citefit/inference.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace citefit;
using inference::DesignMatrix;

namespace {

double rel_diff(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

} // namespace

TEST_CASE("noiseless linear data is recovered exactly") {
    DesignMatrix d;
    d.column_names = {"intercept", "x"};
    d.columns = {{1, 1, 1, 1, 1}, {0, 1, 2, 3, 4}};
    d.response = {1, 3, 5, 7, 9}; // y = 1 + 2x
    auto fit = inference::ols_fit(d);
    CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.residual_std == doctest::Approx(0.0).scale(1.0).epsilon(1e-10));
    CHECK(fit.n_obs == 5);
    for (double r : fit.residuals) CHECK(std::fabs(r) < 1e-10);
}

TEST_CASE("qr solution matches the normal-equations oracle") {
    for (uint64_t seed : {1u, 2u, 3u, 4u}) {
        auto d = testutil::random_design(seed, 200, 5);
        auto fit = inference::ols_fit(d);
        auto oracle = testutil::normal_equations_fit(d);
        for (size_t j = 0; j < 5; ++j) {
            CHECK(rel_diff(fit.coefficients[j], oracle.coefficients[j]) < 1e-9);
            CHECK(rel_diff(fit.standard_errors[j], oracle.standard_errors[j]) < 1e-9);
        }
        CHECK(rel_diff(fit.r_squared, oracle.r_squared) < 1e-10);
        CHECK(rel_diff(fit.adj_r_squared, oracle.adj_r_squared) < 1e-10);
        CHECK(rel_diff(fit.f.value, oracle.f_value) < 1e-8);
        CHECK(fit.f.df1 == oracle.f_df1);
        CHECK(fit.f.df2 == oracle.f_df2);
        CHECK(rel_diff(fit.residual_std, oracle.residual_std) < 1e-10);
    }
}

TEST_CASE("residuals are orthogonal to every predictor and sum with fitted to y") {
    auto d = testutil::random_design(7, 150, 4);
    auto fit = inference::ols_fit(d);
    for (size_t j = 0; j < d.n_cols(); ++j) {
        double dot = 0.0;
        for (size_t r = 0; r < d.n_rows(); ++r) dot += fit.residuals[r] * d.columns[j][r];
        CHECK(std::fabs(dot) < 1e-8); // normal equations: X'e = 0
    }
    for (size_t r = 0; r < d.n_rows(); ++r)
        CHECK(fit.fitted[r] + fit.residuals[r] == doctest::Approx(d.response[r]).epsilon(1e-12));
}

TEST_CASE("row permutation leaves every statistic unchanged") {
    auto d = testutil::random_design(9, 80, 3);
    auto fit = inference::ols_fit(d);

    std::vector<size_t> perm(d.n_rows());
    std::iota(perm.begin(), perm.end(), size_t{0});
    std::mt19937_64 rng(42);
    std::shuffle(perm.begin(), perm.end(), rng);
    DesignMatrix shuffled = d;
    for (size_t r = 0; r < perm.size(); ++r) {
        shuffled.response[r] = d.response[perm[r]];
        for (size_t j = 0; j < d.n_cols(); ++j) shuffled.columns[j][r] = d.columns[j][perm[r]];
    }
    auto fit2 = inference::ols_fit(shuffled);
    for (size_t j = 0; j < d.n_cols(); ++j) {
        CHECK(fit2.coefficients[j] == doctest::Approx(fit.coefficients[j]).epsilon(1e-10));
        CHECK(fit2.standard_errors[j] == doctest::Approx(fit.standard_errors[j]).epsilon(1e-10));
    }
    CHECK(fit2.r_squared == doctest::Approx(fit.r_squared).epsilon(1e-12));
    CHECK(fit2.f.value == doctest::Approx(fit.f.value).epsilon(1e-10));
}

TEST_CASE("r_squared equals the definition recomputed from residuals") {
    auto d = testutil::random_design(13, 120, 4);
    auto fit = inference::ols_fit(d);
    double ssr = 0.0;
    for (double e : fit.residuals) ssr += e * e;
    double mean = 0.0;
    for (double y : d.response) mean += y;
    mean /= static_cast<double>(d.n_rows());
    double sst = 0.0;
    for (double y : d.response) sst += (y - mean) * (y - mean);
    CHECK(fit.r_squared == doctest::Approx(1.0 - ssr / sst).epsilon(1e-12));
    size_t n = d.n_rows(), p = d.n_cols();
    CHECK(fit.adj_r_squared ==
          doctest::Approx(1.0 - (1.0 - fit.r_squared) * double(n - 1) / double(n - p))
              .epsilon(1e-12));
    // F from the same sums of squares
    double f = ((sst - ssr) / double(p - 1)) / (ssr / double(n - p));
    CHECK(fit.f.value == doctest::Approx(f).epsilon(1e-10));
    CHECK(fit.f.df1 == p - 1);
    CHECK(fit.f.df2 == n - p);
}

TEST_CASE("duplicated column raises rank_deficiency_error naming the offenders") {
    DesignMatrix d;
    d.column_names = {"intercept", "x", "x_copy"};
    std::vector<double> x = {0, 1, 2, 3, 4, 5};
    d.columns = {std::vector<double>(6, 1.0), x, x};
    d.response = {0, 1, 2, 3, 4, 5};
    try {
        inference::ols_fit(d);
        FAIL("expected rank_deficiency_error");
    } catch (const rank_deficiency_error& e) {
        REQUIRE_FALSE(e.columns().empty());
        // the collapsed diagonal lands on the later duplicate
        CHECK(std::find(e.columns().begin(), e.columns().end(), "x_copy") != e.columns().end());
        CHECK(std::string(e.what()).find("x_copy") != std::string::npos);
    }
}

TEST_CASE("all-zero column raises rank_deficiency_error") {
    DesignMatrix d;
    d.column_names = {"intercept", "zero"};
    d.columns = {std::vector<double>(10, 1.0), std::vector<double>(10, 0.0)};
    d.response.assign(10, 1.0);
    CHECK_THROWS_AS(inference::ols_fit(d), rank_deficiency_error);
}

TEST_CASE("design validation rejects malformed input") {
    DesignMatrix d;
    d.column_names = {"a"};
    d.columns = {{1, 2, 3}};
    d.response = {1, 2}; // length mismatch
    CHECK_THROWS_AS(d.validate(), domain_error);

    d.response = {1, 2, 3};
    d.columns[0][1] = std::nan(""); // non-finite entry
    CHECK_THROWS_AS(d.validate(), domain_error);

    d.columns[0][1] = 2;
    d.column_names = {"a", "a"};
    d.columns.push_back({4, 5, 6}); // duplicate name
    CHECK_THROWS_AS(d.validate(), domain_error);

    DesignMatrix tiny;
    tiny.column_names = {"a", "b"};
    tiny.columns = {{1, 2}, {3, 4}};
    tiny.response = {1, 2}; // n == p
    CHECK_THROWS_AS(tiny.validate(), domain_error);
}

TEST_CASE("coefficient lookup by name") {
    DesignMatrix d;
    d.column_names = {"intercept", "slope"};
    d.columns = {{1, 1, 1, 1}, {0, 1, 2, 3}};
    d.response = {1, 2, 3, 4.1};
    auto fit = inference::ols_fit(d);
    CHECK(fit.coefficient("slope") == fit.coefficients[1]);
    CHECK(fit.standard_error("intercept") == fit.standard_errors[0]);
    CHECK_THROWS_AS(fit.coefficient("nope"), domain_error);
}

TEST_CASE("t_pvalue matches an adaptive-quadrature oracle") {
    for (double df : {2.0, 5.0, 30.0, 60.0, 200.0}) {
        for (double t : {0.3, 1.0, 2.0, 3.5, 6.0}) {
            double got = inference::t_pvalue(t, df);
            double want = testutil::t_pvalue_quadrature(t, df);
            CHECK(std::fabs(got - want) < 1e-9);
        }
    }
    // the canonical calibration point
    CHECK(inference::t_pvalue(2.0, 60.0) == doctest::Approx(0.0499).epsilon(0.02));
    CHECK(std::fabs(inference::t_pvalue(2.0, 60.0) - testutil::t_pvalue_quadrature(2.0, 60.0)) < 1e-10);
}

TEST_CASE("t_pvalue limits and symmetry") {
    CHECK(inference::t_pvalue(0.0, 10.0) == 1.0);
    CHECK(inference::t_pvalue(-2.5, 12.0) == inference::t_pvalue(2.5, 12.0));
    CHECK(inference::t_pvalue(12.0, 600.0) < 1e-28);
    CHECK(inference::t_pvalue(std::numeric_limits<double>::infinity(), 10.0) == 0.0);
    CHECK_THROWS_AS(inference::t_pvalue(std::nan(""), 10.0), domain_error);
    CHECK_THROWS_AS(inference::t_pvalue(1.0, 0.0), domain_error);
}

TEST_CASE("t_pvalue is strictly decreasing in |t|") {
    for (double df : {1.0, 4.0, 60.0}) {
        double prev = 1.0;
        for (double t = 0.25; t <= 8.0; t += 0.25) {
            double p = inference::t_pvalue(t, df);
            CHECK(p < prev);
            prev = p;
        }
    }
}

TEST_CASE("t_pvalue approaches the normal tail at huge df") {
    for (double t : {1.0, 2.0, 3.0}) {
        double normal = std::erfc(t / std::sqrt(2.0)); // two-sided Gaussian
        CHECK(std::fabs(inference::t_pvalue(t, 1e6) - normal) < 1e-6);
    }
}

TEST_CASE("regularized incomplete beta edge values") {
    using inference::detail::regularized_incomplete_beta;
    CHECK(regularized_incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(regularized_incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    // symmetry point of Beta(a, a)
    CHECK(regularized_incomplete_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(regularized_incomplete_beta(3.0, 3.0, 0.5) == doctest::Approx(0.5).epsilon(1e-12));
    // I_x(1, 1) is the identity
    CHECK(regularized_incomplete_beta(1.0, 1.0, 0.25) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("significance stars follow the usual ladder") {
    CHECK(inference::significance_stars(0.0005) == "***");
    CHECK(inference::significance_stars(0.001) == "***");
    CHECK(inference::significance_stars(0.005) == "**");
    CHECK(inference::significance_stars(0.026) == "*");
    CHECK(inference::significance_stars(0.05) == "*");
    CHECK(inference::significance_stars(0.06) == ".");
    CHECK(inference::significance_stars(0.1) == ".");
    CHECK(inference::significance_stars(0.31) == "");
    CHECK(inference::significance_stars(1.0) == "");
}
