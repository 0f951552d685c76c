#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include <bcrb/bounds_asymptotic.hpp>
#include <bcrb/bounds_exact.hpp>
#include <bcrb/linmodel.hpp>
#include <bcrb/stats.hpp>

using namespace bcrb;

TEST_CASE("f_func frozen values", "[bounds_asymptotic]") {
    CHECK(f_func(0.0, 0.1) == 0.0);
    CHECK(f_func(0.0, 0.9) == 0.0);
    CHECK(std::abs(f_func(1.5, 0.1) - 0.351262787337) < 1e-9);
    CHECK(std::abs(f_func(100.0, 0.1) - 39.5609690883) < 1e-7);
}

TEST_CASE("f_func stays accurate at extreme r", "[bounds_asymptotic]") {
    // At tiny r the radicals are both ~1 and their naive difference loses
    // most digits; the rationalized form must match the expansion 4 r^2 beta.
    for (double r : {1e-12, 1e-9, 1e-6}) {
        CHECK(std::abs(f_func(r, 0.1) / (4.0 * r * r * 0.1) - 1.0) < 1e-5);
    }
    // At huge r it must match f ~ 4 r beta - 4 beta/(1-beta).
    const double beta = 0.25;
    for (double r : {1e8, 1e12, 1e16}) {
        const double expected = 4.0 * r * beta - 4.0 * beta / (1.0 - beta);
        CHECK(std::abs(f_func(r, beta) / expected - 1.0) < 1e-9);
    }
}

TEST_CASE("f_func domain validation", "[bounds_asymptotic]") {
    CHECK_THROWS_AS(f_func(1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(f_func(1.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(f_func(1.0, -0.1), std::domain_error);
    CHECK_THROWS_AS(f_func(1.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(f_func(-0.5, 0.1), std::domain_error);
}

TEST_CASE("asymptotic bound frozen values and range", "[bounds_asymptotic]") {
    CHECK(std::abs(bcrb_x_asymptotic({1.5, 0.1, 1.0}).value - 0.414562021106) < 1e-9);
    CHECK(std::abs(bcrb_x_asymptotic({100.0, 0.1, 1.0}).value - 0.0109757727925) < 1e-9);
    CHECK(bcrb_x_asymptotic({0.0, 0.1, 1.0}).value == 1.0);
    CHECK(bcrb_x_asymptotic({1.5, 0.1, 2.0}).value ==
          Catch::Approx(2.0 * 0.414562021106).epsilon(1e-10));
    for (double r : {0.001, 0.1, 1.0, 10.0, 1e4}) {
        const double v = bcrb_x_asymptotic({r, 0.3, 1.0}).value;
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("regime validity flags", "[bounds_asymptotic]") {
    {
        const BcrbAsymptotic b = bcrb_x_asymptotic({1.5, 0.1, 1.0});
        CHECK(b.small_beta_ok);
        CHECK_FALSE(b.small_r_ok);
        CHECK_FALSE(b.large_r_ok);
    }
    {
        const BcrbAsymptotic b = bcrb_x_asymptotic({0.05, 0.1, 1.0});
        CHECK(b.small_r_ok);  // 0.05 * (1 + sqrt(0.1))^2 = 0.0866 < 1
    }
    CHECK_FALSE(bcrb_x_asymptotic({1.5, 0.2, 1.0}).small_beta_ok);
    CHECK(bcrb_x_asymptotic({100.0, 0.1, 1.0}).large_r_ok);  // 100 > 10/(0.9)^2
    CHECK_FALSE(bcrb_x_asymptotic({12.0, 0.1, 1.0}).large_r_ok);  // 12 < 12.35
    // The SNR-based tightening at finite nu caps the flag at r = 1/4.
    CHECK(small_r_valid(0.15, 0.1, 6.0));
    CHECK_FALSE(small_r_valid(0.3, 0.1, 6.0));
    CHECK(small_r_valid(0.2, 0.1, std::numeric_limits<double>::infinity()));
    CHECK_FALSE(small_r_valid(0.26, 0.1, std::numeric_limits<double>::infinity()));
    CHECK(small_r_valid(0.3, 0.1));  // no nu supplied: Neumann condition only
}

TEST_CASE("small-beta approximation", "[bounds_asymptotic]") {
    CHECK(bcrb_small_beta(1.5, 1.0) == Catch::Approx(0.4).epsilon(1e-15));
    CHECK(bcrb_small_beta(0.0, 2.5) == 2.5);
    // Within its regime the approximation tracks the closed form.
    const double b = bcrb_x_asymptotic({1.5, 0.01, 1.0}).value;
    CHECK(std::abs(bcrb_small_beta(1.5, 1.0) - b) / b < 0.01);
}

TEST_CASE("small-r approximation", "[bounds_asymptotic]") {
    const SmallRBound b = bcrb_small_r(0.05, 1.0, 0.1);
    CHECK(b.value == Catch::Approx(0.95).epsilon(1e-15));
    CHECK(b.valid);
    const SmallRBound invalid = bcrb_small_r(1.5, 1.0, 0.1);
    CHECK(invalid.value == Catch::Approx(-0.5).epsilon(1e-15));
    CHECK_FALSE(invalid.valid);
    const SmallRBound with_nu = bcrb_small_r(0.3, 1.0, 0.1, NoisePrior(1.0, 6.0));
    CHECK_FALSE(with_nu.valid);
    // Inside the flagged regime the linear term dominates the closed form.
    const double exact = bcrb_x_asymptotic({0.02, 0.1, 1.0}).value;
    CHECK(std::abs(bcrb_small_r(0.02, 1.0, 0.1).value - exact) / exact < 0.01);
}

TEST_CASE("large-r approximation frozen values", "[bounds_asymptotic]") {
    CHECK(std::abs(bcrb_large_r(100.0, 0.1, 1.0) - 0.0109739368999) < 1e-9);
    const double closed = bcrb_x_asymptotic({100.0, 0.1, 1.0}).value;
    CHECK(std::abs(bcrb_large_r(100.0, 0.1, 1.0) - closed) / closed < 1e-3);
    // Leading term sigma_x2/(r (1-beta)) at very large r.
    CHECK(bcrb_large_r(1e6, 0.5, 1.0) == Catch::Approx(2e-6).epsilon(1e-4));
    CHECK_THROWS_AS(bcrb_large_r(0.0, 0.1, 1.0), std::domain_error);
}

TEST_CASE("bound is monotone in r and in beta", "[bounds_asymptotic]") {
    for (double beta : {0.05, 0.3, 0.7, 0.9}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double r : {0.01, 0.1, 0.5, 2.0, 10.0, 200.0}) {
            const double v = bcrb_x_asymptotic({r, beta, 1.0}).value;
            CHECK(v < prev);
            prev = v;
        }
    }
    for (double r : {0.1, 1.5, 30.0}) {
        double prev = 0.0;
        for (double beta : {0.05, 0.2, 0.5, 0.8, 0.95}) {
            const double v = bcrb_x_asymptotic({r, beta, 1.0}).value;
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("marchenko-pastur functionals", "[bounds_asymptotic]") {
    CHECK(mp_trace_inverse(0.1) == Catch::Approx(1.0 / 0.9).epsilon(1e-14));
    CHECK(mp_trace_inverse_sq(0.1) == Catch::Approx(1.37174211248).epsilon(1e-11));
    CHECK(mp_lambda_max(0.1) == Catch::Approx(1.73245553203).epsilon(1e-11));
    CHECK_THROWS_AS(mp_trace_inverse(1.0), std::domain_error);
    CHECK_THROWS_AS(mp_trace_inverse_sq(0.0), std::domain_error);
    CHECK_THROWS_AS(mp_lambda_max(-0.2), std::domain_error);
}

TEST_CASE("exact bound converges to the asymptotic value at N=1000", "[bounds_asymptotic]") {
    const AmplitudePrior ampl(1.0);
    const NoisePrior noise(2.0 / 3.0, 6.0);  // r = 1.5
    const ModelDims dims(1000, 100);
    const int seeds = 200;
    std::vector<double> vals(seeds);
    for (int s = 0; s < seeds; ++s) {
        auto rng = make_engine(mix_seed(777, static_cast<std::uint64_t>(s)), stream::matrix);
        vals[static_cast<std::size_t>(s)] =
            bcrb_x_exact(generate_matrix(dims, MatrixEnsemble::gaussian, rng), ampl, noise);
    }
    const double limit = bcrb_x_asymptotic({1.5, 0.1, 1.0}).value;
    CHECK(std::abs(mean(vals) - limit) / limit < 0.005);
}

TEST_CASE("gaussian and rademacher designs give the same bound", "[bounds_asymptotic]") {
    const AmplitudePrior ampl(1.0);
    const NoisePrior noise(2.0 / 3.0, 6.0);
    const ModelDims dims(400, 40);
    const int seeds = 30;
    std::vector<double> g(seeds), rad(seeds);
    for (int s = 0; s < seeds; ++s) {
        auto rng_g = make_engine(mix_seed(888, static_cast<std::uint64_t>(s)), stream::matrix);
        auto rng_r = make_engine(mix_seed(889, static_cast<std::uint64_t>(s)), stream::matrix);
        g[static_cast<std::size_t>(s)] =
            bcrb_x_exact(generate_matrix(dims, MatrixEnsemble::gaussian, rng_g), ampl, noise);
        rad[static_cast<std::size_t>(s)] =
            bcrb_x_exact(generate_matrix(dims, MatrixEnsemble::rademacher, rng_r), ampl, noise);
    }
    const double se = std::sqrt(sample_variance(g) / seeds + sample_variance(rad) / seeds);
    CHECK(std::abs(mean(g) - mean(rad)) < 3.0 * se + 1e-12);
}
