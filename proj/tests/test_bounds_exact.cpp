#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include <bcrb/bounds_exact.hpp>
#include <bcrb/linmodel.hpp>
#include <bcrb/stats.hpp>

using namespace bcrb;

namespace {

Eigen::MatrixXd random_design(int n, int k, std::uint64_t seed) {
    auto rng = make_engine(seed, stream::matrix);
    return generate_matrix(ModelDims(n, k), MatrixEnsemble::gaussian, rng);
}

}  // namespace

TEST_CASE("effective snr and r", "[bounds_exact]") {
    const AmplitudePrior ampl(1.0);
    {
        const EffectiveSnr es = effective_snr(ampl, NoisePrior(1.0, 6.0));
        CHECK(es.r == 1.0);
        CHECK(es.snr == Catch::Approx(2.0 / 3.0).epsilon(1e-14));
    }
    {
        // sigma_e^2 = 1 at nu = 6 means sigma2 = 2/3 and r = 1.5 at SNR 1.
        const EffectiveSnr es = effective_snr(ampl, NoisePrior(2.0 / 3.0, 6.0));
        CHECK(es.snr == Catch::Approx(1.0).epsilon(1e-12));
        CHECK(es.r == Catch::Approx(1.5).epsilon(1e-12));
    }
    {
        // r converges to the SNR as nu grows.
        const EffectiveSnr es = effective_snr(ampl, NoisePrior(1.0, 1e8));
        CHECK(std::abs(es.r - es.snr) < 1e-7);
    }
    CHECK_THROWS_AS(effective_snr(ampl, NoisePrior(1.0, 2.0)), std::domain_error);
}

TEST_CASE("bim_xx closed forms", "[bounds_exact]") {
    const AmplitudePrior ampl(1.0);
    const NoisePrior noise(2.0 / 3.0, 6.0);  // sigma_e^2 = 1
    {
        // Zero design: prior information only.
        const Eigen::MatrixXd a = Eigen::MatrixXd::Zero(50, 4);
        const Eigen::MatrixXd j = bim_xx(a, ampl, noise);
        CHECK((j - Eigen::MatrixXd::Identity(4, 4)).lpNorm<Eigen::Infinity>() == 0.0);
    }
    {
        // Unit-norm single column: J = nu/((nu-2) sigma_e^2) + 1/sigma_x2 = 2.5.
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(10, 1);
        a(0, 0) = 1.0;
        const Eigen::MatrixXd j = bim_xx(a, ampl, noise);
        REQUIRE(j.rows() == 1);
        CHECK(j(0, 0) == Catch::Approx(2.5).epsilon(1e-12));
    }
}

TEST_CASE("bim_xx matches Monte Carlo curvature of the log-joint", "[bounds_exact]") {
    // K = 1, unit design column, sigma_e^2 = 1, nu = 6, sigma_x2 = 1. The
    // log-joint is quadratic in x, so a central second difference recovers
    // the curvature gamma/sigma2 + 1 exactly per draw; averaging over the
    // hyper-prior must approach the closed-form 2.5.
    const NoisePrior noise(2.0 / 3.0, 6.0);
    auto rng = make_engine(271828, 0);
    const double y = 0.3, x0 = -0.4, h = 1e-3;
    NeumaierAccumulator acc;
    const int draws = 200000;
    for (int i = 0; i < draws; ++i) {
        const double gamma = sample_gamma_hyper(noise, rng);
        auto logp = [&](double x) {
            return -gamma * (y - x) * (y - x) / (2.0 * noise.sigma2) - x * x / 2.0;
        };
        acc.add(-(logp(x0 + h) - 2.0 * logp(x0) + logp(x0 - h)) / (h * h));
    }
    const double fd = acc.total() / draws;
    CHECK(std::abs(fd - 2.5) < 0.01);
}

TEST_CASE("bim_xx is exactly symmetric and rejects bad input", "[bounds_exact]") {
    const AmplitudePrior ampl(0.7);
    const NoisePrior noise(1.3, 5.0);
    const Eigen::MatrixXd a = random_design(60, 12, 21);
    const Eigen::MatrixXd j = bim_xx(a, ampl, noise);
    CHECK((j - j.transpose()).lpNorm<Eigen::Infinity>() == 0.0);
    Eigen::MatrixXd bad = a;
    bad(3, 4) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(bim_xx(bad, ampl, noise), std::invalid_argument);
}

TEST_CASE("bim_gamma closed forms and domain", "[bounds_exact]") {
    const NoisePrior nu6(1.0, 6.0);
    CHECK(bim_gamma(100, nu6) == 234.0);
    CHECK(bim_gamma(0, nu6) == 9.0);
    CHECK(bim_gamma(100, NoisePrior(1.0, std::numeric_limits<double>::infinity())) ==
          std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(bim_gamma(100, NoisePrior(1.0, 4.0)), std::domain_error);
    CHECK_THROWS_AS(bim_gamma(100, NoisePrior(1.0, 3.0)), std::domain_error);
    CHECK_THROWS_AS(bim_gamma(-1, nu6), std::invalid_argument);
    // The data term scales linearly in N.
    const double j0 = bim_gamma(0, nu6);
    const double j1 = bim_gamma(1, nu6);
    const double j10 = bim_gamma(10, nu6);
    CHECK(j10 - j0 == Catch::Approx(10.0 * (j1 - j0)).epsilon(1e-13));
}

TEST_CASE("bcrb_gamma inverts bim_gamma", "[bounds_exact]") {
    const NoisePrior nu6(1.0, 6.0);
    CHECK(bcrb_gamma(100, nu6) == Catch::Approx(1.0 / 234.0).epsilon(1e-15));
    CHECK(bcrb_gamma(0, nu6) == Catch::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(bcrb_gamma(100, NoisePrior(1.0, std::numeric_limits<double>::infinity())) == 0.0);
    // More observations can only tighten the hyper-parameter bound.
    double prev = bcrb_gamma(0, nu6);
    for (int n : {1, 10, 100, 1000}) {
        const double b = bcrb_gamma(n, nu6);
        CHECK(b < prev);
        prev = b;
    }
}

TEST_CASE("bcrb_x_exact closed forms", "[bounds_exact]") {
    const AmplitudePrior ampl(1.0);
    const NoisePrior noise(2.0 / 3.0, 6.0);  // r = 1.5
    {
        // Zero design: the bound is the prior variance.
        const Eigen::MatrixXd a = Eigen::MatrixXd::Zero(50, 4);
        CHECK(bcrb_x_exact(a, ampl, noise) == 1.0);
    }
    {
        // Unit-norm single column: sigma_x2 / (r + 1) = 0.4.
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(10, 1);
        a(0, 0) = 1.0;
        CHECK(bcrb_x_exact(a, ampl, noise) == Catch::Approx(0.4).epsilon(1e-12));
    }
}

TEST_CASE("bcrb_x_exact concentrates near its large-system value", "[bounds_exact]") {
    const AmplitudePrior ampl(1.0);
    const NoisePrior noise(2.0 / 3.0, 6.0);  // r = 1.5, beta = 0.1
    const int seeds = 200;
    std::vector<double> vals(seeds);
    for (int s = 0; s < seeds; ++s)
        vals[static_cast<std::size_t>(s)] =
            bcrb_x_exact(random_design(100, 10, mix_seed(55, static_cast<std::uint64_t>(s))),
                         ampl, noise);
    CHECK(std::abs(mean(vals) - 0.414562021106) < 0.01);
}

TEST_CASE("bcrb_x_exact decreases in r and is capped by the prior", "[bounds_exact]") {
    const AmplitudePrior ampl(1.0);
    const Eigen::MatrixXd a = random_design(80, 8, 99);
    double prev = std::numeric_limits<double>::infinity();
    for (double snr : {0.01, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
        const NoisePrior noise = noise_prior_for_snr(ampl, snr, 6.0);
        const double b = bcrb_x_exact(a, ampl, noise);
        CHECK(b > 0.0);
        CHECK(b < 1.0);
        CHECK(b < prev);
        prev = b;
    }
}

TEST_CASE("solve path agrees with the eigenvalue path", "[bounds_exact]") {
    const AmplitudePrior ampl(1.0);
    const Eigen::MatrixXd a = random_design(100, 10, 123);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a, Eigen::EigenvaluesOnly);
    for (double snr : {0.01, 1.0, 1000.0}) {
        const NoisePrior noise = noise_prior_for_snr(ampl, snr, 6.0);
        const double direct = bcrb_x_exact(a, ampl, noise);
        const double via_eig =
            bcrb_x_from_eigenvalues(es.eigenvalues(), effective_snr(ampl, noise).r, 1.0);
        CHECK(std::abs(direct - via_eig) / via_eig < 1e-10);
    }
    CHECK_THROWS_AS(bcrb_x_from_eigenvalues(Eigen::VectorXd(), 1.0, 1.0), std::invalid_argument);
    Eigen::VectorXd negative(1);
    negative[0] = -1.0;
    CHECK_THROWS_AS(bcrb_x_from_eigenvalues(negative, 2.0, 1.0), std::domain_error);
}

TEST_CASE("block-diagonal inverse is consistent with the per-block bounds", "[bounds_exact]") {
    const AmplitudePrior ampl(1.0);
    const NoisePrior noise = noise_prior_for_snr(ampl, 1.0, 6.0);
    const Eigen::MatrixXd a = random_design(100, 10, 321);
    const BimBlocks blocks = bim_blocks(a, ampl, noise);
    const Eigen::Index k = blocks.j_xx.rows();
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(k + 1, k + 1);
    full.topLeftCorner(k, k) = blocks.j_xx;
    full(k, k) = blocks.j_gamma;
    const Eigen::MatrixXd inv =
        Eigen::LDLT<Eigen::MatrixXd>(full).solve(Eigen::MatrixXd::Identity(k + 1, k + 1));
    const double bx = inv.topLeftCorner(k, k).trace() / static_cast<double>(k);
    const double bg = inv(k, k);
    CHECK(std::abs(bx - bcrb_x_exact(a, ampl, noise)) / bx < 1e-12);
    CHECK(std::abs(bg - bcrb_gamma(static_cast<int>(a.rows()), noise)) / bg < 1e-12);
    const BcrbExact both = bcrb_exact(a, ampl, noise);
    CHECK(both.bcrb_x == bcrb_x_exact(a, ampl, noise));
    CHECK(both.bcrb_gamma == bcrb_gamma(100, noise));
}

TEST_CASE("bcrb_x_exact validates its design", "[bounds_exact]") {
    const AmplitudePrior ampl(1.0);
    const NoisePrior noise(1.0, 6.0);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(5, 2);
    bad(1, 1) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(bcrb_x_exact(bad, ampl, noise), std::invalid_argument);
    CHECK_THROWS_AS(bcrb_x_exact(Eigen::MatrixXd(), ampl, noise), std::invalid_argument);
}
