#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bcrb/bounds_asymptotic.hpp"
#include "bcrb/bounds_exact.hpp"
#include "bcrb/distributions.hpp"
#include "bcrb/estimators.hpp"
#include "bcrb/linmodel.hpp"
#include "bcrb/parallel.hpp"
#include "bcrb/stats.hpp"
#include "bcrb/sweep.hpp"

namespace bcrb {

/// One self-check outcome. tol is the allowed deviation from target after
/// scaling; pass already encodes whether the comparison was one- or
/// two-sided.
struct ValidationCheck {
    std::string name;
    double value;
    double target;
    double tol;
    bool pass;
};

struct ValidationReport {
    std::string suite;
    std::uint64_t seed;
    std::vector<ValidationCheck> checks;

    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

namespace detail {

inline ValidationCheck check_abs(std::string name, double value, double target, double tol) {
    const bool pass = std::isfinite(value) && std::abs(value - target) <= tol;
    return {std::move(name), value, target, tol, pass};
}

inline ValidationCheck check_lower(std::string name, double value, double target, double tol) {
    const bool pass = std::isfinite(value) && value >= target - tol;
    return {std::move(name), value, target, tol, pass};
}

/// Composite 7-point Gauss-Legendre quadrature over [a, b].
template <typename F>
double integrate_gl7(F&& f, double a, double b, int panels) {
    static constexpr double nodes[4] = {0.0, 0.4058451513773971669066064,
                                        0.7415311855993944398638648,
                                        0.9491079123427585245261897};
    static constexpr double weights[4] = {0.4179591836734693877551020,
                                          0.3818300505051189449503698,
                                          0.2797053914892766679014678,
                                          0.1294849661688696932706114};
    NeumaierAccumulator acc;
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (static_cast<double>(p) + 0.5) * h;
        const double half = 0.5 * h;
        acc.add(weights[0] * f(mid) * half);
        for (int q = 1; q < 4; ++q)
            acc.add(weights[q] * (f(mid - half * nodes[q]) + f(mid + half * nodes[q])) * half);
    }
    return acc.total();
}

/// CDF of S(mu, sigma2, nu) at each of the ascending points, by cumulative
/// quadrature anchored at CDF(mu) = 1/2.
inline std::vector<double> student_cdf_sorted(const std::vector<double>& pts, double mu,
                                              double sigma2, double nu) {
    const double s = std::sqrt(sigma2);
    auto pdf = [&](double u) { return student_pdf(u, mu, sigma2, nu); };
    auto panels_for = [&](double gap) {
        return std::clamp(static_cast<int>(gap / (0.25 * s)) + 1, 1, 256);
    };
    std::vector<double> cdf(pts.size());
    const auto split = static_cast<std::size_t>(
        std::lower_bound(pts.begin(), pts.end(), mu) - pts.begin());
    double c = 0.5;
    double prev = mu;
    for (std::size_t i = split; i < pts.size(); ++i) {
        c += integrate_gl7(pdf, prev, pts[i], panels_for(pts[i] - prev));
        cdf[i] = std::min(c, 1.0);
        prev = pts[i];
    }
    c = 0.5;
    prev = mu;
    for (std::size_t i = split; i-- > 0;) {
        c -= integrate_gl7(pdf, pts[i], prev, panels_for(prev - pts[i]));
        cdf[i] = std::max(c, 0.0);
        prev = pts[i];
    }
    return cdf;
}

/// Two-sided Kolmogorov-Smirnov statistic of the sample against
/// S(mu, sigma2, nu). Sorts a copy of the sample.
inline double ks_statistic_student(std::vector<double> sample, double mu, double sigma2,
                                   double nu) {
    if (sample.empty()) throw std::invalid_argument("ks_statistic_student: empty sample");
    std::sort(sample.begin(), sample.end());
    const std::vector<double> cdf = student_cdf_sorted(sample, mu, sigma2, nu);
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        d = std::max(d, std::abs(cdf[i] - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - cdf[i]));
    }
    return d;
}

/// Critical KS value at the 1% level for sample size n (asymptotic form).
inline double ks_critical_1pct(std::size_t n) {
    return 1.62762361152 / std::sqrt(static_cast<double>(n));
}

inline void append_distribution_checks(std::vector<ValidationCheck>& checks, std::uint64_t seed,
                                       double scale) {
    {
        const NoisePrior noise(1.0, 6.0);
        auto rng = make_engine(seed, 1000);
        const std::size_t draws = 1000000;
        NeumaierAccumulator acc_gamma, acc_inv2;
        for (std::size_t i = 0; i < draws; ++i) {
            const double g = sample_gamma_hyper(noise, rng);
            acc_gamma.add(g);
            acc_inv2.add(1.0 / (g * g));
        }
        const double nd = static_cast<double>(draws);
        checks.push_back(check_abs("gamma_hyper_mean_nu6", acc_gamma.total() / nd, 1.0,
                                   0.02 * scale));
        checks.push_back(check_abs("inv_gamma_second_moment_nu6", acc_inv2.total() / nd,
                                   inv_gamma_second_moment(6.0), 0.09 * scale));
    }
    {
        const NoisePrior noise(1.0, 6.0);
        auto rng = make_engine(seed, 1001);
        const Eigen::VectorXd e = sample_student_noise(noise, 1000000, rng);
        checks.push_back(check_abs("student_second_moment_nu6",
                                   e.squaredNorm() / static_cast<double>(e.size()),
                                   noise.marginal_variance(), 0.03 * scale));
    }
    const double dfs[3] = {3.0, 6.0, 30.0};
    for (int i = 0; i < 3; ++i) {
        const NoisePrior noise(1.0, dfs[i]);
        auto rng = make_engine(seed, 1002 + static_cast<std::uint64_t>(i));
        const std::size_t n = 100000;
        const Eigen::VectorXd e = sample_student_noise(noise, static_cast<Eigen::Index>(n), rng);
        std::vector<double> sample(e.data(), e.data() + e.size());
        const double d = ks_statistic_student(std::move(sample), 0.0, 1.0, dfs[i]);
        checks.push_back(check_abs("ks_student_nu" + std::to_string(static_cast<int>(dfs[i])), d,
                                   0.0, ks_critical_1pct(n) * scale));
    }
}

inline void append_spectral_checks(std::vector<ValidationCheck>& checks, std::uint64_t seed,
                                   double scale) {
    const ModelDims dims(1000, 100);
    const double beta = dims.beta();
    const int n_seeds = 20;
    const std::pair<MatrixEnsemble, const char*> ensembles[2] = {
        {MatrixEnsemble::gaussian, "gaussian"}, {MatrixEnsemble::rademacher, "rademacher"}};
    for (int e = 0; e < 2; ++e) {
        std::vector<double> tr_inv(n_seeds), tr_inv_sq(n_seeds), lam_max(n_seeds);
        parallel_for(n_seeds, [&](std::int64_t s) {
            auto rng = make_engine(mix_seed(seed, 2000 + 100 * static_cast<std::uint64_t>(e)),
                                   static_cast<std::uint64_t>(s));
            const Eigen::MatrixXd a = generate_matrix(dims, ensembles[e].first, rng);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::gram(a),
                                                              Eigen::EigenvaluesOnly);
            const Eigen::VectorXd& lam = es.eigenvalues();
            tr_inv[static_cast<std::size_t>(s)] = lam.cwiseInverse().mean();
            tr_inv_sq[static_cast<std::size_t>(s)] = lam.cwiseAbs2().cwiseInverse().mean();
            lam_max[static_cast<std::size_t>(s)] = lam.maxCoeff();
        });
        const std::string prefix = std::string("spectral_") + ensembles[e].second;
        checks.push_back(check_abs(prefix + "_trace_inverse", mean(tr_inv),
                                   mp_trace_inverse(beta), 0.02 * mp_trace_inverse(beta) * scale));
        checks.push_back(check_abs(prefix + "_trace_inverse_sq", mean(tr_inv_sq),
                                   mp_trace_inverse_sq(beta),
                                   0.02 * mp_trace_inverse_sq(beta) * scale));
        checks.push_back(check_abs(prefix + "_lambda_max", mean(lam_max), mp_lambda_max(beta),
                                   0.03 * mp_lambda_max(beta) * scale));
    }
}

inline void append_bounds_checks(std::vector<ValidationCheck>& checks, std::uint64_t seed,
                                 double scale) {
    checks.push_back(check_abs("asymptotic_spot_r1p5_beta0p1",
                               bcrb_x_asymptotic({1.5, 0.1, 1.0}).value, 0.414562021106,
                               1e-9 * scale));
    const NoisePrior nu6(1.0, 6.0);
    checks.push_back(check_abs("bim_gamma_n100_nu6", bim_gamma(100, nu6), 234.0, 0.0));
    checks.push_back(
        check_abs("bcrb_gamma_n100_nu6", bcrb_gamma(100, nu6), 1.0 / 234.0, 1e-15 / 234.0 * scale));
    {
        SweepConfig cfg;
        cfg.seed = mix_seed(seed, 4000);
        const auto rows = compute_sweep(cfg);
        double worst = 0.0;
        for (const SweepRow& row : rows)
            worst = std::max(worst,
                             std::abs(row.bcrb_exact_mean - row.bcrb_asymptotic) /
                                 row.bcrb_asymptotic);
        checks.push_back(check_abs("exact_vs_asymptotic_n100_k10", worst, 0.0, 0.02 * scale));
    }
    {
        const ModelDims dims(100, 10);
        const AmplitudePrior ampl(1.0);
        auto rng = make_engine(mix_seed(seed, 4001), stream::matrix);
        const Eigen::MatrixXd a = generate_matrix(dims, MatrixEnsemble::gaussian, rng);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(detail::gram(a), Eigen::EigenvaluesOnly);
        double worst = 0.0;
        for (double snr : {0.01, 1.0, 1000.0}) {
            const NoisePrior noise = noise_prior_for_snr(ampl, snr, 6.0);
            const double direct = bcrb_x_exact(a, ampl, noise);
            const double via_eig =
                bcrb_x_from_eigenvalues(es.eigenvalues(), effective_snr(ampl, noise).r, 1.0);
            worst = std::max(worst, std::abs(direct - via_eig) / via_eig);
        }
        checks.push_back(check_abs("ldlt_vs_eigendecomposition", worst, 0.0, 1e-10 * scale));
    }
    {
        const ModelDims dims(100, 10);
        const AmplitudePrior ampl(1.0);
        const NoisePrior noise = noise_prior_for_snr(ampl, 1.0, 6.0);
        auto rng = make_engine(mix_seed(seed, 4002), stream::matrix);
        const Eigen::MatrixXd a = generate_matrix(dims, MatrixEnsemble::gaussian, rng);
        const BimBlocks blocks = bim_blocks(a, ampl, noise);
        const Eigen::Index k = blocks.j_xx.rows();
        Eigen::MatrixXd full = Eigen::MatrixXd::Zero(k + 1, k + 1);
        full.topLeftCorner(k, k) = blocks.j_xx;
        full(k, k) = blocks.j_gamma;
        const Eigen::MatrixXd inv =
            Eigen::LDLT<Eigen::MatrixXd>(full).solve(Eigen::MatrixXd::Identity(k + 1, k + 1));
        const double bx = inv.topLeftCorner(k, k).trace() / static_cast<double>(k);
        const double bg = inv(k, k);
        const double dev_x = std::abs(bx - bcrb_x_exact(a, ampl, noise)) / bx;
        const double dev_g =
            std::abs(bg - bcrb_gamma(static_cast<int>(a.rows()), noise)) / bg;
        checks.push_back(
            check_abs("block_inverse_consistency", std::max(dev_x, dev_g), 0.0, 1e-12 * scale));
    }
}

inline void append_estimator_checks(std::vector<ValidationCheck>& checks, std::uint64_t seed,
                                    double scale) {
    const ModelDims dims(100, 10);
    const AmplitudePrior ampl(1.0);
    {
        const NoisePrior noise = noise_prior_for_snr(ampl, 1.0, 6.0);
        const McResult res = monte_carlo_mse(dims, ampl, noise, MatrixEnsemble::gaussian,
                                             EstimatorKind::lmmse, 4000, mix_seed(seed, 3000));
        checks.push_back(check_lower("lmmse_margin_nu6_snr0db", res.margin, 0.0,
                                     2.0 * res.std_err * scale));
    }
    {
        const NoisePrior noise(1.0, std::numeric_limits<double>::infinity());
        const McResult res = monte_carlo_mse(dims, ampl, noise, MatrixEnsemble::gaussian,
                                             EstimatorKind::lmmse, 4000, mix_seed(seed, 3001));
        checks.push_back(check_abs("gaussian_tightness_nuinf_snr0db", res.margin, 0.0,
                                   2.0 * res.std_err * scale));
    }
    {
        const NoisePrior noise = noise_prior_for_snr(ampl, 1.0, 6.0);
        const Dataset d = synthesize(dims, ampl, noise, MatrixEnsemble::gaussian,
                                     mix_seed(seed, 3002));
        const Eigen::VectorXd kxk = lmmse_estimate(d.design, d.observations, ampl, noise);
        const Eigen::VectorXd nxn = lmmse_estimate_direct(d.design, d.observations, ampl, noise);
        checks.push_back(check_abs("woodbury_agreement", (kxk - nxn).norm() / kxk.norm(), 0.0,
                                   1e-10 * scale));
    }
    {
        const NoisePrior noise = noise_prior_for_snr(ampl, 1.0, 3.0);
        const McResult lm = monte_carlo_mse(dims, ampl, noise, MatrixEnsemble::gaussian,
                                            EstimatorKind::lmmse, 2000, mix_seed(seed, 3003));
        const McResult ge = monte_carlo_mse(dims, ampl, noise, MatrixEnsemble::gaussian,
                                            EstimatorKind::genie, 2000, mix_seed(seed, 3003));
        checks.push_back(check_lower("genie_no_worse_nu3", lm.mse_x - ge.mse_x, 0.0, 0.0));
    }
    {
        const NoisePrior noise = noise_prior_for_snr(ampl, 1.0, 6.0);
        const McResult a = monte_carlo_mse(dims, ampl, noise, MatrixEnsemble::gaussian,
                                           EstimatorKind::lmmse, 200, mix_seed(seed, 3004));
        const McResult b = monte_carlo_mse(dims, ampl, noise, MatrixEnsemble::gaussian,
                                           EstimatorKind::lmmse, 200, mix_seed(seed, 3004));
        const double dev = std::abs(a.mse_x - b.mse_x) + std::abs(a.bound_x - b.bound_x) +
                           std::abs(a.margin - b.margin);
        checks.push_back(check_abs("mc_determinism", dev, 0.0, 0.0));
    }
}

}  // namespace detail

/// Runs one of the named self-check suites ("distributions", "spectral",
/// "bounds", "estimators", or "all"). tol_scale multiplies every tolerance;
/// 0 turns the suites into a forced-failure probe of the reporting path.
inline ValidationReport run_validation(std::string_view suite, std::uint64_t seed = kDefaultSeed,
                                       double tol_scale = 1.0) {
    if (std::isnan(tol_scale) || tol_scale < 0.0)
        throw std::invalid_argument("run_validation: tol-scale must be >= 0");
    ValidationReport rep;
    rep.suite = std::string(suite);
    rep.seed = seed;
    const bool all = suite == "all";
    bool known = all;
    if (all || suite == "distributions") {
        detail::append_distribution_checks(rep.checks, seed, tol_scale);
        known = true;
    }
    if (all || suite == "spectral") {
        detail::append_spectral_checks(rep.checks, seed, tol_scale);
        known = true;
    }
    if (all || suite == "bounds") {
        detail::append_bounds_checks(rep.checks, seed, tol_scale);
        known = true;
    }
    if (all || suite == "estimators") {
        detail::append_estimator_checks(rep.checks, seed, tol_scale);
        known = true;
    }
    if (!known)
        throw std::invalid_argument("run_validation: unknown suite '" + std::string(suite) + "'");
    return rep;
}

}  // namespace bcrb
