#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bcrb/bounds_exact.hpp"
#include "bcrb/linmodel.hpp"
#include "bcrb/parallel.hpp"
#include "bcrb/rng.hpp"
#include "bcrb/stats.hpp"

namespace bcrb {

enum class EstimatorKind { lmmse, genie };

namespace detail {

/// Posterior-mean solve shared by both estimators for effective noise
/// variance v: (A^T A + (v/sigma_x2) I)^{-1} A^T y, the K x K form of
/// sigma_x2 A^T (sigma_x2 A A^T + v I)^{-1} y.
inline Eigen::VectorXd linear_mmse_kxk(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                       double sigma_x2, double noise_var) {
    check_design(design, "linear_mmse");
    if (y.size() != design.rows())
        throw std::invalid_argument("linear_mmse: observation length must match design rows");
    if (!y.allFinite())
        throw std::invalid_argument("linear_mmse: observations have non-finite entries");
    Eigen::MatrixXd m = gram(design);
    m.diagonal().array() += noise_var / sigma_x2;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("linear_mmse: LDLT factorization failed (rcond " +
                                 std::to_string(ldlt.rcond()) + ")");
    const Eigen::VectorXd rhs = design.transpose() * y;
    const Eigen::VectorXd x = ldlt.solve(rhs);
    const double scale = std::max(rhs.norm(), std::numeric_limits<double>::min());
    if (!((m.selfadjointView<Eigen::Lower>() * x - rhs).norm() <= 1e-8 * scale))
        throw std::runtime_error("linear_mmse: solve residual too large (rcond " +
                                 std::to_string(ldlt.rcond()) + ")");
    return x;
}

}  // namespace detail

/// gamma-blind LMMSE against the marginal noise variance sigma_e^2.
inline Eigen::VectorXd lmmse_estimate(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                      const AmplitudePrior& ampl, const NoisePrior& noise) {
    return detail::linear_mmse_kxk(design, y, ampl.sigma_x2, noise.marginal_variance());
}

/// N x N reference form sigma_x2 A^T (sigma_x2 A A^T + sigma_e^2 I)^{-1} y.
/// Agrees with lmmse_estimate to roundoff; kept public for cross-checking.
inline Eigen::VectorXd lmmse_estimate_direct(const Eigen::MatrixXd& design,
                                             const Eigen::VectorXd& y,
                                             const AmplitudePrior& ampl,
                                             const NoisePrior& noise) {
    detail::check_design(design, "lmmse_estimate_direct");
    if (y.size() != design.rows())
        throw std::invalid_argument("lmmse_estimate_direct: observation length mismatch");
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(design.rows(), design.rows());
    m.selfadjointView<Eigen::Lower>().rankUpdate(design, ampl.sigma_x2);
    m = m.selfadjointView<Eigen::Lower>();
    m.diagonal().array() += noise.marginal_variance();
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    if (ldlt.info() != Eigen::Success)
        throw std::runtime_error("lmmse_estimate_direct: LDLT factorization failed");
    return ampl.sigma_x2 * (design.transpose() * ldlt.solve(y));
}

/// Conditional MMSE given the realized gamma (side information used as a
/// diagnostic reference; attains the conditional-Gaussian optimum).
inline Eigen::VectorXd genie_mmse_estimate(const Eigen::MatrixXd& design, const Eigen::VectorXd& y,
                                           double gamma, const AmplitudePrior& ampl,
                                           const NoisePrior& noise) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("genie_mmse_estimate: gamma must be positive and finite");
    return detail::linear_mmse_kxk(design, y, ampl.sigma_x2, noise.sigma2 / gamma);
}

struct McResult {
    std::int64_t trials = 0;
    double mse_x = 0.0;
    /// Standard error of mse_x; NaN with std_err_ok = false when trials < 2.
    double std_err = std::numeric_limits<double>::quiet_NaN();
    bool std_err_ok = false;
    /// Exact bound averaged over the realized designs.
    double bound_x = 0.0;
    double margin = 0.0;
};

/// Bayesian MSE of the chosen estimator by Monte Carlo over trials
/// independent realizations, against the matching average exact bound.
/// Trial t draws everything from the derived seed mix_seed(trial root, t),
/// so results are reproducible and independent of thread count; with
/// fixed_design the design is drawn once from the master matrix stream and
/// only amplitudes, gamma and noise resample.
inline McResult monte_carlo_mse(const ModelDims& dims, const AmplitudePrior& ampl,
                                const NoisePrior& noise, MatrixEnsemble ensemble,
                                EstimatorKind estimator, std::int64_t trials, std::uint64_t seed,
                                bool fixed_design = false) {
    if (trials < 1) throw std::invalid_argument("monte_carlo_mse: trials must be >= 1");
    std::optional<Eigen::MatrixXd> shared;
    double shared_bound = 0.0;
    if (fixed_design) {
        auto rng = make_engine(seed, stream::matrix);
        shared = generate_matrix(dims, ensemble, rng);
        shared_bound = bcrb_x_exact(*shared, ampl, noise);
    }
    const std::uint64_t trial_root = mix_seed(seed, stream::trials);
    std::vector<double> errs(static_cast<std::size_t>(trials));
    std::vector<double> bounds(static_cast<std::size_t>(trials));
    parallel_for(trials, [&](std::int64_t t) {
        const std::uint64_t ts = mix_seed(trial_root, static_cast<std::uint64_t>(t));
        Dataset d;
        if (fixed_design) {
            d = synthesize_given_design(*shared, ampl, noise, ts);
            bounds[static_cast<std::size_t>(t)] = shared_bound;
        } else {
            d = synthesize(dims, ampl, noise, ensemble, ts);
            bounds[static_cast<std::size_t>(t)] = bcrb_x_exact(d.design, ampl, noise);
        }
        const Eigen::VectorXd xhat =
            estimator == EstimatorKind::lmmse
                ? lmmse_estimate(d.design, d.observations, ampl, noise)
                : genie_mmse_estimate(d.design, d.observations, d.gamma, ampl, noise);
        errs[static_cast<std::size_t>(t)] =
            (d.amplitudes - xhat).squaredNorm() / static_cast<double>(dims.n_params);
    });
    McResult out;
    out.trials = trials;
    out.mse_x = mean(errs);
    out.bound_x = mean(bounds);
    if (trials >= 2) {
        out.std_err = sample_std(errs) / std::sqrt(static_cast<double>(trials));
        out.std_err_ok = true;
    }
    out.margin = out.mse_x - out.bound_x;
    return out;
}

}  // namespace bcrb
