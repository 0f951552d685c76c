#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "bcrb/distributions.hpp"

namespace bcrb {

namespace detail {

/// A^T A with exact numerical symmetry: lower-triangular rank update, then
/// mirror. Plain gemm can differ by ulps across the diagonal.
inline Eigen::MatrixXd gram(const Eigen::MatrixXd& a) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(a.cols(), a.cols());
    w.selfadjointView<Eigen::Lower>().rankUpdate(a.transpose());
    return w.selfadjointView<Eigen::Lower>();
}

inline void check_design(const Eigen::MatrixXd& design, const char* where) {
    if (design.rows() < 1 || design.cols() < 1)
        throw std::invalid_argument(std::string(where) + ": design must be non-empty");
    if (!design.allFinite())
        throw std::invalid_argument(std::string(where) + ": design has non-finite entries");
}

}  // namespace detail

/// SNR against the marginal noise variance, and the effective parameter
/// r = SNR * nu/(nu-2) that every bound expression depends on. The nu factors
/// cancel so r = sigma_x2 / sigma2 exactly.
struct EffectiveSnr {
    double snr;
    double r;
};

inline EffectiveSnr effective_snr(const AmplitudePrior& ampl, const NoisePrior& noise) {
    return {ampl.sigma_x2 / noise.marginal_variance(), ampl.sigma_x2 / noise.sigma2};
}

/// Amplitude block of the Bayesian information matrix, with the precision
/// hyper-parameter integrated out (E[gamma] = 1):
/// J_xx = (1/sigma2) A^T A + (1/sigma_x2) I.
inline Eigen::MatrixXd bim_xx(const Eigen::MatrixXd& design, const AmplitudePrior& ampl,
                              const NoisePrior& noise) {
    detail::check_design(design, "bim_xx");
    if (!noise.is_gaussian_limit() && !(noise.nu > 2.0))
        throw std::domain_error("bim_xx: requires nu > 2");
    Eigen::MatrixXd j = detail::gram(design) / noise.sigma2;
    j.diagonal().array() += 1.0 / ampl.sigma_x2;
    return j;
}

/// Scalar hyper-parameter block
/// J_gamma = N nu^2 / (2 (nu-2)(nu-4)) + nu^2 / (2 (nu-4)); finite only for
/// nu > 4, diverging in the Gaussian limit (gamma becomes deterministic).
inline double bim_gamma(int n_obs, const NoisePrior& noise) {
    if (n_obs < 0) throw std::invalid_argument("bim_gamma: n_obs must be >= 0");
    if (std::isnan(noise.nu) || !(noise.nu > 4.0))
        throw std::domain_error("bim_gamma: requires nu > 4");
    if (noise.is_gaussian_limit()) return std::numeric_limits<double>::infinity();
    const double nu = noise.nu;
    const double data = static_cast<double>(n_obs) * nu * nu / (2.0 * (nu - 2.0) * (nu - 4.0));
    const double prior = nu * nu / (2.0 * (nu - 4.0));
    return data + prior;
}

struct BimBlocks {
    Eigen::MatrixXd j_xx;
    double j_gamma;
};

/// Both diagonal blocks of the BIM; the cross block is zero by symmetry of
/// the conditional noise law, so these determine the full matrix.
inline BimBlocks bim_blocks(const Eigen::MatrixXd& design, const AmplitudePrior& ampl,
                            const NoisePrior& noise) {
    return {bim_xx(design, ampl, noise), bim_gamma(static_cast<int>(design.rows()), noise)};
}

/// Per-component amplitude bound (1/K) Tr[J_xx^{-1}] =
/// (sigma_x2/K) Tr[(r A^T A + I)^{-1}], via a pivoted LDLT solve with a
/// residual check and an eigendecomposition fallback if the factorization
/// degrades.
inline double bcrb_x_exact(const Eigen::MatrixXd& design, const AmplitudePrior& ampl,
                           const NoisePrior& noise) {
    detail::check_design(design, "bcrb_x_exact");
    const double r = effective_snr(ampl, noise).r;
    const Eigen::Index k = design.cols();
    Eigen::MatrixXd m = detail::gram(design);
    m *= r;
    m.diagonal().array() += 1.0;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(k, k);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    if (ldlt.info() == Eigen::Success) {
        const Eigen::MatrixXd inv = ldlt.solve(eye);
        const double resid = (m.selfadjointView<Eigen::Lower>() * inv - eye).norm() /
                             std::sqrt(static_cast<double>(k));
        if (resid <= 1e-10)
            return ampl.sigma_x2 * inv.trace() / static_cast<double>(k);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("bcrb_x_exact: eigendecomposition failed");
    return ampl.sigma_x2 * es.eigenvalues().cwiseInverse().mean();
}

/// Same bound from precomputed eigenvalues of A^T A:
/// (sigma_x2/K) sum_i 1/(r lambda_i + 1).
inline double bcrb_x_from_eigenvalues(const Eigen::VectorXd& gram_eigenvalues, double r,
                                      double sigma_x2) {
    if (gram_eigenvalues.size() < 1)
        throw std::invalid_argument("bcrb_x_from_eigenvalues: empty spectrum");
    if (!(r >= 0.0)) throw std::domain_error("bcrb_x_from_eigenvalues: r must be >= 0");
    double acc = 0.0;
    for (Eigen::Index i = 0; i < gram_eigenvalues.size(); ++i) {
        const double lam = gram_eigenvalues[i];
        if (lam < 0.0 && r * lam + 1.0 <= 0.0)
            throw std::domain_error("bcrb_x_from_eigenvalues: spectrum not positive semidefinite");
        acc += 1.0 / (r * lam + 1.0);
    }
    return sigma_x2 * acc / static_cast<double>(gram_eigenvalues.size());
}

/// Hyper-parameter bound 1/J_gamma; zero in the Gaussian limit.
inline double bcrb_gamma(int n_obs, const NoisePrior& noise) {
    return 1.0 / bim_gamma(n_obs, noise);
}

struct BcrbExact {
    double bcrb_x;
    double bcrb_gamma;
};

inline BcrbExact bcrb_exact(const Eigen::MatrixXd& design, const AmplitudePrior& ampl,
                            const NoisePrior& noise) {
    return {bcrb_x_exact(design, ampl, noise),
            bcrb_gamma(static_cast<int>(design.rows()), noise)};
}

}  // namespace bcrb
