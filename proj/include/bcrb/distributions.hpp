#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Core>

#include "bcrb/rng.hpp"

namespace bcrb {

inline constexpr double kPi = 3.14159265358979323846;

/// Student noise law in hierarchical form: e_i | gamma ~ N(0, sigma2/gamma)
/// with gamma ~ Gamma(nu/2, rate nu/2), so marginally e_i ~ S(0, sigma2, nu).
/// nu = +infinity is accepted as the exact Gaussian limit (gamma pinned at 1).
struct NoisePrior {
    double sigma2;
    double nu;

    NoisePrior(double sigma2_, double nu_) : sigma2(sigma2_), nu(nu_) {
        if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
            throw std::invalid_argument("NoisePrior: sigma2 must be positive and finite");
        if (std::isnan(nu) || !(nu > 0.0))
            throw std::invalid_argument("NoisePrior: nu must be positive");
    }

    bool is_gaussian_limit() const { return std::isinf(nu); }

    /// Marginal noise variance sigma_e^2 = sigma2 * nu / (nu - 2); finite only
    /// for nu > 2.
    double marginal_variance() const {
        if (is_gaussian_limit()) return sigma2;
        if (!(nu > 2.0)) throw std::domain_error("NoisePrior: marginal variance requires nu > 2");
        return sigma2 * nu / (nu - 2.0);
    }
};

/// Gaussian amplitude prior x ~ N(0, sigma_x2 I).
struct AmplitudePrior {
    double sigma_x2;

    explicit AmplitudePrior(double sigma_x2_) : sigma_x2(sigma_x2_) {
        if (!(sigma_x2 > 0.0) || !std::isfinite(sigma_x2))
            throw std::invalid_argument("AmplitudePrior: sigma_x2 must be positive and finite");
    }
};

/// Noise prior whose marginal variance realizes SNR = sigma_x2 / sigma_e^2
/// at the given degrees of freedom.
inline NoisePrior noise_prior_for_snr(const AmplitudePrior& ampl, double snr, double nu) {
    if (!(snr > 0.0) || !std::isfinite(snr))
        throw std::invalid_argument("noise_prior_for_snr: snr must be positive and finite");
    if (std::isinf(nu)) return NoisePrior(ampl.sigma_x2 / snr, nu);
    if (!(nu > 2.0)) throw std::domain_error("noise_prior_for_snr: requires nu > 2");
    return NoisePrior(ampl.sigma_x2 * (nu - 2.0) / (nu * snr), nu);
}

/// One draw of the precision hyper-parameter gamma ~ Gamma(nu/2, rate nu/2)
/// (unit mean, variance 2/nu). Returns exactly 1 in the Gaussian limit.
inline double sample_gamma_hyper(const NoisePrior& noise, RngEngine& rng) {
    if (noise.is_gaussian_limit()) return 1.0;
    std::gamma_distribution<double> g(noise.nu / 2.0, 2.0 / noise.nu);
    return g(rng);
}

/// n i.i.d. draws of e_i | gamma ~ N(0, sigma2/gamma).
inline Eigen::VectorXd sample_noise_conditional(const NoisePrior& noise, double gamma,
                                                Eigen::Index n, RngEngine& rng) {
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("sample_noise_conditional: gamma must be positive and finite");
    if (n < 1) throw std::invalid_argument("sample_noise_conditional: n must be >= 1");
    std::normal_distribution<double> normal(0.0, std::sqrt(noise.sigma2 / gamma));
    Eigen::VectorXd e(n);
    for (Eigen::Index i = 0; i < n; ++i) e[i] = normal(rng);
    return e;
}

/// n i.i.d. draws of the marginal Student law, generated through the
/// hierarchy with a fresh gamma per entry. This is the marginal-law sampler
/// used by distribution checks; the model sampler in linmodel.hpp shares one
/// gamma across a realization instead.
inline Eigen::VectorXd sample_student_noise(const NoisePrior& noise, Eigen::Index n,
                                            RngEngine& rng) {
    if (n < 1) throw std::invalid_argument("sample_student_noise: n must be >= 1");
    Eigen::VectorXd e(n);
    std::normal_distribution<double> normal(0.0, 1.0);
    if (noise.is_gaussian_limit()) {
        const double s = std::sqrt(noise.sigma2);
        for (Eigen::Index i = 0; i < n; ++i) e[i] = s * normal(rng);
        return e;
    }
    std::gamma_distribution<double> g(noise.nu / 2.0, 2.0 / noise.nu);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double gamma = g(rng);
        e[i] = std::sqrt(noise.sigma2 / gamma) * normal(rng);
    }
    return e;
}

/// Density of the non-standardized Student law S(mu, sigma2, nu), evaluated
/// through lgamma so large nu stays finite.
inline double student_pdf(double u, double mu, double sigma2, double nu) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw std::invalid_argument("student_pdf: sigma2 must be positive and finite");
    if (std::isnan(nu) || !(nu > 0.0) || std::isinf(nu))
        throw std::invalid_argument("student_pdf: nu must be positive and finite");
    const double z2 = (u - mu) * (u - mu) / (nu * sigma2);
    const double log_norm = std::lgamma((nu + 1.0) / 2.0) - std::lgamma(nu / 2.0) -
                            0.5 * std::log(kPi * nu * sigma2);
    return std::exp(log_norm - 0.5 * (nu + 1.0) * std::log1p(z2));
}

/// E[1/gamma^2] = nu^2 / ((nu - 2)(nu - 4)) for gamma ~ Gamma(nu/2, nu/2);
/// finite only for nu > 4. Returns 1 in the Gaussian limit.
inline double inv_gamma_second_moment(double nu) {
    if (std::isnan(nu) || !(nu > 4.0))
        throw std::domain_error("inv_gamma_second_moment: requires nu > 4");
    if (std::isinf(nu)) return 1.0;
    return nu * nu / ((nu - 2.0) * (nu - 4.0));
}

}  // namespace bcrb
