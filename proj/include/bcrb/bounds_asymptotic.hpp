#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>

#include "bcrb/distributions.hpp"

namespace bcrb {

namespace detail {

inline void check_beta(double beta) {
    if (std::isnan(beta) || !(beta > 0.0) || !(beta < 1.0))
        throw std::domain_error("beta must lie in (0, 1)");
}

inline void check_r_nonneg(double r) {
    if (std::isnan(r) || !(r >= 0.0)) throw std::domain_error("r must be >= 0");
}

}  // namespace detail

/// f(r, beta) = (sqrt(r (1+sqrt(beta))^2 + 1) - sqrt(r (1-sqrt(beta))^2 + 1))^2.
/// The radicals agree to leading order at large r, so the difference is
/// evaluated from the exact identity a^2 - b^2 = 4 r sqrt(beta) as
/// 4 r sqrt(beta) / (a + b), which loses no precision anywhere in the domain.
inline double f_func(double r, double beta) {
    detail::check_beta(beta);
    detail::check_r_nonneg(r);
    const double sb = std::sqrt(beta);
    const double a = std::sqrt(r * (1.0 + sb) * (1.0 + sb) + 1.0);
    const double b = std::sqrt(r * (1.0 - sb) * (1.0 - sb) + 1.0);
    const double diff = 4.0 * r * sb / (a + b);
    return diff * diff;
}

/// Validity guard of the small-r expansion: the Neumann condition
/// r (1+sqrt(beta))^2 < 1, tightened by SNR < (nu-2)/(4 nu) (equivalently
/// r < 1/4) when the degrees of freedom are supplied.
inline bool small_r_valid(double r, double beta, std::optional<double> nu = std::nullopt) {
    detail::check_beta(beta);
    detail::check_r_nonneg(r);
    const double sb = std::sqrt(beta);
    bool ok = r * (1.0 + sb) * (1.0 + sb) < 1.0;
    if (ok && nu.has_value()) {
        if (std::isinf(*nu)) {
            ok = r < 0.25;
        } else {
            if (!(*nu > 2.0)) throw std::domain_error("small_r_valid: nu must be > 2");
            const double snr = r * (*nu - 2.0) / *nu;
            ok = snr < (*nu - 2.0) / (4.0 * *nu);
        }
    }
    return ok;
}

struct AsymptoticParams {
    double r;
    double beta;
    double sigma_x2 = 1.0;
    std::optional<double> nu = std::nullopt;
};

struct BcrbAsymptotic {
    double value;
    double f_value;
    bool small_beta_ok;
    bool small_r_ok;
    bool large_r_ok;
};

/// Large-system amplitude bound sigma_x2 (1 - f(r, beta) / (4 r beta)) with
/// the advisory regime flags. r = 0 returns the prior bound sigma_x2.
inline BcrbAsymptotic bcrb_x_asymptotic(const AsymptoticParams& p) {
    detail::check_beta(p.beta);
    detail::check_r_nonneg(p.r);
    if (!(p.sigma_x2 > 0.0) || !std::isfinite(p.sigma_x2))
        throw std::domain_error("bcrb_x_asymptotic: sigma_x2 must be positive and finite");
    BcrbAsymptotic out{};
    out.f_value = f_func(p.r, p.beta);
    out.value = p.r == 0.0 ? p.sigma_x2
                           : p.sigma_x2 * (1.0 - out.f_value / (4.0 * p.r * p.beta));
    out.small_beta_ok = p.beta < 0.15;
    out.small_r_ok = small_r_valid(p.r, p.beta, p.nu);
    out.large_r_ok = p.r > 10.0 / ((1.0 - p.beta) * (1.0 - p.beta));
    return out;
}

/// Small-aspect-ratio approximation sigma_x2 / (r + 1).
inline double bcrb_small_beta(double r, double sigma_x2) {
    detail::check_r_nonneg(r);
    return sigma_x2 / (r + 1.0);
}

struct SmallRBound {
    double value;
    bool valid;
};

/// Neumann-series approximation sigma_x2 (1 - r). The value is always
/// returned; the flag marks whether the expansion is trustworthy here.
inline SmallRBound bcrb_small_r(double r, double sigma_x2, double beta,
                                const std::optional<NoisePrior>& noise = std::nullopt) {
    std::optional<double> nu;
    if (noise.has_value()) nu = noise->nu;
    return {sigma_x2 * (1.0 - r), small_r_valid(r, beta, nu)};
}

/// High-SNR approximation (sigma_x2/r) (1/(1-beta) - (1/r) / (1-beta)^3).
inline double bcrb_large_r(double r, double beta, double sigma_x2) {
    detail::check_beta(beta);
    if (std::isnan(r) || !(r > 0.0)) throw std::domain_error("bcrb_large_r: r must be > 0");
    const double omb = 1.0 - beta;
    return sigma_x2 / r * (1.0 / omb - 1.0 / (r * omb * omb * omb));
}

/// Marchenko-Pastur limits for variance-1/N i.i.d. designs:
/// (1/K) Tr[(A^T A)^{-1}] -> 1/(1-beta).
inline double mp_trace_inverse(double beta) {
    detail::check_beta(beta);
    return 1.0 / (1.0 - beta);
}

/// (1/K) Tr[(A^T A)^{-2}] -> 1/(1-beta)^3.
inline double mp_trace_inverse_sq(double beta) {
    detail::check_beta(beta);
    const double omb = 1.0 - beta;
    return 1.0 / (omb * omb * omb);
}

/// lambda_max(A^T A) -> (1 + sqrt(beta))^2.
inline double mp_lambda_max(double beta) {
    detail::check_beta(beta);
    const double sb = std::sqrt(beta);
    return (1.0 + sb) * (1.0 + sb);
}

}  // namespace bcrb
