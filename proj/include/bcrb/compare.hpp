#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcrb/bounds_asymptotic.hpp"

namespace bcrb {

namespace detail {

inline void check_nu_above_2(double nu, const char* name) {
    if (std::isnan(nu) || !(nu > 2.0))
        throw std::domain_error(std::string(name) + " must be > 2 (inf allowed)");
}

/// nu/(nu - 2), continuously extended to 1 at nu = +infinity.
inline double nu_ratio(double nu) { return std::isinf(nu) ? 1.0 : nu / (nu - 2.0); }

}  // namespace detail

/// Two noise models compared at a common target SNR and common amplitude
/// prior. Either nu may be +infinity (exact Gaussian noise).
struct ComparisonSpec {
    double nu0;
    double nu1;
    double beta;
    double sigma_x2;
    std::vector<double> snr_grid;
};

struct ComparisonRow {
    double snr;
    double r0;
    double r1;
    double bcrb0;
    double bcrb1;
    double bcrb1_gaussian_limit;
};

struct ComparisonResult {
    std::vector<ComparisonRow> rows;
};

/// Effective parameter of model 1 at the SNR realized by model 0:
/// r1 = (nu1 (nu0-2)) / (nu0 (nu1-2)) r0, with the inf sentinel reducing to
/// r1 = r0 (nu0-2)/nu0. Identical degrees of freedom map r0 to itself
/// exactly.
inline double map_r_common_snr(double r0, double nu0, double nu1) {
    detail::check_nu_above_2(nu0, "nu0");
    detail::check_nu_above_2(nu1, "nu1");
    if (std::isnan(r0) || !(r0 >= 0.0))
        throw std::domain_error("map_r_common_snr: r0 must be >= 0");
    if (nu0 == nu1) return r0;
    return r0 * detail::nu_ratio(nu1) / detail::nu_ratio(nu0);
}

/// Gaussian-noise limit (nu1 -> inf) of the model-1 bound, parameterized by
/// the model-0 effective SNR: the bound at r = r0 (nu0-2)/nu0.
inline double bcrb_gaussian_limit(double r0, double nu0, double beta, double sigma_x2) {
    detail::check_nu_above_2(nu0, "nu0");
    if (std::isnan(r0) || !(r0 >= 0.0))
        throw std::domain_error("bcrb_gaussian_limit: r0 must be >= 0");
    const double r1 = r0 * 1.0 / detail::nu_ratio(nu0);
    return bcrb_x_asymptotic({r1, beta, sigma_x2}).value;
}

/// Bounds for both models over the grid. The snr_grid holds linear SNR
/// values, strictly positive and ascending. The Gaussian-limit column is
/// always filled; when nu1 is the inf sentinel it coincides bit-for-bit with
/// bcrb1.
inline ComparisonResult bcrb_pair(const ComparisonSpec& spec) {
    detail::check_nu_above_2(spec.nu0, "nu0");
    detail::check_nu_above_2(spec.nu1, "nu1");
    detail::check_beta(spec.beta);
    if (!(spec.sigma_x2 > 0.0) || !std::isfinite(spec.sigma_x2))
        throw std::domain_error("bcrb_pair: sigma_x2 must be positive and finite");
    if (spec.snr_grid.empty()) throw std::invalid_argument("bcrb_pair: empty snr grid");
    double prev = 0.0;
    for (double snr : spec.snr_grid) {
        if (std::isnan(snr) || !(snr > 0.0))
            throw std::invalid_argument("bcrb_pair: snr grid values must be positive");
        if (!(snr > prev)) throw std::invalid_argument("bcrb_pair: snr grid must be ascending");
        prev = snr;
    }
    ComparisonResult out;
    out.rows.reserve(spec.snr_grid.size());
    for (double snr : spec.snr_grid) {
        ComparisonRow row{};
        row.snr = snr;
        row.r0 = snr * detail::nu_ratio(spec.nu0);
        row.r1 = map_r_common_snr(row.r0, spec.nu0, spec.nu1);
        row.bcrb0 = bcrb_x_asymptotic({row.r0, spec.beta, spec.sigma_x2}).value;
        row.bcrb1 = bcrb_x_asymptotic({row.r1, spec.beta, spec.sigma_x2}).value;
        row.bcrb1_gaussian_limit = bcrb_gaussian_limit(row.r0, spec.nu0, spec.beta, spec.sigma_x2);
        out.rows.push_back(row);
    }
    return out;
}

}  // namespace bcrb
