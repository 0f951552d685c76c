#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcrb/bounds_asymptotic.hpp"
#include "bcrb/bounds_exact.hpp"
#include "bcrb/compare.hpp"
#include "bcrb/linmodel.hpp"
#include "bcrb/parallel.hpp"
#include "bcrb/stats.hpp"

namespace bcrb {

/// Inclusive dB grid START:STOP:STEP.
struct SnrGridDb {
    double start = -10.0;
    double stop = 30.0;
    double step = 0.5;

    std::vector<double> points_db() const {
        if (std::isnan(step) || !(step > 0.0))
            throw std::invalid_argument("snr-db grid: step must be > 0");
        if (std::isnan(start) || std::isnan(stop) || !(start <= stop))
            throw std::invalid_argument("snr-db grid: start must be <= stop");
        const auto count =
            static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9));
        std::vector<double> pts;
        pts.reserve(static_cast<std::size_t>(count + 1));
        for (std::int64_t i = 0; i <= count; ++i) pts.push_back(start + static_cast<double>(i) * step);
        return pts;
    }
};

inline double snr_from_db(double db) { return std::pow(10.0, db / 10.0); }

enum class OutputFormat { csv, json };

/// Amplitude-bound sweep over an SNR grid at fixed sizes: the exact bound
/// averaged over design draws next to the closed-form limit and its three
/// regime approximations.
struct SweepConfig {
    int n_obs = 100;
    int n_params = 10;
    double sigma_x2 = 1.0;
    double nu = 6.0;
    SnrGridDb snr_db{};
    MatrixEnsemble ensemble = MatrixEnsemble::gaussian;
    int matrix_seeds = 100;
    std::uint64_t seed = kDefaultSeed;
};

struct SweepRow {
    double snr_db;
    double r;
    double bcrb_exact_mean;
    double bcrb_exact_std;
    double bcrb_asymptotic;
    double bcrb_small_beta;
    double bcrb_small_r;
    bool small_r_valid;
    double bcrb_large_r;
};

inline std::vector<SweepRow> compute_sweep(const SweepConfig& cfg) {
    if (cfg.matrix_seeds < 1)
        throw std::invalid_argument("compute_sweep: matrix seeds must be >= 1");
    if (std::isnan(cfg.nu) || !(cfg.nu > 2.0))
        throw std::domain_error("compute_sweep: nu must be > 2 for the amplitude sweep");
    const ModelDims dims(cfg.n_obs, cfg.n_params);
    const AmplitudePrior ampl(cfg.sigma_x2);
    const double beta = dims.beta();
    const auto dbs = cfg.snr_db.points_db();

    std::vector<Eigen::MatrixXd> designs(static_cast<std::size_t>(cfg.matrix_seeds));
    parallel_for(cfg.matrix_seeds, [&](std::int64_t s) {
        auto rng = make_engine(mix_seed(cfg.seed, static_cast<std::uint64_t>(s)), stream::matrix);
        designs[static_cast<std::size_t>(s)] = generate_matrix(dims, cfg.ensemble, rng);
    });

    std::vector<SweepRow> rows(dbs.size());
    parallel_for(static_cast<std::int64_t>(dbs.size()), [&](std::int64_t p) {
        const double db = dbs[static_cast<std::size_t>(p)];
        const NoisePrior noise = noise_prior_for_snr(ampl, snr_from_db(db), cfg.nu);
        const EffectiveSnr es = effective_snr(ampl, noise);
        std::vector<double> vals(designs.size());
        for (std::size_t s = 0; s < designs.size(); ++s)
            vals[s] = bcrb_x_exact(designs[s], ampl, noise);
        SweepRow row{};
        row.snr_db = db;
        row.r = es.r;
        row.bcrb_exact_mean = mean(vals);
        row.bcrb_exact_std =
            vals.size() >= 2 ? sample_std(vals) : std::numeric_limits<double>::quiet_NaN();
        row.bcrb_asymptotic = bcrb_x_asymptotic({es.r, beta, cfg.sigma_x2, cfg.nu}).value;
        row.bcrb_small_beta = bcrb_small_beta(es.r, cfg.sigma_x2);
        const SmallRBound sr = bcrb_small_r(es.r, cfg.sigma_x2, beta, noise);
        row.bcrb_small_r = sr.value;
        row.small_r_valid = sr.valid;
        row.bcrb_large_r = bcrb_large_r(es.r, beta, cfg.sigma_x2);
        rows[static_cast<std::size_t>(p)] = row;
    });
    return rows;
}

/// Common-SNR comparison of two degrees of freedom at a fixed aspect ratio,
/// with the Gaussian-limit reference for model 1.
struct CompareConfig {
    double nu0 = 6.0;
    double nu1 = 100.0;
    double beta = 0.1;
    double sigma_x2 = 1.0;
    SnrGridDb snr_db{};
};

struct CompareRow {
    double snr_db;
    double r0;
    double r1;
    double bcrb0;
    double bcrb1;
    double bcrb1_inf;
};

inline std::vector<CompareRow> compute_compare(const CompareConfig& cfg) {
    const auto dbs = cfg.snr_db.points_db();
    ComparisonSpec spec{cfg.nu0, cfg.nu1, cfg.beta, cfg.sigma_x2, {}};
    spec.snr_grid.reserve(dbs.size());
    for (double db : dbs) spec.snr_grid.push_back(snr_from_db(db));
    const ComparisonResult res = bcrb_pair(spec);
    std::vector<CompareRow> rows(dbs.size());
    for (std::size_t i = 0; i < dbs.size(); ++i) {
        const ComparisonRow& r = res.rows[i];
        rows[i] = {dbs[i], r.r0, r.r1, r.bcrb0, r.bcrb1, r.bcrb1_gaussian_limit};
    }
    return rows;
}

}  // namespace bcrb
