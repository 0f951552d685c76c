#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>

#include <Eigen/Core>

#include "bcrb/distributions.hpp"
#include "bcrb/rng.hpp"

namespace bcrb {

/// Problem sizes of the linear model y = A x + e with A of size N x K.
/// The aspect ratio beta = K/N drives every asymptotic expression, so the
/// underdetermined regime K >= N is rejected outright.
struct ModelDims {
    int n_obs;
    int n_params;

    ModelDims(int n_obs_, int n_params_) : n_obs(n_obs_), n_params(n_params_) {
        if (n_obs < 1) throw std::invalid_argument("ModelDims: n_obs must be >= 1");
        if (n_params < 1) throw std::invalid_argument("ModelDims: n_params must be >= 1");
        if (n_params >= n_obs)
            throw std::invalid_argument("ModelDims: requires n_params < n_obs (beta < 1)");
    }

    double beta() const { return static_cast<double>(n_params) / static_cast<double>(n_obs); }
};

enum class MatrixEnsemble { gaussian, rademacher };

/// One realization of the hierarchical model. observations = design *
/// amplitudes + noise holds exactly at construction; gamma is the single
/// precision hyper-parameter shared by all noise entries of the realization.
struct Dataset {
    Eigen::MatrixXd design;
    Eigen::VectorXd amplitudes;
    double gamma = 1.0;
    Eigen::VectorXd noise;
    Eigen::VectorXd observations;
};

/// i.i.d. design matrix with zero-mean variance-1/N entries: Gaussian
/// N(0, 1/N) or symmetric Bernoulli +-1/sqrt(N). Column-major fill order.
inline Eigen::MatrixXd generate_matrix(const ModelDims& dims, MatrixEnsemble ensemble,
                                       RngEngine& rng) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(dims.n_obs));
    Eigen::MatrixXd a(dims.n_obs, dims.n_params);
    if (ensemble == MatrixEnsemble::gaussian) {
        std::normal_distribution<double> normal(0.0, scale);
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index i = 0; i < a.rows(); ++i) a(i, j) = normal(rng);
    } else {
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            for (Eigen::Index i = 0; i < a.rows(); ++i)
                a(i, j) = (rng() >> 63) ? scale : -scale;
    }
    return a;
}

/// Draws amplitudes, gamma and noise from their per-component streams of the
/// master seed (see rng.hpp) and assembles observations around the supplied
/// design. Used directly in fixed-design Monte Carlo.
inline Dataset synthesize_given_design(Eigen::MatrixXd design, const AmplitudePrior& ampl,
                                       const NoisePrior& noise, std::uint64_t seed) {
    if (!noise.is_gaussian_limit() && !(noise.nu > 2.0))
        throw std::domain_error("synthesize: noise prior requires nu > 2");
    Dataset d;
    d.design = std::move(design);
    {
        auto rng = make_engine(seed, stream::amplitudes);
        std::normal_distribution<double> normal(0.0, std::sqrt(ampl.sigma_x2));
        d.amplitudes.resize(d.design.cols());
        for (Eigen::Index i = 0; i < d.amplitudes.size(); ++i) d.amplitudes[i] = normal(rng);
    }
    {
        auto rng = make_engine(seed, stream::gamma);
        d.gamma = sample_gamma_hyper(noise, rng);
    }
    {
        auto rng = make_engine(seed, stream::noise);
        d.noise = sample_noise_conditional(noise, d.gamma, d.design.rows(), rng);
    }
    d.observations = d.design * d.amplitudes + d.noise;
    return d;
}

/// Full synthesis: the design comes from the matrix stream of the same seed.
inline Dataset synthesize(const ModelDims& dims, const AmplitudePrior& ampl,
                          const NoisePrior& noise, MatrixEnsemble ensemble, std::uint64_t seed) {
    auto rng = make_engine(seed, stream::matrix);
    return synthesize_given_design(generate_matrix(dims, ensemble, rng), ampl, noise, seed);
}

}  // namespace bcrb
