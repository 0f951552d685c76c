#include <algorithm>
#include <cctype>
#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <bcrb/bcrb.hpp>

namespace {

double parse_strict_double(const std::string& text, const std::string& flag) {
    if (text.empty()) throw std::invalid_argument(flag + ": empty value");
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size())
        throw std::invalid_argument(flag + ": cannot parse '" + text + "'");
    return v;
}

/// Degrees of freedom: a number, or "inf" for the Gaussian limit.
double parse_nu(const std::string& text, const std::string& flag) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
    return parse_strict_double(text, flag);
}

/// "START:STOP:STEP" or a single "VALUE".
bcrb::SnrGridDb parse_snr_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.size() == 1) {
        const double v = parse_strict_double(parts[0], "snr-db");
        return {v, v, 1.0};
    }
    if (parts.size() != 3)
        throw std::invalid_argument("snr-db: expected START:STOP:STEP or a single value");
    return {parse_strict_double(parts[0], "snr-db start"),
            parse_strict_double(parts[1], "snr-db stop"),
            parse_strict_double(parts[2], "snr-db step")};
}

bcrb::MatrixEnsemble parse_ensemble(const std::string& text) {
    if (text == "gaussian") return bcrb::MatrixEnsemble::gaussian;
    if (text == "rademacher") return bcrb::MatrixEnsemble::rademacher;
    throw std::invalid_argument("ensemble: expected 'gaussian' or 'rademacher'");
}

std::string render_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

struct SweepArgs {
    int n = 100;
    int k = 10;
    double sigma_x2 = 1.0;
    std::string nu = "6";
    std::string snr_db = "-10:30:0.5";
    std::string ensemble = "gaussian";
    int seeds = 100;
    std::uint64_t seed = bcrb::kDefaultSeed;
    std::string out = "-";
    std::string format = "csv";
};

int run_sweep(const SweepArgs& a) {
    bcrb::SweepConfig cfg;
    cfg.n_obs = a.n;
    cfg.n_params = a.k;
    cfg.sigma_x2 = a.sigma_x2;
    cfg.nu = parse_nu(a.nu, "nu");
    cfg.snr_db = parse_snr_grid(a.snr_db);
    cfg.ensemble = parse_ensemble(a.ensemble);
    cfg.matrix_seeds = a.seeds;
    cfg.seed = a.seed;
    const auto rows = bcrb::compute_sweep(cfg);
    bcrb::write_text(a.out, a.format == "json" ? render_json(bcrb::sweep_json(rows))
                                               : bcrb::sweep_csv(rows));
    return 0;
}

struct CompareArgs {
    int n = 100;
    int k = 10;
    double sigma_x2 = 1.0;
    std::string nu0 = "6";
    std::string nu1 = "100";
    std::string snr_db = "-10:30:0.5";
    std::string out = "-";
    std::string format = "csv";
};

int run_compare(const CompareArgs& a) {
    bcrb::CompareConfig cfg;
    cfg.nu0 = parse_nu(a.nu0, "nu");
    cfg.nu1 = parse_nu(a.nu1, "nu1");
    cfg.beta = bcrb::ModelDims(a.n, a.k).beta();
    cfg.sigma_x2 = a.sigma_x2;
    cfg.snr_db = parse_snr_grid(a.snr_db);
    const auto rows = bcrb::compute_compare(cfg);
    bcrb::write_text(a.out, a.format == "json" ? render_json(bcrb::compare_json(rows))
                                               : bcrb::compare_csv(rows));
    return 0;
}

struct McArgs {
    int n = 100;
    int k = 10;
    double sigma_x2 = 1.0;
    std::string nu = "6";
    std::string snr_db = "0";
    double sigma2 = 0.0;
    double sigma_e2 = 0.0;
    bool sigma2_given = false;
    bool sigma_e2_given = false;
    bool snr_given = false;
    std::string ensemble = "gaussian";
    std::string estimator = "lmmse";
    std::int64_t trials = 10000;
    std::uint64_t seed = bcrb::kDefaultSeed;
    bool fixed_a = false;
    std::string dump_dataset;
    std::string out = "-";
    std::string format = "csv";
};

int run_mc(const McArgs& a) {
    const bcrb::ModelDims dims(a.n, a.k);
    const bcrb::AmplitudePrior ampl(a.sigma_x2);
    const double nu = parse_nu(a.nu, "nu");
    if (a.snr_given && (a.sigma2_given || a.sigma_e2_given))
        throw std::invalid_argument("snr-db cannot be combined with sigma2 or sigma-e2");
    auto make_noise = [&]() -> bcrb::NoisePrior {
        if (a.sigma2_given) return {a.sigma2, nu};
        if (a.sigma_e2_given) {
            if (!(a.sigma_e2 > 0.0))
                throw std::invalid_argument("sigma-e2 must be positive");
            if (std::isinf(nu)) return {a.sigma_e2, nu};
            if (!(nu > 2.0))
                throw std::domain_error("nu must be > 2 to target a marginal variance sigma-e2");
            return {a.sigma_e2 * (nu - 2.0) / nu, nu};
        }
        const double snr_db = parse_strict_double(a.snr_db, "snr-db");
        return bcrb::noise_prior_for_snr(ampl, bcrb::snr_from_db(snr_db), nu);
    };
    const bcrb::NoisePrior noise = make_noise();
    const bcrb::MatrixEnsemble ensemble = parse_ensemble(a.ensemble);
    bcrb::EstimatorKind kind;
    if (a.estimator == "lmmse")
        kind = bcrb::EstimatorKind::lmmse;
    else if (a.estimator == "genie")
        kind = bcrb::EstimatorKind::genie;
    else
        throw std::invalid_argument("estimator: expected 'lmmse' or 'genie'");
    if (!a.dump_dataset.empty()) {
        const std::uint64_t ts = bcrb::mix_seed(bcrb::mix_seed(a.seed, bcrb::stream::trials), 0);
        bcrb::Dataset d;
        if (a.fixed_a) {
            auto rng = bcrb::make_engine(a.seed, bcrb::stream::matrix);
            d = bcrb::synthesize_given_design(bcrb::generate_matrix(dims, ensemble, rng), ampl,
                                              noise, ts);
        } else {
            d = bcrb::synthesize(dims, ampl, noise, ensemble, ts);
        }
        bcrb::dump_dataset_csv(a.dump_dataset, d);
    }
    const bcrb::McResult res =
        bcrb::monte_carlo_mse(dims, ampl, noise, ensemble, kind, a.trials, a.seed, a.fixed_a);
    bcrb::write_text(a.out, a.format == "json" ? render_json(bcrb::mc_json(res))
                                               : bcrb::mc_csv(res));
    return 0;
}

struct ValidateArgs {
    std::string suite = "all";
    std::uint64_t seed = bcrb::kDefaultSeed;
    double tol_scale = 1.0;
    std::string out = "-";
};

int run_validate(const ValidateArgs& a) {
    const bcrb::ValidationReport rep = bcrb::run_validation(a.suite, a.seed, a.tol_scale);
    bcrb::write_text(a.out, render_json(bcrb::validation_report_json(rep)));
    if (!rep.all_pass()) {
        std::cerr << "validation failed: " << a.suite << " suite has failing checks\n";
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bayesian bounds for the linear model with Student noise"};
    app.require_subcommand(1);

    SweepArgs sweep;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Exact and asymptotic amplitude bounds over an SNR grid");
    sweep_cmd->add_option("--n", sweep.n, "Observations N");
    sweep_cmd->add_option("--k", sweep.k, "Parameters K");
    sweep_cmd->add_option("--sigma-x2", sweep.sigma_x2, "Amplitude prior variance");
    sweep_cmd->add_option("--nu", sweep.nu, "Degrees of freedom (> 2, or 'inf')");
    sweep_cmd->add_option("--snr-db", sweep.snr_db, "SNR grid START:STOP:STEP in dB");
    sweep_cmd->add_option("--ensemble", sweep.ensemble, "Design ensemble")
        ->check(CLI::IsMember({"gaussian", "rademacher"}));
    sweep_cmd->add_option("--seeds", sweep.seeds, "Design draws averaged per grid point");
    sweep_cmd->add_option("--seed", sweep.seed, "Master seed");
    sweep_cmd->add_option("--out", sweep.out, "Output path ('-' for stdout)");
    sweep_cmd->add_option("--format", sweep.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    CompareArgs cmp;
    CLI::App* compare_cmd = app.add_subcommand(
        "compare", "Two degrees of freedom at a common target SNR");
    compare_cmd->add_option("--n", cmp.n, "Observations N (sets beta = K/N)");
    compare_cmd->add_option("--k", cmp.k, "Parameters K");
    compare_cmd->add_option("--sigma-x2", cmp.sigma_x2, "Amplitude prior variance");
    compare_cmd->add_option("--nu", cmp.nu0, "Model 0 degrees of freedom (> 2, or 'inf')");
    compare_cmd->add_option("--nu1", cmp.nu1, "Model 1 degrees of freedom (> 2, or 'inf')");
    compare_cmd->add_option("--snr-db", cmp.snr_db, "SNR grid START:STOP:STEP in dB");
    compare_cmd->add_option("--out", cmp.out, "Output path ('-' for stdout)");
    compare_cmd->add_option("--format", cmp.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    McArgs mc;
    CLI::App* mc_cmd = app.add_subcommand(
        "mc", "Monte Carlo estimator MSE against the exact bound");
    mc_cmd->add_option("--n", mc.n, "Observations N");
    mc_cmd->add_option("--k", mc.k, "Parameters K");
    mc_cmd->add_option("--sigma-x2", mc.sigma_x2, "Amplitude prior variance");
    mc_cmd->add_option("--nu", mc.nu, "Degrees of freedom (> 2, or 'inf')");
    CLI::Option* mc_snr = mc_cmd->add_option("--snr-db", mc.snr_db, "Target SNR in dB");
    CLI::Option* mc_s2 = mc_cmd->add_option("--sigma2", mc.sigma2, "Conditional noise variance");
    CLI::Option* mc_se2 =
        mc_cmd->add_option("--sigma-e2", mc.sigma_e2, "Marginal noise variance");
    mc_s2->excludes(mc_se2);
    mc_cmd->add_option("--ensemble", mc.ensemble, "Design ensemble")
        ->check(CLI::IsMember({"gaussian", "rademacher"}));
    mc_cmd->add_option("--estimator", mc.estimator, "Estimator")
        ->check(CLI::IsMember({"lmmse", "genie"}));
    mc_cmd->add_option("--trials", mc.trials, "Monte Carlo trials");
    mc_cmd->add_option("--seed", mc.seed, "Master seed");
    mc_cmd->add_flag("--fixed-a", mc.fixed_a, "Hold one design fixed across trials");
    mc_cmd->add_option("--dump-dataset", mc.dump_dataset,
                       "Write the first trial's realization into this directory");
    mc_cmd->add_option("--out", mc.out, "Output path ('-' for stdout)");
    mc_cmd->add_option("--format", mc.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));

    ValidateArgs val;
    CLI::App* validate_cmd = app.add_subcommand("validate", "Built-in self-check suites");
    validate_cmd->add_option("--suite", val.suite,
                             "distributions | spectral | bounds | estimators | all");
    validate_cmd->add_option("--seed", val.seed, "Master seed");
    validate_cmd->add_option("--tol-scale", val.tol_scale,
                             "Multiplier applied to every tolerance (0 forces failures)");
    validate_cmd->add_option("--out", val.out, "Output path ('-' for stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    mc.sigma2_given = mc_s2->count() > 0;
    mc.sigma_e2_given = mc_se2->count() > 0;
    mc.snr_given = mc_snr->count() > 0;

    try {
        if (sweep_cmd->parsed()) return run_sweep(sweep);
        if (compare_cmd->parsed()) return run_compare(cmp);
        if (mc_cmd->parsed()) return run_mc(mc);
        if (validate_cmd->parsed()) return run_validate(val);
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
