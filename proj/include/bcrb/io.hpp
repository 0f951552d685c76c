#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bcrb/estimators.hpp"
#include "bcrb/linmodel.hpp"
#include "bcrb/sweep.hpp"
#include "bcrb/validate.hpp"

namespace bcrb {

/// 12-significant-digit decimal rendering. The comma fixup guards against an
/// embedding application having switched the global C locale.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    std::string s(buf);
    for (char& c : s)
        if (c == ',') c = '.';
    return s;
}

/// JSON null for NaN, plain number otherwise.
inline nlohmann::ordered_json json_number(double v) {
    if (std::isnan(v)) return nullptr;
    return v;
}

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "snr_db,r,bcrb_exact_mean,bcrb_exact_std,bcrb_asymptotic,bcrb_small_beta,"
          "bcrb_small_r,small_r_valid,bcrb_large_r\n";
    for (const SweepRow& r : rows) {
        os << format_double(r.snr_db) << ',' << format_double(r.r) << ','
           << format_double(r.bcrb_exact_mean) << ',' << format_double(r.bcrb_exact_std) << ','
           << format_double(r.bcrb_asymptotic) << ',' << format_double(r.bcrb_small_beta) << ','
           << format_double(r.bcrb_small_r) << ',' << (r.small_r_valid ? '1' : '0') << ','
           << format_double(r.bcrb_large_r) << '\n';
    }
    return os.str();
}

inline nlohmann::ordered_json sweep_json(const std::vector<SweepRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const SweepRow& r : rows) {
        arr.push_back({{"snr_db", json_number(r.snr_db)},
                       {"r", json_number(r.r)},
                       {"bcrb_exact_mean", json_number(r.bcrb_exact_mean)},
                       {"bcrb_exact_std", json_number(r.bcrb_exact_std)},
                       {"bcrb_asymptotic", json_number(r.bcrb_asymptotic)},
                       {"bcrb_small_beta", json_number(r.bcrb_small_beta)},
                       {"bcrb_small_r", json_number(r.bcrb_small_r)},
                       {"small_r_valid", r.small_r_valid},
                       {"bcrb_large_r", json_number(r.bcrb_large_r)}});
    }
    return arr;
}

inline std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::ostringstream os;
    os << "snr_db,r0,r1,bcrb0,bcrb1,bcrb1_inf\n";
    for (const CompareRow& r : rows) {
        os << format_double(r.snr_db) << ',' << format_double(r.r0) << ','
           << format_double(r.r1) << ',' << format_double(r.bcrb0) << ','
           << format_double(r.bcrb1) << ',' << format_double(r.bcrb1_inf) << '\n';
    }
    return os.str();
}

inline nlohmann::ordered_json compare_json(const std::vector<CompareRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const CompareRow& r : rows) {
        arr.push_back({{"snr_db", json_number(r.snr_db)},
                       {"r0", json_number(r.r0)},
                       {"r1", json_number(r.r1)},
                       {"bcrb0", json_number(r.bcrb0)},
                       {"bcrb1", json_number(r.bcrb1)},
                       {"bcrb1_inf", json_number(r.bcrb1_inf)}});
    }
    return arr;
}

inline std::string mc_csv(const McResult& res) {
    std::ostringstream os;
    os << "trials,mse_x,std_err,bound_x,margin\n";
    os << res.trials << ',' << format_double(res.mse_x) << ',' << format_double(res.std_err)
       << ',' << format_double(res.bound_x) << ',' << format_double(res.margin) << '\n';
    return os.str();
}

inline nlohmann::ordered_json mc_json(const McResult& res) {
    return {{"trials", res.trials},
            {"mse_x", json_number(res.mse_x)},
            {"std_err", json_number(res.std_err)},
            {"bound_x", json_number(res.bound_x)},
            {"margin", json_number(res.margin)}};
}

inline nlohmann::ordered_json validation_report_json(const ValidationReport& rep) {
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const ValidationCheck& c : rep.checks) {
        checks.push_back({{"name", c.name},
                          {"value", json_number(c.value)},
                          {"target", json_number(c.target)},
                          {"tol", json_number(c.tol)},
                          {"pass", c.pass}});
    }
    return {{"suite", rep.suite}, {"seed", rep.seed}, {"checks", checks}};
}

/// Writes body to path, or to stdout when path is "-". Throws on I/O failure.
inline void write_text(const std::string& path, const std::string& body) {
    if (path == "-") {
        std::cout << body;
        std::cout.flush();
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    os << body;
    os.flush();
    if (!os) throw std::runtime_error("failed while writing output file: " + path);
}

namespace detail {

inline void write_vector_csv(const std::filesystem::path& path, const Eigen::VectorXd& v) {
    std::ostringstream os;
    os << "value\n";
    for (Eigen::Index i = 0; i < v.size(); ++i) os << format_double(v[i]) << '\n';
    write_text(path.string(), os.str());
}

}  // namespace detail

/// Columnar dump of one realization into dir: design.csv (header c0..c{K-1},
/// N rows), amplitudes.csv, gamma.csv, noise.csv, observations.csv (header
/// "value"). The directory is created if missing.
inline void dump_dataset_csv(const std::string& dir, const Dataset& d) {
    const std::filesystem::path root(dir);
    std::error_code ec;
    std::filesystem::create_directories(root, ec);
    if (ec) throw std::runtime_error("cannot create dataset directory: " + dir);
    {
        std::ostringstream os;
        for (Eigen::Index j = 0; j < d.design.cols(); ++j)
            os << (j > 0 ? "," : "") << 'c' << j;
        os << '\n';
        for (Eigen::Index i = 0; i < d.design.rows(); ++i) {
            for (Eigen::Index j = 0; j < d.design.cols(); ++j)
                os << (j > 0 ? "," : "") << format_double(d.design(i, j));
            os << '\n';
        }
        write_text((root / "design.csv").string(), os.str());
    }
    detail::write_vector_csv(root / "amplitudes.csv", d.amplitudes);
    detail::write_vector_csv(root / "gamma.csv", Eigen::VectorXd::Constant(1, d.gamma));
    detail::write_vector_csv(root / "noise.csv", d.noise);
    detail::write_vector_csv(root / "observations.csv", d.observations);
}

}  // namespace bcrb
