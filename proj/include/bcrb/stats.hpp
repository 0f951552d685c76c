#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

namespace bcrb {

/// Neumaier-compensated accumulator. Summation order is fixed by the caller,
/// which keeps every reduction in the library bit-reproducible.
class NeumaierAccumulator {
  public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }

    double total() const { return sum_ + comp_; }

  private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double neumaier_sum(std::span<const double> xs) {
    NeumaierAccumulator acc;
    for (double x : xs) acc.add(x);
    return acc.total();
}

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean: empty range");
    return neumaier_sum(xs) / static_cast<double>(xs.size());
}

/// Unbiased sample variance, compensated two-pass.
inline double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("sample_variance: need at least two values");
    const double m = mean(xs);
    NeumaierAccumulator acc;
    for (double x : xs) acc.add((x - m) * (x - m));
    return acc.total() / static_cast<double>(xs.size() - 1);
}

inline double sample_std(std::span<const double> xs) { return std::sqrt(sample_variance(xs)); }

}  // namespace bcrb
