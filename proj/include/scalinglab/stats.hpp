#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace scalinglab {

inline constexpr double kPi = 3.141592653589793238462643383279503;
inline constexpr double kLog2Pi = 1.837877066409345483560659472811236;

/// Standard normal density.
inline double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
}

/// Standard normal CDF through erfc. The double-precision erfc carries a
/// relative error of a few ulp, so the absolute error here stays below 1e-14
/// across the whole real line.
inline double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

/// log Phi(x), usable far into the left tail where Phi underflows.
/// Switches to the continued-fraction-free asymptotic expansion of Mills'
/// ratio once erfc would lose all precision.
inline double log_normal_cdf(double x) {
    if (x > -20.0) return std::log(normal_cdf(x));
    const double z = -x;
    // Phi(-z) = phi(z)/z * (1 - 1/z^2 + 3/z^4 - 15/z^6 + 105/z^8 - ...)
    const double inv2 = 1.0 / (z * z);
    double series = 1.0 + inv2 * (-1.0 + inv2 * (3.0 + inv2 * (-15.0 + inv2 * 105.0)));
    return -0.5 * z * z - 0.5 * kLog2Pi - std::log(z) + std::log(series);
}

/// Neumaier-compensated accumulator.
class CompensatedSum {
public:
    void add(double value) {
        double t = sum_ + value;
        if (std::abs(sum_) >= std::abs(value))
            comp_ += (sum_ - t) + value;
        else
            comp_ += (value - t) + sum_;
        sum_ = t;
    }
    void merge(const CompensatedSum& other) {
        add(other.sum_);
        comp_ += other.comp_;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Streaming mean/variance with compensated sums.
class RunningMoments {
public:
    void add(double x) {
        ++count_;
        sum_.add(x);
        sum_sq_.add(x * x);
    }
    void merge(const RunningMoments& other) {
        count_ += other.count_;
        sum_.merge(other.sum_);
        sum_sq_.merge(other.sum_sq_);
    }
    std::size_t count() const { return count_; }
    double mean() const { return count_ ? sum_.value() / static_cast<double>(count_) : 0.0; }
    double variance() const {
        if (count_ < 2) return 0.0;
        const double m = mean();
        const double n = static_cast<double>(count_);
        return std::max(0.0, (sum_sq_.value() - n * m * m) / (n - 1.0));
    }
    double std_error() const {
        return count_ ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    }

private:
    std::size_t count_ = 0;
    CompensatedSum sum_;
    CompensatedSum sum_sq_;
};

/// Kolmogorov-Smirnov distance between a sample and the standard normal CDF.
inline double ks_distance_to_normal(std::vector<double> sample) {
    if (sample.empty()) throw std::invalid_argument("ks_distance_to_normal: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = normal_cdf(sample[i]);
        d = std::max(d, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
    }
    return d;
}

struct BiasedAcf {
    std::vector<double> values;  // values[0] == 1
    bool zero_variance = false;  // constant input up to roundoff
};

/// Biased (normalized-by-N) sample autocorrelation. Constant inputs are
/// flagged and pinned to acf == 1 at every lag.
inline BiasedAcf biased_acf(const double* trace, std::size_t len, std::size_t max_lag) {
    BiasedAcf out;
    out.values.assign(max_lag + 1, 1.0);
    double mean = 0.0;
    for (std::size_t t = 0; t < len; ++t) mean += trace[t];
    mean /= static_cast<double>(len);
    double var = 0.0;
    for (std::size_t t = 0; t < len; ++t) var += (trace[t] - mean) * (trace[t] - mean);
    var /= static_cast<double>(len);
    if (var <= 1e-24 * (mean * mean + 1.0)) {
        out.zero_variance = true;
        return out;
    }
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double acc = 0.0;
        for (std::size_t t = 0; t + lag < len; ++t)
            acc += (trace[t] - mean) * (trace[t + lag] - mean);
        out.values[lag] = acc / (static_cast<double>(len) * var);
    }
    return out;
}

/// Ordinary least squares slope of y against x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("ols_slope: need two same-length samples");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("ols_slope: degenerate abscissae");
    return sxy / sxx;
}

}
