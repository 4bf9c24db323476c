#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace scalinglab {

/// Hurst exponent, constrained to (0,1).
struct HurstExponent {
    explicit HurstExponent(double v) : value(v) {
        if (!(v > 0.0 && v < 1.0))
            throw std::invalid_argument("HurstExponent must lie strictly in (0,1)");
    }
    double value;
};

/// Uniform grid with x_min < 0 < x_max and 0 sitting exactly on a node.
/// Nodes are stored as (i - zero_index) * spacing, so node(zero_index) == 0
/// without rounding residue; a construction whose nodes miss 0 by more than a
/// relative 1e-9 is rejected, otherwise the grid is snapped.
class GridSpec {
public:
    GridSpec(double x_min, double x_max, std::size_t num_points);

    /// Symmetric grid on [-half_width, half_width]; num_points must be odd.
    static GridSpec symmetric(double half_width, std::size_t num_points);

    std::size_t num_points() const { return num_points_; }
    double spacing() const { return spacing_; }
    std::size_t zero_index() const { return zero_index_; }
    double node(std::size_t i) const {
        return spacing_ * (static_cast<double>(i) - static_cast<double>(zero_index_));
    }
    double x_min() const { return node(0); }
    double x_max() const { return node(num_points_ - 1); }

    bool operator==(const GridSpec& other) const = default;

private:
    double spacing_;
    std::size_t num_points_;
    std::size_t zero_index_;
};

/// Frozen fBM environment: node values over a grid, pinned to 0 at x=0,
/// evaluated elsewhere by linear interpolation.
class FbmPath {
public:
    FbmPath(HurstExponent hurst, GridSpec grid, std::vector<double> values, std::uint64_t seed);

    double hurst() const { return hurst_; }
    const GridSpec& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::uint64_t seed() const { return seed_; }
    double x_min() const { return x_min_; }
    double x_max() const { return grid_.x_max(); }

    /// Linear interpolation; exact at nodes. Throws outside [x_min, x_max].
    double value_at(double x) const {
        if (x < x_min_ || x > grid_.x_max())
            throw std::out_of_range("FbmPath::value_at: x outside the grid span");
        return value_at_unchecked(x);
    }

    /// Interpolation without the range check; caller guarantees the range.
    double value_at_unchecked(double x) const {
        const double t = (x - x_min_) * inv_spacing_;
        const auto i = static_cast<std::size_t>(t);
        if (i >= values_.size() - 1) return values_.back();
        const double f = t - static_cast<double>(i);
        if (f < 1e-12) return values_[i];  // keep node evaluations exact
        if (f > 1.0 - 1e-12) return values_[i + 1];
        return values_[i] + f * (values_[i + 1] - values_[i]);
    }

private:
    double hurst_;
    GridSpec grid_;
    std::vector<double> values_;
    std::uint64_t seed_;
    double x_min_;
    double inv_spacing_;
};

/// Two-sided fBM covariance (|x|^, |y|^, |x-y|^ halves).
double fbm_covariance(double x, double y, HurstExponent hurst);

/// Exact-covariance oracle generator: dense Cholesky factorization of the
/// node covariance with the x=0 node pinned out. Guarded to <= 4096 nodes.
FbmPath sample_fbm_cholesky(const GridSpec& grid, HurstExponent hurst, std::uint64_t seed);

/// Factorize-once variant of the oracle for replica loops.
class CholeskyFbmSampler {
public:
    CholeskyFbmSampler(const GridSpec& grid, HurstExponent hurst);
    ~CholeskyFbmSampler();
    CholeskyFbmSampler(const CholeskyFbmSampler&) = delete;
    CholeskyFbmSampler& operator=(const CholeskyFbmSampler&) = delete;

    FbmPath sample(std::uint64_t seed) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Fast generator: circulant embedding of the stationary increment sequence
/// (fractional Gaussian noise) over the whole grid, then cumulative summation
/// outward from the x=0 node. Reusable across seeds; one instance per thread.
class CirculantFbmSampler {
public:
    CirculantFbmSampler(const GridSpec& grid, HurstExponent hurst);
    ~CirculantFbmSampler();
    CirculantFbmSampler(const CirculantFbmSampler&) = delete;
    CirculantFbmSampler& operator=(const CirculantFbmSampler&) = delete;

    FbmPath sample(std::uint64_t seed);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper around CirculantFbmSampler.
FbmPath sample_fbm_circulant(const GridSpec& grid, HurstExponent hurst, std::uint64_t seed);

/// CSV export/import: `# hurst=<H> seed=<s>` metadata line, `x,value` header,
/// one row per node with 17 significant digits.
void write_fbm_csv(const std::string& filename, const FbmPath& path);
FbmPath read_fbm_csv(const std::string& filename);

}
