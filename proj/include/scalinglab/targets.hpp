#pragma once

#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scalinglab/fbm.hpp"
#include "scalinglab/rng.hpp"
#include "scalinglab/stats.hpp"

namespace scalinglab {

enum class TargetKind { rwm_rough, mala_rough, rwm_osc, mala_osc };

const char* to_string(TargetKind kind);

/// Localisation parameters: phi_c(x) = min(1, c^{3/(2H)} |x|^{-3}).
struct LocalisationParams {
    LocalisationParams(double c_, HurstExponent hurst_) : c(c_), hurst(hurst_) {
        if (!(c > 0.0)) throw std::invalid_argument("LocalisationParams: c must be positive");
    }
    double c;
    HurstExponent hurst;
};

/// phi_c(x); equals 1 for |x| <= c^{1/(2H)} and decays as |x|^{-3} beyond.
double localisation(double x, const LocalisationParams& params);

/// Oscillatory perturbation constants; b must be nonzero.
struct OscParams {
    OscParams(double a_, double b_) : a(a_), b(b_) {
        if (b == 0.0) throw std::invalid_argument("OscParams: b must be nonzero");
    }
    double a;
    double b;
};

namespace detail {

/// Values tabulated on a uniform grid, linearly interpolated.
struct LinearTable {
    double x_min = 0.0;
    double inv_spacing = 0.0;
    std::vector<double> values;

    double at(double x) const {
        const double t = (x - x_min) * inv_spacing;
        const auto i = static_cast<std::size_t>(t);
        if (i >= values.size() - 1) return values.back();
        const double f = t - static_cast<double>(i);
        return values[i] + f * (values[i + 1] - values[i]);
    }
};

}  // namespace detail

/// Rough RWM marginal: log xi(x) = B_x - x^2/2 - log(2 pi)/2.
struct RwmRoughPayload {
    std::shared_ptr<const FbmPath> path;

    double log_xi(double x) const {
        return path->value_at_unchecked(x) - 0.5 * x * x - 0.5 * kLog2Pi;
    }
};

/// Rough MALA marginal built from the localised double integral of the path:
///   log xi(x) = -x^2/2 + x I0(x) - I1(x) - log(2 pi)/2,
///   V'(x)     = -x + I0(x),
///   V''(x)    = -1 + B_x phi_c(x),
/// with I0(x) = int_0^x B phi_c and I1(x) = int_0^x u B phi_c tabulated by
/// cumulative trapezoid sums on the path grid.
struct MalaRoughPayload {
    std::shared_ptr<const FbmPath> path;
    double c = 0.0;
    double phi_scale = 0.0;   // c^{3/(2H)}
    double phi_knee = 0.0;    // c^{1/(2H)}
    detail::LinearTable i0;
    detail::LinearTable i1;

    double phi(double x) const {
        const double ax = std::abs(x);
        if (ax <= phi_knee) return 1.0;
        return phi_scale / (ax * ax * ax);
    }
    double log_xi(double x) const {
        return -0.5 * x * x + x * i0.at(x) - i1.at(x) - 0.5 * kLog2Pi;
    }
    double v_prime(double x) const { return -x + i0.at(x); }
    double v_second(double x) const { return -1.0 + path->value_at_unchecked(x) * phi(x); }
};

/// Deterministic oscillatory marginals of section-style form:
///   rwm_osc : log xi(x) = -x^2/2 + a cos(bx)
///   mala_osc: log xi(x) = -x^2/2 - (a/b^2) cos(bx)
struct OscPayload {
    TargetKind kind = TargetKind::rwm_osc;
    double a = 0.0;
    double b = 1.0;

    double log_xi(double x) const {
        if (kind == TargetKind::rwm_osc) return -0.5 * x * x + a * std::cos(b * x);
        return -0.5 * x * x - (a / (b * b)) * std::cos(b * x);
    }
    double v_prime(double x) const { return -x + (a / b) * std::sin(b * x); }
    double v_second(double x) const { return -1.0 + a * std::cos(b * x); }
};

/// Exact inverse-CDF sampler for a density exp(L(x)) with L piecewise linear
/// on a uniform grid. Segment masses use expm1 and the within-segment inverse
/// uses log1p, so draws follow the tabulated density itself (not a chordal
/// approximation); a uniform guide keeps a draw at O(1) lookups.
class StationaryTable {
public:
    StationaryTable() = default;
    StationaryTable(std::vector<double> node_x, const std::vector<double>& log_density);

    double sample(Rng& rng) const {
        const double target = rng.uniform() * total_mass_;
        std::size_t cell = static_cast<std::size_t>(guide_scale_ * target);
        if (cell >= guide_.size() - 1) cell = guide_.size() - 2;
        std::size_t lo = guide_[cell], hi = guide_[cell + 1];
        while (lo < hi) {  // first segment with cum_mass[i+1] >= target
            const std::size_t mid = (lo + hi) / 2;
            if (cum_mass_[mid + 1] < target)
                lo = mid + 1;
            else
                hi = mid;
        }
        const double mass = cum_mass_[lo + 1] - cum_mass_[lo];
        if (mass <= 0.0) return node_x_[lo];
        const double r = (target - cum_mass_[lo]) / mass;
        const double d = log_density_[lo + 1] - log_density_[lo];
        if (std::abs(d) < 1e-12) return node_x_[lo] + r * spacing_;
        return node_x_[lo] + (spacing_ / d) * std::log1p(r * std::expm1(d));
    }

    double total_mass() const { return total_mass_; }
    std::size_t num_segments() const { return node_x_.empty() ? 0 : node_x_.size() - 1; }
    const std::vector<double>& nodes() const { return node_x_; }
    const std::vector<double>& cumulative_mass() const { return cum_mass_; }

private:
    std::vector<double> node_x_;
    std::vector<double> log_density_;
    std::vector<double> cum_mass_;  // size num nodes; [0]=0, back()=total mass
    std::vector<std::uint32_t> guide_;
    double spacing_ = 0.0;
    double total_mass_ = 0.0;
    double guide_scale_ = 0.0;
};

/// A 1-D unnormalized marginal target over a finite domain, optionally
/// normalized and equipped with an inverse-CDF table for stationary draws.
/// Immutable once normalized; safe to share read-only across chains.
class MarginalTarget {
public:
    using Payload = std::variant<RwmRoughPayload, MalaRoughPayload, OscPayload>;

    MarginalTarget(TargetKind kind, double x_min, double x_max, Payload payload);

    TargetKind kind() const { return kind_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    bool in_domain(double x) const { return x >= x_min_ && x <= x_max_; }

    /// Unnormalized log density; -infinity outside the domain (mass 0 there).
    double log_xi(double x) const;

    bool has_derivatives() const;
    double v_prime(double x) const;   // throws when the kind exposes none
    double v_second(double x) const;  // throws when the kind exposes none

    bool is_normalized() const { return norm_const_.has_value(); }
    double norm_const() const;
    double sample_stationary(Rng& rng) const;

    /// Strictly increasing (x, F) pairs of the normalized CDF; nodes whose
    /// tail mass is below double resolution are collapsed away.
    const std::vector<std::pair<double, double>>& cdf_table() const;
    const StationaryTable& stationary_table() const;

    template <typename F>
    decltype(auto) visit_payload(F&& f) const {
        return std::visit(std::forward<F>(f), payload_);
    }
    const Payload& payload() const { return payload_; }

    /// Plain-text key=value block used as a comment header in result files.
    std::string descriptor() const;

    friend MarginalTarget normalize_and_tabulate(MarginalTarget target, std::size_t resolution);
    friend MarginalTarget build_rwm_rough(FbmPath path);
    friend MarginalTarget build_mala_rough(FbmPath path, const LocalisationParams& params);
    friend MarginalTarget build_oscillatory(TargetKind kind, const OscParams& params,
                                            double x_min, double x_max);

private:
    TargetKind kind_;
    double x_min_;
    double x_max_;
    Payload payload_;
    std::optional<double> norm_const_;
    StationaryTable table_;
    std::vector<std::pair<double, double>> cdf_pairs_;
    std::optional<std::uint64_t> env_seed_;
    std::optional<double> hurst_;
    std::optional<double> c_;
    std::optional<double> osc_a_;
    std::optional<double> osc_b_;
};

MarginalTarget build_rwm_rough(FbmPath path);
MarginalTarget build_mala_rough(FbmPath path, const LocalisationParams& params);
MarginalTarget build_oscillatory(TargetKind kind, const OscParams& params, double x_min = -9.0,
                                 double x_max = 9.0);

/// Computes norm_const by the trapezoid rule on the target's quadrature grid
/// (the path grid for rough targets, `resolution` uniform nodes otherwise)
/// and builds the CDF / inverse-CDF tables. resolution must be >= 1000.
MarginalTarget normalize_and_tabulate(MarginalTarget target, std::size_t resolution);

/// int phi_c(x)^2 pi(x) dx for a normalized rough MALA target (trapezoid on
/// the path grid); the sigma^2 formula consumes this factor.
double phi_sq_integral(const MarginalTarget& target);

}
