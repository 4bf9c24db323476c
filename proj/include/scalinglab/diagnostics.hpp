#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "scalinglab/fbm.hpp"
#include "scalinglab/mh_core.hpp"
#include "scalinglab/targets.hpp"

namespace scalinglab {

/// Limiting log-MH-ratio variance for rough RWM:
///   sigma^2 = ell^{2H} * 2^H Gamma(H + 1/2) / sqrt(pi).
double sigma2_rwm(HurstExponent hurst, double ell);

/// Limiting log-MH-ratio variance for rough MALA:
///   sigma^2 = ell^{4+2H} * (2^{1+H} Gamma(H + 5/2) / sqrt(pi))
///           * H / (2 + 7H + 7H^2 + 2H^3) * int phi_c^2 pi dx.
double sigma2_mala(HurstExponent hurst, double ell, double phi_sq);

/// Numerical double quadrature of
///   int_0^1 int_0^1 |t-s|^{2H} (1-2t)(1-2s) dt ds,
/// which the closed form says equals -H/(2+7H+7H^2+2H^3). The two diagonal
/// triangles are integrated independently (their equality is the t<->s
/// symmetry check).
double mn_variance_kernel(HurstExponent hurst);
std::pair<double, double> mn_variance_kernel_triangles(HurstExponent hurst);

/// E[(1 ^ exp)(N(-sigma2/2, sigma2))] = 2 Phi(-sigma/2).
double limiting_acceptance(double sigma2);

struct CltReport {
    double mean = 0.0;
    double var = 0.0;
    double mean_plus_half_var = 0.0;
    double normality_distance = 0.0;  // KS distance of standardized samples vs N(0,1)
};

/// Moments plus a Kolmogorov-Smirnov normality distance; needs >= 1000 samples.
CltReport clt_report(const std::vector<double>& psi_samples);

struct Autocorrelation {
    std::vector<double> values;  // values[0] == 1
    bool zero_variance = false;  // constant traces: acf pinned to 1 and flagged
};

/// Biased (normalized-by-N) sample ACF; requires trace length >= 10 * max_lag.
Autocorrelation autocorrelation(std::span<const double> trace, std::size_t max_lag);

struct InDecayEstimate {
    double slope = 0.0;                 // log-log slope, expected ~ 2 beta
    std::vector<double> sigma;
    std::vector<double> mean_rho_sq;    // Monte Carlo E[rho^2(x, x+sigma z)]
    std::vector<double> std_err;
};

/// Monte Carlo decay-rate probe for E[rho^2(x, x+sigma z)], x ~ pi and
/// z ~ N(0,1), at each sigma in sigma_list (which must span >= 1.5 decades;
/// at least 1e5 samples per sigma). Draws whose proposal leaves the domain
/// are redrawn; the conditioning is negligible for the probe scales.
InDecayEstimate estimate_in_decay(const MarginalTarget& target, Algo algo,
                                  const std::vector<double>& sigma_list,
                                  std::size_t samples_per_sigma, std::uint64_t seed);

}
