#include "scalinglab/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scalinglab/quadrature.hpp"
#include "scalinglab/stats.hpp"

namespace scalinglab {

double sigma2_rwm(HurstExponent hurst, double ell) {
    if (!(ell > 0.0)) throw std::invalid_argument("sigma2_rwm: ell must be positive");
    const double h = hurst.value;
    return std::pow(ell, 2.0 * h) * std::pow(2.0, h) * std::tgamma(h + 0.5) / std::sqrt(kPi);
}

double sigma2_mala(HurstExponent hurst, double ell, double phi_sq) {
    if (!(ell > 0.0)) throw std::invalid_argument("sigma2_mala: ell must be positive");
    if (phi_sq < 0.0) throw std::invalid_argument("sigma2_mala: phi_sq must be non-negative");
    const double h = hurst.value;
    const double gamma_factor = std::pow(2.0, 1.0 + h) * std::tgamma(h + 2.5) / std::sqrt(kPi);
    const double rational = h / (2.0 + 7.0 * h + 7.0 * h * h + 2.0 * h * h * h);
    return std::pow(ell, 4.0 + 2.0 * h) * gamma_factor * rational * phi_sq;
}

std::pair<double, double> mn_variance_kernel_triangles(HurstExponent hurst) {
    const double two_h = 2.0 * hurst.value;
    // upper triangle t > s, inner variable u = t - s (tanh-sinh soaks the
    // u^{2H} endpoint kink); lower triangle written out with roles swapped
    auto upper_inner = [&](double t) {
        return tanh_sinh(
            [&](double u) { return std::pow(u, two_h) * (1.0 - 2.0 * t) * (1.0 - 2.0 * (t - u)); },
            0.0, t);
    };
    auto lower_inner = [&](double s) {
        return tanh_sinh(
            [&](double u) { return std::pow(u, two_h) * (1.0 - 2.0 * (s - u)) * (1.0 - 2.0 * s); },
            0.0, s);
    };
    const double upper = gauss_legendre_16(upper_inner, 0.0, 1.0, 64);
    const double lower = gauss_legendre_16(lower_inner, 0.0, 1.0, 64);
    return {upper, lower};
}

double mn_variance_kernel(HurstExponent hurst) {
    const auto [upper, lower] = mn_variance_kernel_triangles(hurst);
    return upper + lower;
}

double limiting_acceptance(double sigma2) {
    if (sigma2 < 0.0) throw std::invalid_argument("limiting_acceptance: sigma2 must be >= 0");
    if (sigma2 == 0.0) return 1.0;
    return 2.0 * normal_cdf(-0.5 * std::sqrt(sigma2));
}

CltReport clt_report(const std::vector<double>& psi_samples) {
    if (psi_samples.size() < 1000)
        throw std::invalid_argument("clt_report: need at least 1000 samples");
    RunningMoments moments;
    for (double v : psi_samples) moments.add(v);
    CltReport report;
    report.mean = moments.mean();
    report.var = moments.variance();
    report.mean_plus_half_var = report.mean + 0.5 * report.var;
    const double sd = std::sqrt(report.var);
    std::vector<double> standardized(psi_samples.size());
    for (std::size_t i = 0; i < psi_samples.size(); ++i)
        standardized[i] = (psi_samples[i] - report.mean) / sd;
    report.normality_distance = ks_distance_to_normal(std::move(standardized));
    return report;
}

Autocorrelation autocorrelation(std::span<const double> trace, std::size_t max_lag) {
    if (max_lag == 0 || trace.size() < 10 * max_lag)
        throw std::invalid_argument("autocorrelation: trace shorter than 10 * max_lag");
    BiasedAcf acf = biased_acf(trace.data(), trace.size(), max_lag);
    return {std::move(acf.values), acf.zero_variance};
}

InDecayEstimate estimate_in_decay(const MarginalTarget& target, Algo algo,
                                  const std::vector<double>& sigma_list,
                                  std::size_t samples_per_sigma, std::uint64_t seed) {
    if (sigma_list.size() < 2)
        throw std::invalid_argument("estimate_in_decay: need at least two sigma values");
    if (!target.is_normalized())
        throw std::invalid_argument("estimate_in_decay: target must be normalized");
    if (samples_per_sigma < 100000)
        throw std::invalid_argument("estimate_in_decay: need >= 1e5 samples per sigma");
    const auto [lo_it, hi_it] = std::minmax_element(sigma_list.begin(), sigma_list.end());
    if (!(*lo_it > 0.0) || std::log10(*hi_it / *lo_it) < 1.5)
        throw std::invalid_argument("estimate_in_decay: sigma_list must span >= 1.5 decades");
    if (algo == Algo::mala && !target.has_derivatives())
        throw std::invalid_argument("estimate_in_decay: MALA needs potential derivatives");

    InDecayEstimate out;
    out.sigma = sigma_list;
    out.mean_rho_sq.resize(sigma_list.size());
    out.std_err.resize(sigma_list.size());

    const double lo = target.x_min();
    const double hi = target.x_max();
    constexpr std::size_t kTasks = 16;

    for (std::size_t si = 0; si < sigma_list.size(); ++si) {
        const double sigma = sigma_list[si];
        std::vector<RunningMoments> per_task(kTasks);
        target.visit_payload([&](const auto& payload) {
            using Payload = std::decay_t<decltype(payload)>;
            constexpr bool kDrift = detail::HasDrift<Payload>;
            run_tasks(kTasks, [&](std::size_t task) {
                Rng rng(derive_seed(seed, si * 1009 + task));
                RunningMoments acc;
                const std::size_t quota =
                    samples_per_sigma / kTasks + (task < samples_per_sigma % kTasks ? 1 : 0);
                for (std::size_t k = 0; k < quota; ++k) {
                    double x, y;
                    do {
                        x = target.sample_stationary(rng);
                        y = x + sigma * rng.normal();
                    } while (y < lo || y > hi);
                    double rho;
                    if (algo == Algo::mala) {
                        if constexpr (kDrift) {
                            const double w = y - x;
                            const double vpx = payload.v_prime(x);
                            const double vpy = payload.v_prime(y);
                            rho = payload.log_xi(y) - payload.log_xi(x) -
                                  0.5 * w * (vpx + vpy) -
                                  0.125 * sigma * sigma * (vpy * vpy - vpx * vpx);
                        } else {
                            rho = 0.0;  // unreachable, guarded above
                        }
                    } else {
                        rho = payload.log_xi(y) - payload.log_xi(x);
                    }
                    acc.add(rho * rho);
                }
                per_task[task] = acc;
            });
        });
        RunningMoments merged;
        for (const auto& part : per_task) merged.merge(part);
        out.mean_rho_sq[si] = merged.mean();
        out.std_err[si] = merged.std_error();
    }

    std::vector<double> log_sigma(sigma_list.size()), log_mean(sigma_list.size());
    for (std::size_t i = 0; i < sigma_list.size(); ++i) {
        log_sigma[i] = std::log(sigma_list[i]);
        log_mean[i] = std::log(out.mean_rho_sq[i]);
    }
    out.slope = ols_slope(log_sigma, log_mean);
    return out;
}

}
