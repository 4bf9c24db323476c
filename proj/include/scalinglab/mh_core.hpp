#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scalinglab/parallel.hpp"
#include "scalinglab/rng.hpp"
#include "scalinglab/stats.hpp"
#include "scalinglab/targets.hpp"

namespace scalinglab {

enum class Algo { rwm, mala };
enum class InitKind { stationary_table, point, burn_in_only };

const char* to_string(Algo algo);
const char* to_string(InitKind init);

/// Product-chain configuration. Unless sigma_override is set, the
/// per-coordinate proposal standard deviation is sigma_n = ell * n^{-1/(2 beta)}
/// (proposal variance ell^2 n^{-1/beta}).
struct ChainConfig {
    Algo algo = Algo::rwm;
    std::size_t dimension = 1;
    double ell = 1.0;
    double beta = 1.0;
    std::optional<double> sigma_override;
    long steps = 0;
    long burn_in = 0;
    std::uint64_t seed = 1;
    InitKind init = InitKind::stationary_table;
    long thin = 0;             // > 0 records every thin-th step of coordinate 1
    std::size_t acf_max_lag = 0;

    double sigma() const {
        if (sigma_override) return *sigma_override;
        return ell * std::pow(static_cast<double>(dimension), -1.0 / (2.0 * beta));
    }
    void validate() const;
};

/// Per-step record for exported traces. psi is finite except for the
/// out-of-domain auto-reject convention (-infinity).
struct StepRecord {
    long step = 0;
    double coord1 = 0.0;
    double psi = 0.0;
    bool accepted = false;
    double proposal_sq_jump_coord1 = 0.0;
    double full_sq_jump = 0.0;
};

/// Aggregates of one chain run.
struct RunSummary {
    double acceptance_rate = 0.0;   // indicator average
    double accept_prob_mean = 0.0;  // average of min(1, e^Psi)
    double esjd_coord = 0.0;        // E[(Y1-X1)^2 * accept]
    double esjd_full = 0.0;         // E[|Y-X|^2 * accept]
    double psi_mean = 0.0;
    double psi_var = 0.0;
    std::vector<double> acf;        // first-coordinate ACF up to acf_max_lag
    bool acf_zero_variance = false;
    std::size_t dimension = 0;
    double ell = 0.0;
    double beta = 0.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    long steps = 0;
    long burn_in = 0;
    std::string init;
};

/// One symmetric RWM proposal: every coordinate perturbed by sigma * N(0,1).
std::vector<double> rwm_propose(std::span<const double> state, double sigma, Rng& rng);

/// One MALA proposal: x_i + (sigma^2/2) V'(x_i) + sigma * N(0,1) per
/// coordinate; rejects targets without potential derivatives.
std::vector<double> mala_propose(std::span<const double> state, double sigma,
                                 const MarginalTarget& target, Rng& rng);

/// Summed log-MH ratio Psi for a realized (state, proposal) pair. For RWM this
/// is the plain potential difference; for MALA the per-coordinate form
///   rho = V(y) - V(x) - (w/2)(V'(x)+V'(y)) - (sigma^2/8)(V'(y)^2 - V'(x)^2),
/// with w = y - x, which matches log pi(y)q(y,x) - log pi(x)q(x,y) exactly.
/// Out-of-domain points give -infinity (auto-reject).
double log_mh_ratio(std::span<const double> state, std::span<const double> proposal,
                    double sigma, const MarginalTarget& target, Algo algo);

namespace detail {

template <typename Payload>
concept HasDrift = requires(const Payload& p, double x) {
    { p.v_prime(x) } -> std::convertible_to<double>;
};

template <typename Payload, bool UseDrift>
RunSummary run_chain_impl(const ChainConfig& cfg, const MarginalTarget& target,
                          const Payload& payload, std::vector<StepRecord>* trace) {
    const std::size_t n = cfg.dimension;
    const double sigma = cfg.sigma();
    const double half_sigma_sq = 0.5 * sigma * sigma;
    const double lo = target.x_min();
    const double hi = target.x_max();
    Rng rng(cfg.seed);

    std::vector<double> x(n), y(n), log_xi_x(n), log_xi_y(n);
    std::vector<double> vp_x, vp_y;
    if constexpr (UseDrift) {
        vp_x.resize(n);
        vp_y.resize(n);
    }

    switch (cfg.init) {
        case InitKind::stationary_table:
            for (auto& xi : x) xi = target.sample_stationary(rng);
            break;
        case InitKind::point:
            for (auto& xi : x) xi = 0.0;
            break;
        case InitKind::burn_in_only:
            for (auto& xi : x) {
                do xi = rng.normal(); while (xi < lo || xi > hi);
            }
            break;
    }
    for (std::size_t i = 0; i < n; ++i) {
        log_xi_x[i] = payload.log_xi(x[i]);
        if constexpr (UseDrift) vp_x[i] = payload.v_prime(x[i]);
    }

    long accepted = 0;
    CompensatedSum jump1_sum, jump_full_sum, accept_prob_sum;
    RunningMoments psi_moments;
    std::vector<double> coord1_series;
    if (cfg.acf_max_lag > 0) coord1_series.reserve(static_cast<std::size_t>(cfg.steps));

    const long total_steps = cfg.burn_in + cfg.steps;
    for (long step = 0; step < total_steps; ++step) {
        bool in_domain = true;
        double psi = 0.0;
        double jump_full = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double z = rng.normal();
            double yi = x[i] + sigma * z;
            if constexpr (UseDrift) yi += half_sigma_sq * vp_x[i];
            y[i] = yi;
            if (yi < lo || yi > hi) {
                in_domain = false;
                continue;
            }
            const double lxy = payload.log_xi(yi);
            log_xi_y[i] = lxy;
            const double w = yi - x[i];
            jump_full += w * w;
            if constexpr (UseDrift) {
                const double vpy = payload.v_prime(yi);
                vp_y[i] = vpy;
                psi += lxy - log_xi_x[i] - 0.5 * w * (vp_x[i] + vpy) -
                       0.125 * sigma * sigma * (vpy * vpy - vp_x[i] * vp_x[i]);
            } else {
                psi += lxy - log_xi_x[i];
            }
        }

        const double u = rng.uniform_pos();  // one uniform per step, drawn unconditionally
        const bool accept = in_domain && std::log(u) < psi;
        const bool record = step >= cfg.burn_in;
        if (record) {
            if (accept) {
                ++accepted;
                const double w1 = y[0] - x[0];
                jump1_sum.add(w1 * w1);
                jump_full_sum.add(jump_full);
            }
            if (in_domain) {
                psi_moments.add(psi);
                accept_prob_sum.add(std::min(1.0, std::exp(psi)));
            }
        }
        if (accept) {
            x.swap(y);
            log_xi_x.swap(log_xi_y);
            if constexpr (UseDrift) vp_x.swap(vp_y);
        }
        if (record) {
            if (cfg.acf_max_lag > 0) coord1_series.push_back(x[0]);
            if (trace && cfg.thin > 0 && (step - cfg.burn_in) % cfg.thin == 0) {
                // after an accepted move x and y were swapped, so the proposal
                // displacement of this step is x - y in either case
                const double w1 = x[0] - y[0];
                trace->push_back({step - cfg.burn_in, x[0],
                                  in_domain ? psi : -std::numeric_limits<double>::infinity(),
                                  accept, w1 * w1, jump_full});
            }
        }
    }

    RunSummary out;
    const double steps_d = static_cast<double>(cfg.steps);
    out.acceptance_rate = static_cast<double>(accepted) / steps_d;
    out.accept_prob_mean = accept_prob_sum.value() / steps_d;
    out.esjd_coord = jump1_sum.value() / steps_d;
    out.esjd_full = jump_full_sum.value() / steps_d;
    out.psi_mean = psi_moments.mean();
    out.psi_var = psi_moments.variance();
    out.dimension = n;
    out.ell = cfg.ell;
    out.beta = cfg.beta;
    out.sigma = sigma;
    out.seed = cfg.seed;
    out.steps = cfg.steps;
    out.burn_in = cfg.burn_in;
    out.init = to_string(cfg.init);
    if (cfg.acf_max_lag > 0) {
        BiasedAcf acf = biased_acf(coord1_series.data(), coord1_series.size(), cfg.acf_max_lag);
        out.acf = std::move(acf.values);
        out.acf_zero_variance = acf.zero_variance;
    }
    return out;
}

}  // namespace detail

/// Runs burn-in plus `steps` MH iterations and gathers the run summary.
/// The target must be normalized (stationary draws and domain bookkeeping).
RunSummary run_chain(const ChainConfig& cfg, const MarginalTarget& target,
                     std::vector<StepRecord>* trace = nullptr);

/// Streaming statistics over independent stationary (X, Y) proposal pairs.
/// All *_gap moments are paired differences whose population mean is 0 under
/// detailed balance: exp(Psi)-1, (-Psi)e^Psi - Psi, Psi^2 e^Psi - Psi^2.
struct PsiPairStats {
    std::size_t pairs = 0;
    std::size_t out_of_domain = 0;
    RunningMoments psi;
    RunningMoments exp_psi_gap;
    RunningMoments swap_linear_gap;
    RunningMoments swap_square_gap;
    RunningMoments taylor_remainder;  // e^Psi - 1 - Psi - Psi^2/2
    std::vector<double> psi_subset;

    void merge(const PsiPairStats& other);
    /// mean(Psi) + var(Psi)/2 through the exp-identity control variate
    /// -E[remainder] = E[Psi] + E[Psi^2]/2 (exact in stationarity).
    double mean_plus_half_var_cv() const {
        const double m = psi.mean();
        return -taylor_remainder.mean() - 0.5 * m * m;
    }
    double mean_plus_half_var_cv_se() const {
        return std::sqrt(taylor_remainder.std_error() * taylor_remainder.std_error() +
                         psi.mean() * psi.mean() * psi.std_error() * psi.std_error());
    }
};

/// Draws `num_pairs` i.i.d. stationary pairs (X fresh from the inverse-CDF
/// table, Y proposed) and accumulates the Psi statistics; work is split over
/// `num_tasks` seed-derived tasks so results do not depend on thread count.
PsiPairStats sample_stationary_pairs(const MarginalTarget& target, Algo algo, std::size_t n,
                                     double sigma, std::size_t num_pairs, std::uint64_t seed,
                                     std::size_t keep_samples = 0, std::size_t num_tasks = 64);

}
