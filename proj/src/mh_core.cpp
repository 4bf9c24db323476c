#include "scalinglab/mh_core.hpp"

#include <cmath>

namespace scalinglab {

const char* to_string(Algo algo) { return algo == Algo::rwm ? "rwm" : "mala"; }

const char* to_string(InitKind init) {
    switch (init) {
        case InitKind::stationary_table: return "stationary_table";
        case InitKind::point: return "point";
        case InitKind::burn_in_only: return "burn_in_only";
    }
    return "unknown";
}

void ChainConfig::validate() const {
    if (dimension < 1) throw std::invalid_argument("ChainConfig: dimension must be >= 1");
    if (!(beta > 0.0)) throw std::invalid_argument("ChainConfig: beta must be positive");
    if (!sigma_override && !(ell > 0.0))
        throw std::invalid_argument("ChainConfig: ell must be positive");
    if (sigma_override && !(*sigma_override >= 0.0))
        throw std::invalid_argument("ChainConfig: sigma_override must be non-negative");
    if (!(steps > burn_in && burn_in >= 0))
        throw std::invalid_argument("ChainConfig: need steps > burn_in >= 0");
}

std::vector<double> rwm_propose(std::span<const double> state, double sigma, Rng& rng) {
    if (!(sigma > 0.0)) throw std::invalid_argument("rwm_propose: sigma must be positive");
    std::vector<double> out(state.size());
    for (std::size_t i = 0; i < state.size(); ++i) out[i] = state[i] + sigma * rng.normal();
    return out;
}

std::vector<double> mala_propose(std::span<const double> state, double sigma,
                                 const MarginalTarget& target, Rng& rng) {
    if (!(sigma > 0.0)) throw std::invalid_argument("mala_propose: sigma must be positive");
    if (!target.has_derivatives())
        throw std::invalid_argument("mala_propose: target exposes no potential derivative");
    std::vector<double> out(state.size());
    const double half_sigma_sq = 0.5 * sigma * sigma;
    for (std::size_t i = 0; i < state.size(); ++i)
        out[i] = state[i] + half_sigma_sq * target.v_prime(state[i]) + sigma * rng.normal();
    return out;
}

double log_mh_ratio(std::span<const double> state, std::span<const double> proposal,
                    double sigma, const MarginalTarget& target, Algo algo) {
    if (state.size() != proposal.size())
        throw std::invalid_argument("log_mh_ratio: dimension mismatch");
    if (algo == Algo::mala && !target.has_derivatives())
        throw std::invalid_argument("log_mh_ratio: MALA needs a target with derivatives");
    double psi = 0.0;
    for (std::size_t i = 0; i < state.size(); ++i) {
        const double x = state[i];
        const double y = proposal[i];
        if (!target.in_domain(x) || !target.in_domain(y))
            return -std::numeric_limits<double>::infinity();
        const double rho_potential = target.log_xi(y) - target.log_xi(x);
        if (!std::isfinite(rho_potential))
            throw std::runtime_error("log_mh_ratio: non-finite potential inside the domain");
        if (algo == Algo::rwm) {
            psi += rho_potential;
        } else {
            const double w = y - x;
            const double vpx = target.v_prime(x);
            const double vpy = target.v_prime(y);
            psi += rho_potential - 0.5 * w * (vpx + vpy) -
                   0.125 * sigma * sigma * (vpy * vpy - vpx * vpx);
        }
    }
    return psi;
}

RunSummary run_chain(const ChainConfig& cfg, const MarginalTarget& target,
                     std::vector<StepRecord>* trace) {
    cfg.validate();
    if (!target.is_normalized())
        throw std::invalid_argument("run_chain: target must be normalized first");
    if (cfg.algo == Algo::mala && !target.has_derivatives())
        throw std::invalid_argument(
            "run_chain: MALA requires a target exposing potential derivatives");
    return target.visit_payload([&](const auto& payload) -> RunSummary {
        using Payload = std::decay_t<decltype(payload)>;
        if (cfg.algo == Algo::mala) {
            if constexpr (detail::HasDrift<Payload>) {
                return detail::run_chain_impl<Payload, true>(cfg, target, payload, trace);
            } else {
                throw std::invalid_argument(
                    "run_chain: MALA requires a target exposing potential derivatives");
            }
        }
        return detail::run_chain_impl<Payload, false>(cfg, target, payload, trace);
    });
}

void PsiPairStats::merge(const PsiPairStats& other) {
    pairs += other.pairs;
    out_of_domain += other.out_of_domain;
    psi.merge(other.psi);
    exp_psi_gap.merge(other.exp_psi_gap);
    swap_linear_gap.merge(other.swap_linear_gap);
    swap_square_gap.merge(other.swap_square_gap);
    taylor_remainder.merge(other.taylor_remainder);
    psi_subset.insert(psi_subset.end(), other.psi_subset.begin(), other.psi_subset.end());
}

namespace {

template <typename Payload, bool UseDrift>
PsiPairStats pair_task(const MarginalTarget& target, const Payload& payload, std::size_t n,
                       double sigma, std::size_t pairs, std::uint64_t seed,
                       std::size_t keep_samples) {
    PsiPairStats stats;
    stats.psi_subset.reserve(keep_samples);
    Rng rng(seed);
    const double lo = target.x_min();
    const double hi = target.x_max();
    const double half_sigma_sq = 0.5 * sigma * sigma;

    for (std::size_t p = 0; p < pairs; ++p) {
        double psi = 0.0;
        bool in_domain = true;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = target.sample_stationary(rng);
            const double z = rng.normal();
            double y = x + sigma * z;
            double vpx = 0.0;
            if constexpr (UseDrift) {
                vpx = payload.v_prime(x);
                y += half_sigma_sq * vpx;
            }
            if (y < lo || y > hi) {
                in_domain = false;
                continue;
            }
            if constexpr (UseDrift) {
                const double w = y - x;
                const double vpy = payload.v_prime(y);
                psi += payload.log_xi(y) - payload.log_xi(x) - 0.5 * w * (vpx + vpy) -
                       0.125 * sigma * sigma * (vpy * vpy - vpx * vpx);
            } else {
                psi += payload.log_xi(y) - payload.log_xi(x);
            }
        }
        ++stats.pairs;
        if (!in_domain) {
            // Psi = -inf pair: contributes exp(Psi) = 0 to the unit identity
            ++stats.out_of_domain;
            stats.exp_psi_gap.add(-1.0);
            continue;
        }
        const double e = std::exp(psi);
        stats.psi.add(psi);
        stats.exp_psi_gap.add(e - 1.0);
        stats.swap_linear_gap.add(-psi * e - psi);
        stats.swap_square_gap.add(psi * psi * e - psi * psi);
        stats.taylor_remainder.add(e - 1.0 - psi - 0.5 * psi * psi);
        if (stats.psi_subset.size() < keep_samples) stats.psi_subset.push_back(psi);
    }
    return stats;
}

}  // namespace

PsiPairStats sample_stationary_pairs(const MarginalTarget& target, Algo algo, std::size_t n,
                                     double sigma, std::size_t num_pairs, std::uint64_t seed,
                                     std::size_t keep_samples, std::size_t num_tasks) {
    if (!target.is_normalized())
        throw std::invalid_argument("sample_stationary_pairs: target must be normalized");
    if (algo == Algo::mala && !target.has_derivatives())
        throw std::invalid_argument("sample_stationary_pairs: MALA requires potential derivatives");
    if (num_tasks == 0) num_tasks = 1;
    if (num_tasks > num_pairs) num_tasks = std::max<std::size_t>(1, num_pairs);

    std::vector<PsiPairStats> per_task(num_tasks);
    const std::size_t base = num_pairs / num_tasks;
    const std::size_t extra = num_pairs % num_tasks;

    target.visit_payload([&](const auto& payload) {
        using Payload = std::decay_t<decltype(payload)>;
        constexpr bool kDrift = detail::HasDrift<Payload>;
        if (algo == Algo::mala && !kDrift)
            throw std::invalid_argument(
                "sample_stationary_pairs: MALA requires potential derivatives");
        const std::size_t keep_per_task = (keep_samples + num_tasks - 1) / num_tasks;
        run_tasks(num_tasks, [&](std::size_t task) {
            const std::size_t pairs = base + (task < extra ? 1 : 0);
            const std::size_t keep = keep_samples ? keep_per_task : 0;
            const std::uint64_t task_seed = derive_seed(seed, task);
            if (algo == Algo::mala) {
                if constexpr (kDrift)
                    per_task[task] = pair_task<Payload, true>(target, payload, n, sigma, pairs,
                                                              task_seed, keep);
            } else {
                per_task[task] = pair_task<Payload, false>(target, payload, n, sigma, pairs,
                                                           task_seed, keep);
            }
        });
    });

    PsiPairStats total;
    for (const auto& part : per_task) total.merge(part);
    if (total.psi_subset.size() > keep_samples) total.psi_subset.resize(keep_samples);
    return total;
}

}
