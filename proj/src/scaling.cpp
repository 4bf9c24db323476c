#include "scalinglab/scaling.hpp"

#include <cmath>
#include <stdexcept>

#include "scalinglab/stats.hpp"

namespace scalinglab {

namespace {

double log_normal_pdf(double a) { return -0.5 * a * a - 0.5 * kLog2Pi; }

// log(a phi(a) / Phi(-a)) - log(2/beta); strictly increasing in a
double stationarity_gap(double a, double beta) {
    return std::log(a) + log_normal_pdf(a) - log_normal_cdf(-a) - std::log(2.0 / beta);
}

}  // namespace

OptimalTuning solve_optimal_a(double beta, std::optional<double> theta) {
    if (!(beta > 0.0)) throw std::invalid_argument("solve_optimal_a: beta must be positive");

    double lo = 1e-12;
    double hi = 1.0;
    int expansions = 0;
    while (stationarity_gap(hi, beta) < 0.0) {
        hi *= 2.0;
        if (++expansions > 60)
            throw std::runtime_error("solve_optimal_a: bracket expansion failed");
    }
    for (int iter = 0; iter < 200 && (hi - lo) > 1e-15 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (stationarity_gap(mid, beta) < 0.0 ? lo : hi) = mid;
    }
    const double a = 0.5 * (lo + hi);

    const double residual = 2.0 * normal_cdf(-a) - beta * a * normal_pdf(a);
    if (std::abs(residual) > 1e-10)
        throw std::runtime_error("solve_optimal_a: residual above 1e-10");

    OptimalTuning out;
    out.beta = beta;
    out.a_star = a;
    out.acceptance_star = 2.0 * normal_cdf(-a);
    if (theta) {
        if (!(*theta > 0.0)) throw std::invalid_argument("solve_optimal_a: theta must be positive");
        out.ell_star_given_theta = std::pow(2.0 * a / *theta, 1.0 / beta);
    }
    return out;
}

double speed_W(double ell, double beta, double theta) {
    if (!(ell > 0.0 && beta > 0.0 && theta > 0.0))
        throw std::invalid_argument("speed_W: ell, beta, theta must be positive");
    return 2.0 * ell * ell * normal_cdf(-0.5 * std::pow(ell, beta) * theta);
}

std::vector<Figure1Row> figure1_curve(Algo component, const std::vector<double>& h_grid) {
    std::vector<Figure1Row> rows;
    rows.reserve(h_grid.size());
    for (double h : h_grid) {
        if (!(h > 0.0 && h < 1.0))
            throw std::invalid_argument("figure1_curve: H grid must lie in (0,1)");
        const double beta = component == Algo::rwm ? h : 2.0 + h;
        rows.push_back({h, beta, solve_optimal_a(beta).acceptance_star});
    }
    return rows;
}

SweepResult ell_sweep(const ChainConfig& base, const MarginalTarget& target,
                      const std::vector<double>& ells, std::size_t replicas,
                      const std::function<double(double)>& sigma_of_ell) {
    if (ells.empty()) throw std::invalid_argument("ell_sweep: empty ell list");
    if (replicas == 0) throw std::invalid_argument("ell_sweep: need at least one replica");

    const std::size_t total = ells.size() * replicas;
    std::vector<RunSummary> runs(total);
    run_tasks(total, [&](std::size_t task) {
        ChainConfig cfg = base;
        cfg.ell = ells[task / replicas];
        if (sigma_of_ell) cfg.sigma_override = sigma_of_ell(cfg.ell);
        cfg.seed = derive_seed(base.seed, task);
        runs[task] = run_chain(cfg, target);
    });

    SweepResult result;
    result.rows.reserve(ells.size());
    for (std::size_t e = 0; e < ells.size(); ++e) {
        RunningMoments acc, coord, full;
        double psi_mean = 0.0, psi_var = 0.0, sigma = 0.0;
        for (std::size_t r = 0; r < replicas; ++r) {
            const RunSummary& run = runs[e * replicas + r];
            acc.add(run.acceptance_rate);
            coord.add(run.esjd_coord);
            full.add(run.esjd_full);
            psi_mean += run.psi_mean;
            psi_var += run.psi_var;
            sigma = run.sigma;
        }
        SweepRow row;
        row.ell = ells[e];
        row.sigma = sigma;
        row.replicas = replicas;
        row.acceptance_mean = acc.mean();
        row.acceptance_se = acc.std_error();
        row.esjd_coord_mean = coord.mean();
        row.esjd_coord_se = coord.std_error();
        row.esjd_full_mean = full.mean();
        row.esjd_full_se = full.std_error();
        row.psi_mean = psi_mean / static_cast<double>(replicas);
        row.psi_var = psi_var / static_cast<double>(replicas);
        result.rows.push_back(row);
    }

    auto best = [&](auto field) {
        std::size_t arg = 0;
        for (std::size_t i = 1; i < result.rows.size(); ++i)
            if (field(result.rows[i]) > field(result.rows[arg])) arg = i;
        return result.rows[arg].ell;
    };
    result.ell_argmax_esjd_coord = best([](const SweepRow& r) { return r.esjd_coord_mean; });
    result.ell_argmax_esjd_full = best([](const SweepRow& r) { return r.esjd_full_mean; });
    return result;
}

}
