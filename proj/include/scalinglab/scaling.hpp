#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "scalinglab/mh_core.hpp"

namespace scalinglab {

/// Solution of the ESJD stationarity equation 2 Phi(-a) - beta a phi(-a) = 0.
struct OptimalTuning {
    double beta = 0.0;
    double a_star = 0.0;
    double acceptance_star = 0.0;  // 2 Phi(-a_star)
    std::optional<double> ell_star_given_theta;
};

/// Unique positive root of 2 Phi(-a) = beta a phi(-a), found by bisection on
/// the strictly increasing a phi(-a)/Phi(-a) in log space; residual < 1e-10.
/// When theta is given, also reports ell* from a* = ell*^beta theta / 2.
OptimalTuning solve_optimal_a(double beta, std::optional<double> theta = std::nullopt);

/// ESJD speed proxy W(ell) = 2 ell^2 Phi(-ell^beta theta / 2).
double speed_W(double ell, double beta, double theta);

struct Figure1Row {
    double hurst = 0.0;
    double beta = 0.0;
    double acceptance_star = 0.0;
};

/// Optimal acceptance against H: beta = H for the RWM branch and 2 + H for
/// the MALA branch, both from the same stationarity equation.
std::vector<Figure1Row> figure1_curve(Algo component, const std::vector<double>& h_grid);

struct SweepRow {
    double ell = 0.0;
    double sigma = 0.0;
    std::size_t replicas = 0;
    double acceptance_mean = 0.0;
    double acceptance_se = 0.0;
    double esjd_coord_mean = 0.0;
    double esjd_coord_se = 0.0;
    double esjd_full_mean = 0.0;
    double esjd_full_se = 0.0;
    double psi_mean = 0.0;
    double psi_var = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    double ell_argmax_esjd_coord = 0.0;
    double ell_argmax_esjd_full = 0.0;
};

/// Runs `replicas` chains per ell value (seeds derived from base.seed and the
/// task index; tasks fan out to the worker pool) and aggregates mean +/- SE.
/// sigma_of_ell, when given, pins the proposal scale per ell; otherwise the
/// ChainConfig default sigma(ell, n, beta) applies.
SweepResult ell_sweep(const ChainConfig& base, const MarginalTarget& target,
                      const std::vector<double>& ells, std::size_t replicas,
                      const std::function<double(double)>& sigma_of_ell = nullptr);

}
