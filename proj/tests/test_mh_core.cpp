#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "scalinglab/mh_core.hpp"
#include "scalinglab/rng.hpp"
#include "scalinglab/stats.hpp"
#include "scalinglab/targets.hpp"

using namespace scalinglab;

namespace {

MarginalTarget standard_normal_target() {
    return normalize_and_tabulate(
        build_oscillatory(TargetKind::mala_osc, OscParams(0.0, 1.0)), 100001);
}

MarginalTarget osc_mala_target() {
    return normalize_and_tabulate(
        build_oscillatory(TargetKind::mala_osc, OscParams(0.9, 5.0)), 100001);
}

}  // namespace

TEST_CASE("config validation and the default sigma rule") {
    ChainConfig cfg;
    cfg.dimension = 100;
    cfg.ell = 2.0;
    cfg.beta = 0.5;
    cfg.steps = 10;
    CHECK(cfg.sigma() == doctest::Approx(2.0 / 100.0));  // ell * n^{-1/(2 beta)}
    cfg.beta = 1.0;
    CHECK(cfg.sigma() == doctest::Approx(0.2));
    cfg.sigma_override = 0.123;
    CHECK(cfg.sigma() == 0.123);
    cfg.validate();

    ChainConfig bad = cfg;
    bad.steps = 5;
    bad.burn_in = 5;
    CHECK_THROWS(bad.validate());
    bad = cfg;
    bad.dimension = 0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("log MH ratio basics") {
    const auto target = standard_normal_target();
    const std::vector<double> x = {0.0, 1.0};
    CHECK(log_mh_ratio(x, x, 0.3, target, Algo::rwm) == doctest::Approx(0.0));
    CHECK(log_mh_ratio(x, x, 0.3, target, Algo::mala) == doctest::Approx(0.0));

    const std::vector<double> origin = {0.0};
    const std::vector<double> one = {1.0};
    CHECK(log_mh_ratio(origin, one, 0.3, target, Algo::rwm) == doctest::Approx(-0.5));

    const std::vector<double> outside = {9.5};
    CHECK(log_mh_ratio(origin, outside, 0.3, target, Algo::rwm) ==
          -std::numeric_limits<double>::infinity());

    const auto rough = normalize_and_tabulate(
        build_oscillatory(TargetKind::rwm_osc, OscParams(0.25, 30.0)), 100001);
    CHECK_THROWS(log_mh_ratio(origin, one, 0.3, rough, Algo::mala));
}

TEST_CASE("MALA ratio equals the direct density-ratio expression") {
    const auto target = osc_mala_target();
    Rng rng(31);
    auto log_q = [&](double from, double to, double sigma) {
        const double mean = from + 0.5 * sigma * sigma * target.v_prime(from);
        const double d = to - mean;
        return -0.5 * d * d / (sigma * sigma) - std::log(sigma) - 0.5 * kLog2Pi;
    };
    for (int k = 0; k < 100; ++k) {
        const double x = -2.5 + 5.0 * rng.uniform();
        const double z = rng.normal();
        const double sigma = 0.05 + 0.6 * rng.uniform();
        const double y = x + 0.5 * sigma * sigma * target.v_prime(x) + sigma * z;
        if (!target.in_domain(y)) continue;
        const std::vector<double> xs = {x}, ys = {y};
        const double direct =
            target.log_xi(y) + log_q(y, x, sigma) - target.log_xi(x) - log_q(x, y, sigma);
        CHECK(log_mh_ratio(xs, ys, sigma, target, Algo::mala) ==
              doctest::Approx(direct).epsilon(1e-10));
        // antisymmetry under swapping the pair
        CHECK(log_mh_ratio(ys, xs, sigma, target, Algo::mala) ==
              doctest::Approx(-log_mh_ratio(xs, ys, sigma, target, Algo::mala)).epsilon(1e-12));
    }
}

TEST_CASE("proposal helpers") {
    const auto target = standard_normal_target();
    {
        // degenerate scale: proposal collapses onto the state
        Rng rng(3);
        const std::vector<double> state = {0.3, -1.2, 4.0};
        const auto prop = rwm_propose(state, 1e-12, rng);
        for (std::size_t i = 0; i < state.size(); ++i)
            CHECK(prop[i] == doctest::Approx(state[i]).epsilon(1e-9));
    }
    {
        // moment check over 1e6 draws
        Rng rng(4);
        const std::vector<double> state = {0.0};
        RunningMoments disp;
        for (int k = 0; k < 1000000; ++k) disp.add(rwm_propose(state, 0.7, rng)[0]);
        CHECK(std::abs(disp.mean()) < 4.0 * disp.std_error());
        CHECK(disp.variance() == doctest::Approx(0.49).epsilon(0.01));
    }
    {
        // MALA drift on the standard normal: (sigma^2/2) V'(1) = -0.005
        Rng rng(5);
        const std::vector<double> state = {1.0};
        RunningMoments disp;
        for (int k = 0; k < 200000; ++k)
            disp.add(mala_propose(state, 0.1, target, rng)[0] - 1.0);
        CHECK(std::abs(disp.mean() + 0.005) < 4.0 * disp.std_error());

        Rng r1(6), r2(6);
        CHECK(mala_propose(state, 0.1, target, r1) == mala_propose(state, 0.1, target, r2));

        const auto rough = normalize_and_tabulate(
            build_oscillatory(TargetKind::rwm_osc, OscParams(0.25, 30.0)), 100001);
        CHECK_THROWS(mala_propose(state, 0.1, rough, rng));
    }
}

TEST_CASE("vanishing proposals are always accepted") {
    const auto target = standard_normal_target();
    ChainConfig cfg;
    cfg.algo = Algo::rwm;
    cfg.dimension = 10;
    cfg.ell = 1.0;
    cfg.sigma_override = 1e-12;
    cfg.steps = 2000;
    cfg.burn_in = 10;
    cfg.seed = 1;
    const auto run = run_chain(cfg, target);
    CHECK(run.acceptance_rate == doctest::Approx(1.0));
    CHECK(run.psi_var < 1e-20);  // degenerate proposals carry no log-ratio spread
}

TEST_CASE("classical acceptance anchor at proposal variance 2.38^2/n") {
    const auto target = standard_normal_target();
    ChainConfig cfg;
    cfg.algo = Algo::rwm;
    cfg.dimension = 100;
    cfg.ell = 2.38;
    cfg.beta = 1.0;  // sigma = 2.38 / sqrt(n)
    cfg.steps = 100000;
    cfg.burn_in = 1000;
    cfg.seed = 7;
    const auto run = run_chain(cfg, target);
    CHECK(run.acceptance_rate == doctest::Approx(0.234).epsilon(0.09));
    // indicator estimate agrees with the mean of min(1, e^Psi)
    CHECK(std::abs(run.acceptance_rate - run.accept_prob_mean) < 0.006);
}

TEST_CASE("runs are reproducible") {
    const auto target = osc_mala_target();
    ChainConfig cfg;
    cfg.algo = Algo::mala;
    cfg.dimension = 25;
    cfg.ell = 1.68;
    cfg.beta = 3.0;
    cfg.steps = 20000;
    cfg.burn_in = 500;
    cfg.seed = 12345;
    cfg.acf_max_lag = 20;
    const auto a = run_chain(cfg, target);
    const auto b = run_chain(cfg, target);
    CHECK(a.acceptance_rate == b.acceptance_rate);
    CHECK(a.esjd_coord == b.esjd_coord);
    CHECK(a.esjd_full == b.esjd_full);
    CHECK(a.psi_mean == b.psi_mean);
    CHECK(a.psi_var == b.psi_var);
    CHECK(a.acf == b.acf);
    CHECK(a.init == "stationary_table");
}

TEST_CASE("esjd bookkeeping: full vector is about n times the coordinate") {
    const auto target = standard_normal_target();
    ChainConfig cfg;
    cfg.algo = Algo::rwm;
    cfg.dimension = 50;
    cfg.ell = 2.38;
    cfg.beta = 1.0;
    cfg.steps = 50000;
    cfg.burn_in = 500;
    cfg.seed = 3;
    const auto run = run_chain(cfg, target);
    CHECK(run.esjd_full ==
          doctest::Approx(run.esjd_coord * static_cast<double>(cfg.dimension)).epsilon(0.1));
}

TEST_CASE("stationary pair identities (Prop-style, 4 s.e.)") {
    const auto target = normalize_and_tabulate(
        build_oscillatory(TargetKind::rwm_osc, OscParams(0.25, 30.0)), 100001);
    const auto stats = sample_stationary_pairs(target, Algo::rwm, 20, 0.12, 300000, 99, 5000);
    CHECK(stats.pairs == 300000);
    CHECK(stats.out_of_domain == 0);
    CHECK(std::abs(stats.exp_psi_gap.mean()) < 4.0 * stats.exp_psi_gap.std_error());
    CHECK(std::abs(stats.swap_linear_gap.mean()) < 4.0 * stats.swap_linear_gap.std_error());
    CHECK(std::abs(stats.swap_square_gap.mean()) < 4.0 * stats.swap_square_gap.std_error());
    CHECK(stats.psi_subset.size() == 5000);

    // MALA flavor of the same identities
    const auto mala_stats =
        sample_stationary_pairs(osc_mala_target(), Algo::mala, 10, 0.3, 200000, 17);
    CHECK(std::abs(mala_stats.exp_psi_gap.mean()) < 4.0 * mala_stats.exp_psi_gap.std_error());
    CHECK(std::abs(mala_stats.swap_linear_gap.mean()) <
          4.0 * mala_stats.swap_linear_gap.std_error());
}

TEST_CASE("pair sampling does not depend on the worker pool width") {
    const auto target = standard_normal_target();
    const auto a = sample_stationary_pairs(target, Algo::rwm, 5, 0.2, 10001, 7, 100, 8);
    const auto b = sample_stationary_pairs(target, Algo::rwm, 5, 0.2, 10001, 7, 100, 8);
    CHECK(a.psi.mean() == b.psi.mean());
    CHECK(a.psi.variance() == b.psi.variance());
    CHECK(a.psi_subset == b.psi_subset);
}
