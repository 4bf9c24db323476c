// Command-line front end: environment generation, the optimal-acceptance
// solver, single runs, ell sweeps, the desk-scale table experiments and the
// invariant check suite.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "scalinglab/diagnostics.hpp"
#include "scalinglab/experiment_io.hpp"
#include "scalinglab/fbm.hpp"
#include "scalinglab/mh_core.hpp"
#include "scalinglab/quadrature.hpp"
#include "scalinglab/scaling.hpp"
#include "scalinglab/targets.hpp"
#include "scalinglab/version.hpp"

namespace sl = scalinglab;

namespace {

struct TargetOptions {
    std::string kind = "rwm_osc";
    double hurst = 0.5;
    double c = 0.1;
    double osc_a = 0.25;
    double osc_b = 30.0;
    double x_min = -9.0;
    double x_max = 9.0;
    std::size_t grid_points = 200001;
    std::uint64_t env_seed = 1;
    std::string path_file;
    std::size_t resolution = 100001;
};

void add_target_flags(CLI::App* cmd, TargetOptions& opt) {
    cmd->add_option("--target", opt.kind, "rwm_rough|mala_rough|rwm_osc|mala_osc");
    cmd->add_option("--hurst", opt.hurst, "Hurst exponent of the environment");
    cmd->add_option("--c", opt.c, "localisation constant (mala_rough)");
    cmd->add_option("--a", opt.osc_a, "oscillation amplitude (osc targets)");
    cmd->add_option("--b", opt.osc_b, "oscillation frequency (osc targets)");
    cmd->add_option("--xmin", opt.x_min, "domain lower end");
    cmd->add_option("--xmax", opt.x_max, "domain upper end");
    cmd->add_option("--points", opt.grid_points, "environment grid nodes");
    cmd->add_option("--env-seed", opt.env_seed, "environment seed");
    cmd->add_option("--path-file", opt.path_file, "pre-simulated environment CSV");
    cmd->add_option("--resolution", opt.resolution, "CDF table resolution");
}

sl::MarginalTarget build_target(const TargetOptions& opt) {
    auto make_path = [&]() {
        if (!opt.path_file.empty()) return sl::read_fbm_csv(opt.path_file);
        sl::GridSpec grid(opt.x_min, opt.x_max, opt.grid_points);
        return sl::sample_fbm_circulant(grid, sl::HurstExponent(opt.hurst), opt.env_seed);
    };
    if (opt.kind == "rwm_rough")
        return sl::normalize_and_tabulate(sl::build_rwm_rough(make_path()), opt.resolution);
    if (opt.kind == "mala_rough") {
        sl::FbmPath path = make_path();
        sl::LocalisationParams loc(opt.c, sl::HurstExponent(path.hurst()));
        return sl::normalize_and_tabulate(sl::build_mala_rough(std::move(path), loc),
                                          opt.resolution);
    }
    if (opt.kind == "rwm_osc" || opt.kind == "mala_osc") {
        const auto kind =
            opt.kind == "rwm_osc" ? sl::TargetKind::rwm_osc : sl::TargetKind::mala_osc;
        return sl::normalize_and_tabulate(
            sl::build_oscillatory(kind, sl::OscParams(opt.osc_a, opt.osc_b), opt.x_min,
                                  opt.x_max),
            opt.resolution);
    }
    throw CLI::ValidationError("--target", "unknown target kind '" + opt.kind + "'");
}

std::string slurp_file(const std::string& filename) {
    std::ifstream in(filename);
    if (!in) throw std::runtime_error("cannot read spec file " + filename);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

sl::InitKind parse_init(const std::string& name) {
    if (name == "point") return sl::InitKind::point;
    if (name == "burn_in_only") return sl::InitKind::burn_in_only;
    if (name == "stationary_table") return sl::InitKind::stationary_table;
    throw CLI::ValidationError("--init", "must be stationary_table|point|burn_in_only");
}

TargetOptions target_options_from_spec(const sl::ExperimentSpec& spec) {
    TargetOptions opt;
    opt.kind = spec.target_kind;
    opt.hurst = spec.hurst;
    opt.c = spec.c;
    opt.osc_a = spec.osc_a;
    opt.osc_b = spec.osc_b;
    opt.x_min = spec.x_min;
    opt.x_max = spec.x_max;
    opt.grid_points = spec.grid_points;
    opt.env_seed = spec.env_seed;
    opt.path_file = spec.path_file;
    return opt;
}

double sigma_for_convention(const std::string& convention, double ell, std::size_t n,
                            double beta) {
    const double rate = std::pow(static_cast<double>(n), -1.0 / beta);
    if (convention == "ell2") return ell * std::sqrt(rate);
    if (convention == "ell") return std::sqrt(ell * rate);
    throw CLI::ValidationError("--convention", "must be ell2 or ell");
}

sl::CsvTable sweep_table(const sl::MarginalTarget& target, sl::Algo algo, double hurst, double c,
                         std::size_t n, std::uint64_t seed, long steps,
                         const sl::SweepResult& sweep) {
    sl::CsvTable table;
    table.columns = {"algo", "kind", "H", "c", "n", "ell", "sigma", "acceptance", "esjd_coord",
                     "esjd_full", "psi_mean", "psi_var", "seed", "steps"};
    for (const auto& row : sweep.rows)
        table.rows.push_back({sl::to_string(algo), sl::to_string(target.kind()),
                              sl::format_number(hurst), sl::format_number(c), std::to_string(n),
                              sl::format_number(row.ell), sl::format_number(row.sigma),
                              sl::format_number(row.acceptance_mean),
                              sl::format_number(row.esjd_coord_mean),
                              sl::format_number(row.esjd_full_mean),
                              sl::format_number(row.psi_mean), sl::format_number(row.psi_var),
                              std::to_string(seed), std::to_string(steps)});
    return table;
}

void emit_figures(const std::string& stem, const sl::MarginalTarget& target,
                  const sl::ChainConfig& base, double sigma_low, double sigma_high,
                  double ell_low, double ell_high, const std::vector<std::string>& provenance) {
    // ACF + trace data for the two highlighted tunings, trace/ACF figure style
    sl::ChainConfig cfg = base;
    cfg.acf_max_lag = 100;
    cfg.thin = 10;

    cfg.ell = ell_low;
    cfg.sigma_override = sigma_low;
    std::vector<sl::StepRecord> trace_low;
    const sl::RunSummary low = run_chain(cfg, target, &trace_low);

    cfg.ell = ell_high;
    cfg.sigma_override = sigma_high;
    cfg.seed = sl::derive_seed(base.seed, 1);
    std::vector<sl::StepRecord> trace_high;
    const sl::RunSummary high = run_chain(cfg, target, &trace_high);

    sl::CsvTable acf;
    acf.columns = {"lag", "acf_ell_low", "acf_ell_high"};
    for (std::size_t lag = 0; lag < low.acf.size(); ++lag)
        acf.rows.push_back({std::to_string(lag), sl::format_number(low.acf[lag]),
                            sl::format_number(high.acf[lag])});
    write_csv_with_provenance(stem + "_acf.csv", provenance, acf);
    sl::write_plot_script(stem + "_acf.plt", "first-coordinate autocorrelation", stem + "_acf.csv",
                      {{"lag", "acf_ell_low", "ell=" + sl::format_number(ell_low)},
                       {"lag", "acf_ell_high", "ell=" + sl::format_number(ell_high)}});

    sl::CsvTable trace;
    trace.columns = {"step", "coord1_ell_low", "coord1_ell_high"};
    const std::size_t rows = std::min(trace_low.size(), trace_high.size());
    for (std::size_t i = 0; i < rows; ++i)
        trace.rows.push_back({std::to_string(trace_low[i].step),
                              sl::format_number(trace_low[i].coord1),
                              sl::format_number(trace_high[i].coord1)});
    write_csv_with_provenance(stem + "_trace.csv", provenance, trace);
    sl::write_plot_script(stem + "_trace.plt", "first-coordinate trace", stem + "_trace.csv",
                      {{"step", "coord1_ell_low", "ell=" + sl::format_number(ell_low)},
                       {"step", "coord1_ell_high", "ell=" + sl::format_number(ell_high)}});
}

int run_checks(bool quick) {
    int failures = 0;
    auto check = [&](const char* name, bool ok, const std::string& detail) {
        std::printf("[%s] %s%s%s\n", ok ? "ok" : "FAIL", name, detail.empty() ? "" : ": ",
                    detail.c_str());
        if (!ok) ++failures;
    };
    char buf[256];

    // localisation properties
    {
        const sl::LocalisationParams loc(0.1, sl::HurstExponent(0.5));
        bool bounded = sl::localisation(0.0, loc) == 1.0;
        bool growth = true;
        double lip_max = 0.0;
        double prev_x = -6.0, prev_v = sl::localisation(-6.0, loc);
        for (double x = -6.0 + 1e-3; x <= 6.0; x += 1e-3) {
            const double v = sl::localisation(x, loc);
            bounded = bounded && v > 0.0 && v <= 1.0;
            growth = growth && std::abs(x) * v <= 0.1 + 1e-12;  // |x|^{2H} with H = 1/2
            lip_max = std::max(lip_max, std::abs(v - prev_v) / (x - prev_x));
            prev_x = x;
            prev_v = v;
        }
        const double lip_bound = 3.0 / 0.1;  // 3 c^{-1/(2H)}
        std::snprintf(buf, sizeof(buf), "sup slope %.3f <= %.3f", lip_max, lip_bound);
        check("localisation bounded/growth/Lipschitz", bounded && growth && lip_max <= lip_bound,
              buf);
    }

    // kernel integral closed form
    {
        double worst = 0.0;
        for (double h = 0.1; h < 0.95; h += 0.1) {
            const double numeric = sl::mn_variance_kernel(sl::HurstExponent(h));
            const double closed = -h / (2.0 + 7.0 * h + 7.0 * h * h + 2.0 * h * h * h);
            worst = std::max(worst, std::abs(numeric - closed));
        }
        std::snprintf(buf, sizeof(buf), "max |quad - closed| = %.2e", worst);
        check("variance kernel integral", worst < 1e-6, buf);
    }

    // sigma2 closed forms against the double-integral representation
    {
        bool ok = true;
        for (double h : {0.3, 0.5, 0.8}) {
            const double moment = sl::tanh_sinh(
                [&](double z) { return 2.0 * std::pow(z, 2.0 * h) * sl::normal_pdf(z); }, 0.0,
                40.0);
            ok = ok && std::abs(sl::sigma2_rwm(sl::HurstExponent(h), 1.3) -
                                std::pow(1.3, 2.0 * h) * moment) < 1e-8;
            const double moment_mala = sl::tanh_sinh(
                [&](double z) { return 2.0 * std::pow(z, 4.0 + 2.0 * h) * sl::normal_pdf(z); },
                0.0, 40.0);
            const double rational = h / (2.0 + 7.0 * h + 7.0 * h * h + 2.0 * h * h * h);
            const double via_h =
                std::pow(1.1, 4.0 + 2.0 * h) * 0.5 * rational * 0.37 * moment_mala;
            ok = ok &&
                 std::abs(sl::sigma2_mala(sl::HurstExponent(h), 1.1, 0.37) - via_h) / via_h <
                     1e-6;
        }
        check("sigma2 closed forms vs quadrature", ok, "");
    }

    // W substitution identity
    {
        bool ok = true;
        for (double beta : {0.5, 1.0, 3.0}) {
            const auto tuning = sl::solve_optimal_a(beta);
            const double theta = 1.7;
            double best_w = -1.0, best_ell = 0.0;
            for (int i = 0; i < 10000; ++i) {
                const double ell = std::pow(10.0, -3.0 + 6.0 * i / 9999.0);
                const double w = sl::speed_W(ell, beta, theta);
                if (w > best_w) {
                    best_w = w;
                    best_ell = ell;
                }
            }
            const double acc = 2.0 * sl::normal_cdf(-0.5 * std::pow(best_ell, beta) * theta);
            ok = ok && std::abs(acc - tuning.acceptance_star) < 1e-3;
        }
        check("W(ell) argmax recovers 2 Phi(-a*)", ok, "");
    }

    // detailed-balance identities on a smooth target
    {
        const auto target = sl::normalize_and_tabulate(
            sl::build_oscillatory(sl::TargetKind::rwm_osc, sl::OscParams(0.25, 30.0)), 100001);
        const std::size_t pairs = quick ? 100000 : 1000000;
        const auto stats =
            sl::sample_stationary_pairs(target, sl::Algo::rwm, 20, 0.1, pairs, 20260810);
        const double z_unit = std::abs(stats.exp_psi_gap.mean()) /
                              std::max(stats.exp_psi_gap.std_error(), 1e-300);
        const double z_lin = std::abs(stats.swap_linear_gap.mean()) /
                             std::max(stats.swap_linear_gap.std_error(), 1e-300);
        const double z_sq = std::abs(stats.swap_square_gap.mean()) /
                            std::max(stats.swap_square_gap.std_error(), 1e-300);
        std::snprintf(buf, sizeof(buf), "|z| = %.2f, %.2f, %.2f", z_unit, z_lin, z_sq);
        check("stationary identities E[e^Psi]=1, swap f=t, f=t^2 (4 s.e.)",
              z_unit < 4.0 && z_lin < 4.0 && z_sq < 4.0, buf);
    }

    // acceptance-rate consistency on a classical control chain
    {
        const auto target = sl::normalize_and_tabulate(
            sl::build_oscillatory(sl::TargetKind::rwm_osc, sl::OscParams(0.0, 1.0)), 100001);
        sl::ChainConfig cfg;
        cfg.algo = sl::Algo::rwm;
        cfg.dimension = 100;
        cfg.ell = 2.38;
        cfg.beta = 1.0;
        cfg.steps = quick ? 20000 : 100000;
        cfg.burn_in = 1000;
        cfg.seed = 7;
        const auto run = run_chain(cfg, target);
        const double se = std::sqrt(2.0 * run.acceptance_rate * (1.0 - run.acceptance_rate) /
                                    static_cast<double>(cfg.steps));
        std::snprintf(buf, sizeof(buf), "indicator %.4f vs min(1,e^Psi) %.4f",
                      run.acceptance_rate, run.accept_prob_mean);
        check("acceptance estimator consistency (3 s.e.)",
              std::abs(run.acceptance_rate - run.accept_prob_mean) < 3.0 * se + 1e-3, buf);
        check("classical 0.234 anchor", run.acceptance_rate > 0.21 && run.acceptance_rate < 0.26,
              buf);
    }

    // fBM generator distributional match on a small grid
    {
        const sl::GridSpec grid(-2.0, 2.0, 9);
        const sl::HurstExponent hurst(0.7);
        const std::size_t reps = quick ? 20000 : 100000;
        sl::CirculantFbmSampler sampler(grid, hurst);
        std::vector<double> acc(grid.num_points() * grid.num_points(), 0.0);
        for (std::size_t r = 0; r < reps; ++r) {
            const auto path = sampler.sample(sl::derive_seed(99, r));
            for (std::size_t i = 0; i < grid.num_points(); ++i)
                for (std::size_t j = 0; j <= i; ++j)
                    acc[i * grid.num_points() + j] += path.values()[i] * path.values()[j];
        }
        double worst_z = 0.0;
        for (std::size_t i = 0; i < grid.num_points(); ++i)
            for (std::size_t j = 0; j <= i; ++j) {
                const double gij = sl::fbm_covariance(grid.node(i), grid.node(j), hurst);
                const double gii = sl::fbm_covariance(grid.node(i), grid.node(i), hurst);
                const double gjj = sl::fbm_covariance(grid.node(j), grid.node(j), hurst);
                const double se =
                    std::sqrt((gii * gjj + gij * gij) / static_cast<double>(reps));
                if (se == 0.0) continue;
                worst_z = std::max(worst_z,
                                   std::abs(acc[i * grid.num_points() + j] /
                                                static_cast<double>(reps) -
                                            gij) /
                                       se);
            }
        std::snprintf(buf, sizeof(buf), "max |z| = %.2f over the small grid", worst_z);
        check("circulant covariance vs formula (small grid)", worst_z < 4.0, buf);
    }

    std::printf("%s\n", failures == 0 ? "all checks passed" : "CHECKS FAILED");
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(sl::kVersion) +
                 " - anomalous Metropolis-Hastings scaling laboratory"};
    app.require_subcommand(1);

    // ---- fbm ----------------------------------------------------------
    auto* fbm_cmd = app.add_subcommand("fbm", "generate and export an fBM environment path");
    double fbm_hurst = 0.5;
    double fbm_xmin = -9.0, fbm_xmax = 9.0;
    std::size_t fbm_points = 200001;
    std::uint64_t fbm_seed = 1;
    std::string fbm_out = "fbm.csv";
    std::string fbm_method = "circulant";
    fbm_cmd->add_option("--hurst", fbm_hurst, "Hurst exponent");
    fbm_cmd->add_option("--points", fbm_points, "grid nodes");
    fbm_cmd->add_option("--xmin", fbm_xmin, "grid lower end");
    fbm_cmd->add_option("--xmax", fbm_xmax, "grid upper end");
    fbm_cmd->add_option("--seed", fbm_seed, "generator seed");
    fbm_cmd->add_option("--out", fbm_out, "output CSV");
    fbm_cmd->add_option("--method", fbm_method, "circulant|cholesky");

    // ---- solve --------------------------------------------------------
    auto* solve_cmd = app.add_subcommand("solve", "optimal a and acceptance rate for beta");
    double solve_beta = 1.0;
    double solve_theta = 0.0;
    std::string solve_out;
    solve_cmd->add_option("--beta", solve_beta, "smoothness exponent")->required();
    solve_cmd->add_option("--theta", solve_theta, "environment constant for ell*");
    solve_cmd->add_option("--out", solve_out, "optional CSV (beta,a_star,acceptance_star)");

    // ---- figure1 ------------------------------------------------------
    auto* fig_cmd = app.add_subcommand("figure1", "optimal acceptance curves over H");
    std::string fig_out = "figure1.csv";
    std::size_t fig_points = 99;
    fig_cmd->add_option("--out", fig_out, "output CSV");
    fig_cmd->add_option("--points", fig_points, "H grid size");

    // ---- run ----------------------------------------------------------
    auto* run_cmd = app.add_subcommand("run", "single product-target chain");
    TargetOptions run_target;
    add_target_flags(run_cmd, run_target);
    std::string run_algo = "rwm";
    std::size_t run_dim = 100;
    double run_ell = 1.0;
    double run_beta = 1.0;
    std::string run_convention = "ell2";
    long run_steps = 100000, run_burnin = 10000, run_thin = 0;
    std::uint64_t run_seed = 1;
    std::string run_init = "stationary_table";
    std::string run_out = "run.csv", run_trace;
    run_cmd->add_option("--algo", run_algo, "rwm|mala");
    run_cmd->add_option("--dim", run_dim, "dimension n");
    run_cmd->add_option("--ell", run_ell, "proposal scale ell");
    run_cmd->add_option("--beta", run_beta, "scaling exponent beta");
    run_cmd->add_option("--convention", run_convention, "ell2|ell proposal variance convention");
    run_cmd->add_option("--steps", run_steps, "post burn-in steps");
    run_cmd->add_option("--burnin", run_burnin, "burn-in steps");
    run_cmd->add_option("--thin", run_thin, "trace thinning (0: no trace)");
    run_cmd->add_option("--seed", run_seed, "chain seed");
    run_cmd->add_option("--init", run_init, "stationary_table|point|burn_in_only");
    run_cmd->add_option("--out", run_out, "summary CSV");
    run_cmd->add_option("--trace", run_trace, "trace CSV (needs --thin)");
    std::string run_spec_file;
    run_cmd->add_option("--spec", run_spec_file,
                        "experiment spec file (key=value; replaces the other flags)");

    // ---- sweep --------------------------------------------------------
    auto* sweep_cmd = app.add_subcommand("sweep", "ell sweep with replicas");
    TargetOptions sweep_target;
    add_target_flags(sweep_cmd, sweep_target);
    std::string sweep_algo = "rwm";
    std::size_t sweep_dim = 100;
    double sweep_beta = 1.0;
    std::string sweep_convention = "ell2";
    long sweep_steps = 100000, sweep_burnin = 1000;
    std::uint64_t sweep_seed = 1;
    std::size_t sweep_replicas = 1;
    std::vector<double> sweep_ells;
    std::string sweep_out = "sweep.csv";
    std::string sweep_init = "stationary_table";
    sweep_cmd->add_option("--algo", sweep_algo, "rwm|mala");
    sweep_cmd->add_option("--dim", sweep_dim, "dimension n");
    sweep_cmd->add_option("--beta", sweep_beta, "scaling exponent beta");
    sweep_cmd->add_option("--convention", sweep_convention, "ell2|ell");
    sweep_cmd->add_option("--steps", sweep_steps, "post burn-in steps");
    sweep_cmd->add_option("--burnin", sweep_burnin, "burn-in steps");
    sweep_cmd->add_option("--seed", sweep_seed, "master seed");
    sweep_cmd->add_option("--replicas", sweep_replicas, "replicas per ell");
    sweep_cmd->add_option("--ells", sweep_ells, "ell values")->delimiter(',');
    sweep_cmd->add_option("--init", sweep_init, "stationary_table|point|burn_in_only");
    sweep_cmd->add_option("--out", sweep_out, "output CSV");
    std::string sweep_spec_file;
    sweep_cmd->add_option("--spec", sweep_spec_file,
                          "experiment spec file (key=value; replaces the other flags)");

    // ---- tables -------------------------------------------------------
    struct TableOptions {
        long steps = 100000;
        long burnin = 10000;
        std::uint64_t seed = 1;
        std::string out;
        bool long_run = false;
        std::string path_file;
    };
    TableOptions t1, t2, t3;
    auto add_table_flags = [](CLI::App* cmd, TableOptions& opt, const char* def_out,
                              long def_burnin) {
        opt.out = def_out;
        opt.burnin = def_burnin;
        cmd->add_option("--steps", opt.steps, "post burn-in steps");
        cmd->add_option("--burnin", opt.burnin, "burn-in steps");
        cmd->add_option("--seed", opt.seed, "master seed");
        cmd->add_option("--out", opt.out, "output CSV");
        cmd->add_flag("--long", opt.long_run, "use 1e6 steps");
    };
    auto* t1_cmd = app.add_subcommand("table1", "rough RWM experiment (H=1/2 environment)");
    add_table_flags(t1_cmd, t1, "table1.csv", 10000);  // standard-normal start, large burn-in
    t1_cmd->add_option("--path-file", t1.path_file, "pre-simulated environment CSV");
    auto* t2_cmd = app.add_subcommand("table2", "oscillatory RWM experiment (a=0.25, b=30)");
    add_table_flags(t2_cmd, t2, "table2.csv", 1000);  // stationary start
    auto* t3_cmd = app.add_subcommand("table3", "oscillatory MALA experiment (a=0.9, b=5)");
    add_table_flags(t3_cmd, t3, "table3.csv", 1000);

    // ---- checks -------------------------------------------------------
    auto* checks_cmd = app.add_subcommand("checks", "identity and invariant suite");
    bool checks_quick = false;
    checks_cmd->add_flag("--quick", checks_quick, "reduced sample sizes");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fbm_cmd->parsed()) {
            sl::GridSpec grid(fbm_xmin, fbm_xmax, fbm_points);
            const sl::HurstExponent hurst(fbm_hurst);
            sl::FbmPath path = fbm_method == "cholesky"
                                   ? sl::sample_fbm_cholesky(grid, hurst, fbm_seed)
                                   : sl::sample_fbm_circulant(grid, hurst, fbm_seed);
            sl::write_fbm_csv(fbm_out, path);
            std::printf("wrote %s (%zu nodes, H=%g, seed=%llu, method=%s)\n", fbm_out.c_str(),
                        grid.num_points(), fbm_hurst, static_cast<unsigned long long>(fbm_seed),
                        fbm_method.c_str());
        } else if (solve_cmd->parsed()) {
            const auto tuning = sl::solve_optimal_a(
                solve_beta,
                solve_theta > 0.0 ? std::optional<double>(solve_theta) : std::nullopt);
            std::printf("beta=%.12g a_star=%.12g acceptance=%.12g\n", tuning.beta, tuning.a_star,
                        tuning.acceptance_star);
            if (tuning.ell_star_given_theta)
                std::printf("ell_star=%.12g (theta=%.12g)\n", *tuning.ell_star_given_theta,
                            solve_theta);
            if (!solve_out.empty()) {
                sl::CsvTable table;
                table.columns = {"beta", "a_star", "acceptance_star"};
                table.rows.push_back({sl::format_number(tuning.beta),
                                      sl::format_number(tuning.a_star),
                                      sl::format_number(tuning.acceptance_star)});
                write_csv_with_provenance(solve_out, {"subcommand=solve"}, table);
            }
        } else if (fig_cmd->parsed()) {
            std::vector<double> h_grid(fig_points);
            for (std::size_t i = 0; i < fig_points; ++i)
                h_grid[i] = static_cast<double>(i + 1) / static_cast<double>(fig_points + 1);
            sl::CsvTable table;
            table.columns = {"H", "component", "acceptance_star"};
            for (const auto algo : {sl::Algo::rwm, sl::Algo::mala})
                for (const auto& row : sl::figure1_curve(algo, h_grid))
                    table.rows.push_back({sl::format_number(row.hurst), sl::to_string(algo),
                                          sl::format_number(row.acceptance_star)});
            write_csv_with_provenance(fig_out, {"subcommand=figure1"}, table);
            sl::write_plot_script(fig_out + ".plt", "optimal acceptance rates", fig_out,
                              {{"H", "acceptance_star", "2 Phi(-a*)", "points"}});
            std::printf("wrote %s (%zu rows)\n", fig_out.c_str(), table.rows.size());
        } else if (run_cmd->parsed()) {
            if (!run_spec_file.empty()) {
                const auto spec = sl::ExperimentSpec::parse(slurp_file(run_spec_file));
                run_target = target_options_from_spec(spec);
                run_algo = spec.algo;
                run_dim = spec.dimension;
                run_ell = spec.ell;
                run_beta = spec.beta;
                run_convention = spec.convention;
                run_steps = spec.steps;
                run_burnin = spec.burn_in;
                run_seed = spec.seed;
                run_init = spec.init;
                run_thin = spec.thin;
                run_out = spec.out_path;
            }
            const sl::MarginalTarget target = build_target(run_target);
            sl::ChainConfig cfg;
            cfg.algo = run_algo == "mala" ? sl::Algo::mala : sl::Algo::rwm;
            cfg.dimension = run_dim;
            cfg.ell = run_ell;
            cfg.beta = run_beta;
            cfg.sigma_override = sigma_for_convention(run_convention, run_ell, run_dim, run_beta);
            cfg.steps = run_steps;
            cfg.burn_in = run_burnin;
            cfg.seed = run_seed;
            cfg.thin = run_thin;
            cfg.acf_max_lag = 100;
            cfg.init = parse_init(run_init);

            std::vector<sl::StepRecord> trace;
            const sl::RunSummary summary =
                run_chain(cfg, target, run_trace.empty() ? nullptr : &trace);

            sl::SweepResult single;
            sl::SweepRow row;
            row.ell = cfg.ell;
            row.sigma = cfg.sigma();
            row.replicas = 1;
            row.acceptance_mean = summary.acceptance_rate;
            row.esjd_coord_mean = summary.esjd_coord;
            row.esjd_full_mean = summary.esjd_full;
            row.psi_mean = summary.psi_mean;
            row.psi_var = summary.psi_var;
            single.rows.push_back(row);
            const std::vector<std::string> provenance = {
                "subcommand=run", target.descriptor(),
                "algo=" + std::string(sl::to_string(cfg.algo)) +
                    " n=" + std::to_string(cfg.dimension) +
                    " beta=" + sl::format_number(cfg.beta) + " convention=" + run_convention +
                    " init=" + summary.init + " burn_in=" + std::to_string(cfg.burn_in) +
                    " seed=" + std::to_string(cfg.seed)};
            write_csv_with_provenance(
                run_out, provenance,
                sweep_table(target, cfg.algo, run_target.hurst, run_target.c, cfg.dimension,
                            cfg.seed, cfg.steps, single));
            if (!run_trace.empty()) sl::write_trace_csv(run_trace, provenance, cfg.thin, trace);
            std::printf(
                "acceptance=%.6g esjd_coord=%.6g esjd_full=%.6g psi_mean=%.6g psi_var=%.6g\n",
                summary.acceptance_rate, summary.esjd_coord, summary.esjd_full, summary.psi_mean,
                summary.psi_var);
        } else if (sweep_cmd->parsed()) {
            if (!sweep_spec_file.empty()) {
                const auto spec = sl::ExperimentSpec::parse(slurp_file(sweep_spec_file));
                sweep_target = target_options_from_spec(spec);
                sweep_algo = spec.algo;
                sweep_dim = spec.dimension;
                sweep_beta = spec.beta;
                sweep_convention = spec.convention;
                sweep_steps = spec.steps;
                sweep_burnin = spec.burn_in;
                sweep_seed = spec.seed;
                sweep_init = spec.init;
                sweep_ells = spec.ells;
                sweep_replicas = spec.replicas;
                sweep_out = spec.out_path;
            }
            const sl::MarginalTarget target = build_target(sweep_target);
            sl::ChainConfig base;
            base.algo = sweep_algo == "mala" ? sl::Algo::mala : sl::Algo::rwm;
            base.dimension = sweep_dim;
            base.beta = sweep_beta;
            base.steps = sweep_steps;
            base.burn_in = sweep_burnin;
            base.seed = sweep_seed;
            base.init = parse_init(sweep_init);
            const auto sigma_fn = [&](double ell) {
                return sigma_for_convention(sweep_convention, ell, sweep_dim, sweep_beta);
            };
            const sl::SweepResult sweep =
                ell_sweep(base, target, sweep_ells, sweep_replicas, sigma_fn);
            write_csv_with_provenance(
                sweep_out,
                {"subcommand=sweep", target.descriptor(),
                 "algo=" + std::string(sl::to_string(base.algo)) +
                     " n=" + std::to_string(base.dimension) +
                     " beta=" + sl::format_number(base.beta) + " convention=" + sweep_convention +
                     " init=" + sweep_init + " burn_in=" + std::to_string(base.burn_in) +
                     " replicas=" + std::to_string(sweep_replicas) +
                     " seed=" + std::to_string(base.seed),
                 "esjd_coord_argmax_ell=" + sl::format_number(sweep.ell_argmax_esjd_coord) +
                     " esjd_full_argmax_ell=" + sl::format_number(sweep.ell_argmax_esjd_full)},
                sweep_table(target, base.algo, sweep_target.hurst, sweep_target.c,
                            base.dimension, base.seed, base.steps, sweep));
            std::printf("wrote %s; ESJD argmax: coord ell=%g, full ell=%g\n", sweep_out.c_str(),
                        sweep.ell_argmax_esjd_coord, sweep.ell_argmax_esjd_full);
        } else if (t1_cmd->parsed() || t2_cmd->parsed() || t3_cmd->parsed()) {
            const bool is1 = t1_cmd->parsed(), is2 = t2_cmd->parsed();
            const TableOptions& opt = is1 ? t1 : (is2 ? t2 : t3);
            const long steps = opt.long_run ? 1000000 : opt.steps;

            TargetOptions topt;
            sl::ChainConfig base;
            std::vector<double> ells;
            double fig_low = 0.0, fig_high = 0.0;
            if (is1) {
                topt.kind = "rwm_rough";
                topt.hurst = 0.5;
                topt.env_seed = opt.seed;
                topt.path_file = opt.path_file;
                base.algo = sl::Algo::rwm;
                base.dimension = 200;
                base.beta = 0.5;  // proposal variance ell^2 / n^2
                base.init = sl::InitKind::burn_in_only;
                base.burn_in = opt.burnin;
                ells = {5.0, 5.5, 11.0, 12.0, 13.0, 14.0};
                fig_low = 5.5;
                fig_high = 13.0;
            } else if (is2) {
                topt.kind = "rwm_osc";
                topt.osc_a = 0.25;
                topt.osc_b = 30.0;
                base.algo = sl::Algo::rwm;
                base.dimension = 100;
                base.beta = 1.0;  // proposal variance ell^2 / n
                base.init = sl::InitKind::stationary_table;
                base.burn_in = opt.burnin;
                ells = {0.5, 0.65, 1.5, 2.0, 2.55, 3.0};
                fig_low = 0.65;
                fig_high = 2.55;
            } else {
                topt.kind = "mala_osc";
                topt.osc_a = 0.9;
                topt.osc_b = 5.0;
                base.algo = sl::Algo::mala;
                base.dimension = 100;
                base.beta = 3.0;  // proposal variance ell^2 / n^{1/3}
                base.init = sl::InitKind::stationary_table;
                base.burn_in = opt.burnin;
                ells = {1.4, 1.51, 1.6, 1.67, 1.68, 1.7, 1.72, 1.73, 1.8};
                fig_low = 1.51;
                fig_high = 1.68;
            }
            const sl::MarginalTarget target = build_target(topt);
            base.steps = steps;
            base.seed = opt.seed;
            const auto sigma_fn = [&](double ell) {
                return sigma_for_convention("ell2", ell, base.dimension, base.beta);
            };
            const sl::SweepResult sweep = ell_sweep(base, target, ells, 1, sigma_fn);
            const std::vector<std::string> provenance = {
                std::string("subcommand=") + (is1 ? "table1" : (is2 ? "table2" : "table3")),
                target.descriptor(),
                "algo=" + std::string(sl::to_string(base.algo)) +
                    " n=" + std::to_string(base.dimension) +
                    " beta=" + sl::format_number(base.beta) + " convention=ell2" +
                    " init=" + std::string(sl::to_string(base.init)) +
                    " burn_in=" + std::to_string(base.burn_in) +
                    " seed=" + std::to_string(base.seed)};
            write_csv_with_provenance(opt.out, provenance,
                                      sweep_table(target, base.algo, topt.hurst, topt.c,
                                                  base.dimension, base.seed, steps, sweep));
            const std::string stem =
                opt.out.size() > 4 && opt.out.substr(opt.out.size() - 4) == ".csv"
                    ? opt.out.substr(0, opt.out.size() - 4)
                    : opt.out;
            emit_figures(stem, target, base, sigma_fn(fig_low), sigma_fn(fig_high), fig_low,
                         fig_high, provenance);
            std::printf(
                "wrote %s (+ %s_acf.csv, %s_trace.csv); ESJD argmax ell=%g (coord), %g (full)\n",
                opt.out.c_str(), stem.c_str(), stem.c_str(), sweep.ell_argmax_esjd_coord,
                sweep.ell_argmax_esjd_full);
        } else if (checks_cmd->parsed()) {
            return run_checks(checks_quick);
        }
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
    return 0;
}
