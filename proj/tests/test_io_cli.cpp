#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "scalinglab/experiment_io.hpp"
#include "scalinglab/version.hpp"

using namespace scalinglab;

namespace {

std::string slurp(const std::string& filename) {
    std::ifstream in(filename);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(SCALING_LAB_BIN) + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str());
}

}  // namespace

TEST_CASE("experiment spec round-trips through its key=value form") {
    ExperimentSpec spec;
    spec.name = "table2-variant";
    spec.target_kind = "mala_osc";
    spec.osc_a = 0.9;
    spec.osc_b = 5.0;
    spec.algo = "mala";
    spec.beta = 3.0;
    spec.ells = {1.4, 1.51, 1.68};
    spec.replicas = 3;
    spec.thin = 25;
    const std::string text = spec.serialize();
    const ExperimentSpec parsed = ExperimentSpec::parse(text);
    CHECK(parsed.serialize() == text);
    CHECK(parsed.ells == spec.ells);
    CHECK(parsed.name == spec.name);

    CHECK_THROWS(ExperimentSpec::parse("nonsense line without equals\n"));
    CHECK_THROWS(ExperimentSpec::parse("unknown_key=1\n"));
}

TEST_CASE("csv writer provenance and guards") {
    CsvTable table;
    table.columns = {"x", "y"};
    table.rows = {{"1", "2"}, {"3", "4"}};
    const std::string file = "io_test_table.csv";
    write_csv_with_provenance(file, {"note=hello"}, table);
    const std::string content = slurp(file);
    CHECK(content.rfind(std::string("# ") + kVersion, 0) == 0);
    CHECK(content.find("# note=hello") != std::string::npos);
    CHECK(content.find("x,y\n1,2\n3,4\n") != std::string::npos);
    std::remove(file.c_str());

    CsvTable empty;
    empty.columns = {"x"};
    CHECK_THROWS(write_csv_with_provenance("unused.csv", {}, empty));
    CHECK_THROWS(write_csv_with_provenance("/nonexistent-dir/x.csv", {}, table));
}

TEST_CASE("trace csv records the thinning factor") {
    const std::string file = "io_test_trace.csv";
    write_trace_csv(file, {"subcommand=test"}, 25, {{0, 0.5, -0.1, true}, {25, 0.7, 0.2, false}});
    const std::string content = slurp(file);
    CHECK(content.find("thin=25") != std::string::npos);
    CHECK(content.find("step,coord1,psi,accepted") != std::string::npos);
    CHECK(content.find("0,0.5,-0.1,1") != std::string::npos);
    std::remove(file.c_str());
}

TEST_CASE("plot scripts reference the data columns") {
    const std::string file = "io_test_plot.plt";
    write_plot_script(file, "acf", "data.csv", {{"lag", "acf", "series"}});
    const std::string content = slurp(file);
    CHECK(content.find("'data.csv'") != std::string::npos);
    CHECK(content.find("'lag'") != std::string::npos);
    std::remove(file.c_str());
    CHECK_THROWS(write_plot_script("x.plt", "t", "d.csv", {}));
}

TEST_CASE("cli: solve prints the classical anchor") {
    const std::string out_file = "cli_solve_out.txt";
    const std::string cmd =
        std::string(SCALING_LAB_BIN) + " solve --beta 1 > " + out_file + " 2>&1";
    REQUIRE(std::system(cmd.c_str()) == 0);
    const std::string content = slurp(out_file);
    CHECK(content.find("acceptance=0.2338") != std::string::npos);
    std::remove(out_file.c_str());
}

TEST_CASE("cli: fbm export is deterministic") {
    REQUIRE(run_cli("fbm --hurst 0.5 --points 1001 --xmin -9 --xmax 9 --seed 1 "
                    "--out cli_fbm_a.csv") == 0);
    REQUIRE(run_cli("fbm --hurst 0.5 --points 1001 --xmin -9 --xmax 9 --seed 1 "
                    "--out cli_fbm_b.csv") == 0);
    CHECK(slurp("cli_fbm_a.csv") == slurp("cli_fbm_b.csv"));
    CHECK(slurp("cli_fbm_a.csv").rfind("# hurst=0.5 seed=1", 0) == 0);
    std::remove("cli_fbm_a.csv");
    std::remove("cli_fbm_b.csv");
}

TEST_CASE("cli: bad invocations exit nonzero with no output file") {
    CHECK(run_cli("frobnicate") != 0);
    CHECK(run_cli("solve") != 0);               // --beta is required
    CHECK(run_cli("sweep --ells 1.0 --target nosuch") != 0);
    CHECK(run_cli("fbm --points 10 --xmin 1 --xmax 9 --out cli_bad.csv") != 0);  // 0 outside
    std::ifstream leftover("cli_bad.csv");
    CHECK(!leftover.good());
}

TEST_CASE("cli: figure1 emits a monotone curve and a plot script") {
    REQUIRE(run_cli("figure1 --points 99 --out cli_fig1.csv") == 0);
    std::ifstream in("cli_fig1.csv");
    REQUIRE(in.good());
    std::string line;
    std::size_t rwm_rows = 0;
    double previous = -1.0;
    bool monotone = true;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("H,", 0) == 0) continue;
        const auto c1 = line.find(',');
        const auto c2 = line.find(',', c1 + 1);
        if (line.substr(c1 + 1, c2 - c1 - 1) != "rwm") continue;
        ++rwm_rows;
        const double acc = std::stod(line.substr(c2 + 1));
        monotone = monotone && acc > previous;
        previous = acc;
    }
    CHECK(rwm_rows == 99);
    CHECK(monotone);
    std::ifstream plt("cli_fig1.csv.plt");
    CHECK(plt.good());
    std::remove("cli_fig1.csv");
    std::remove("cli_fig1.csv.plt");
}

TEST_CASE("cli: sweep driven by a spec file") {
    ExperimentSpec spec;
    spec.name = "mini-sweep";
    spec.target_kind = "rwm_osc";
    spec.osc_a = 0.25;
    spec.osc_b = 30.0;
    spec.algo = "rwm";
    spec.dimension = 20;
    spec.beta = 1.0;
    spec.steps = 4000;
    spec.burn_in = 200;
    spec.seed = 5;
    spec.ells = {0.65, 2.55};
    spec.replicas = 2;
    spec.out_path = "cli_spec_sweep.csv";
    {
        std::ofstream out("cli_spec_sweep.txt");
        out << spec.serialize();
    }
    REQUIRE(run_cli("sweep --spec cli_spec_sweep.txt") == 0);
    const std::string content = slurp("cli_spec_sweep.csv");
    CHECK(content.find("replicas=2") != std::string::npos);
    CHECK(content.find("esjd_coord_argmax_ell=") != std::string::npos);
    std::remove("cli_spec_sweep.txt");
    std::remove("cli_spec_sweep.csv");
}

TEST_CASE("cli: table2 emits six ell rows with the summary schema") {
    REQUIRE(run_cli("table2 --steps 2000 --burnin 100 --seed 7 --out cli_t2.csv") == 0);
    std::ifstream in("cli_t2.csv");
    REQUIRE(in.good());
    std::string line;
    std::size_t data_rows = 0;
    bool has_header = false;
    while (std::getline(in, line)) {
        if (line.rfind("algo,kind,H,c,n,ell,sigma,acceptance,esjd_coord,esjd_full", 0) == 0)
            has_header = true;
        else if (!line.empty() && line[0] != '#' && has_header)
            ++data_rows;
    }
    CHECK(has_header);
    CHECK(data_rows == 6);
    for (const char* suffix : {"cli_t2.csv", "cli_t2_acf.csv", "cli_t2_trace.csv",
                               "cli_t2_acf.plt", "cli_t2_trace.plt"})
        std::remove(suffix);
}

TEST_CASE("cli: checks subcommand reports success") {
    CHECK(run_cli("checks --quick") == 0);
}

TEST_CASE("cli: run emits a provenance-stamped summary") {
    REQUIRE(run_cli("run --target rwm_osc --a 0.25 --b 30 --dim 20 --ell 0.65 --beta 1 "
                    "--steps 5000 --burnin 100 --seed 9 --thin 50 "
                    "--out cli_run.csv --trace cli_run_trace.csv") == 0);
    const std::string content = slurp("cli_run.csv");
    CHECK(content.find("kind=rwm_osc") != std::string::npos);
    CHECK(content.find("seed=9") != std::string::npos);
    CHECK(content.find("algo,kind,H,c,n,ell,sigma,acceptance") != std::string::npos);
    const std::string trace = slurp("cli_run_trace.csv");
    CHECK(trace.find("thin=50") != std::string::npos);
    std::remove("cli_run.csv");
    std::remove("cli_run_trace.csv");
}
