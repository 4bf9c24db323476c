#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "scalinglab/mh_core.hpp"

namespace scalinglab {

/// Decimal text with 15 significant digits (outputs must carry >= 12).
std::string format_number(double value);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

/// Writes `# ...` provenance lines (version string first), the header row and
/// the data rows. Refuses empty tables and unwritable paths.
void write_csv_with_provenance(const std::string& filename,
                               const std::vector<std::string>& provenance,
                               const CsvTable& table);

/// Thinned trace export: `step,coord1,psi,accepted` with the thinning factor
/// recorded in the header comments.
void write_trace_csv(const std::string& filename, const std::vector<std::string>& provenance,
                     long thin, const std::vector<StepRecord>& records);

struct PlotSeries {
    std::string x_column;
    std::string y_column;
    std::string label;
    std::string style = "lines";
};

/// Companion plot script for a CSV: plain gnuplot commands, so any generic
/// plotting tool (or a human) can reproduce the figure from the data file.
void write_plot_script(const std::string& filename, const std::string& title,
                       const std::string& csv_filename, const std::vector<PlotSeries>& series);

/// Experiment description: plain-text key=value block with `#` comments.
/// serialize() and parse() round-trip exactly.
struct ExperimentSpec {
    std::string name = "experiment";
    // target block
    std::string target_kind = "rwm_rough";
    double hurst = 0.5;
    double c = 0.1;
    double osc_a = 0.25;
    double osc_b = 30.0;
    double x_min = -9.0;
    double x_max = 9.0;
    std::size_t grid_points = 200001;
    std::uint64_t env_seed = 1;
    std::string path_file;  // optional pre-simulated environment
    // chain block
    std::string algo = "rwm";
    std::size_t dimension = 100;
    double ell = 1.0;
    double beta = 1.0;
    std::string convention = "ell2";  // proposal variance ell^2 * rate, or "ell" for ell * rate
    long steps = 100000;
    long burn_in = 10000;
    std::uint64_t seed = 1;
    std::string init = "stationary_table";
    long thin = 0;
    // sweep block
    std::vector<double> ells;
    std::size_t replicas = 1;
    // output
    std::string out_path = "out.csv";

    std::string serialize() const;
    static ExperimentSpec parse(const std::string& text);
};

}
