#include "scalinglab/experiment_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "scalinglab/version.hpp"

namespace scalinglab {

std::string format_number(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.15g", value);
    return buf;
}

void write_csv_with_provenance(const std::string& filename,
                               const std::vector<std::string>& provenance,
                               const CsvTable& table) {
    if (table.rows.empty())
        throw std::invalid_argument("write_csv_with_provenance: refusing to write empty table");
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open output path " + filename);
    out << "# " << kVersion << "\n";
    for (const auto& line : provenance) out << "# " << line << "\n";
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        out << table.columns[c] << (c + 1 < table.columns.size() ? "," : "\n");
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("write_csv_with_provenance: ragged row");
        for (std::size_t c = 0; c < row.size(); ++c)
            out << row[c] << (c + 1 < row.size() ? "," : "\n");
    }
    if (!out) throw std::runtime_error("write failed for " + filename);
}

void write_trace_csv(const std::string& filename, const std::vector<std::string>& provenance,
                     long thin, const std::vector<StepRecord>& records) {
    CsvTable table;
    table.columns = {"step", "coord1", "psi", "accepted"};
    table.rows.reserve(records.size());
    for (const auto& rec : records)
        table.rows.push_back({std::to_string(rec.step), format_number(rec.coord1),
                              format_number(rec.psi), rec.accepted ? "1" : "0"});
    std::vector<std::string> header = provenance;
    header.push_back("thin=" + std::to_string(thin));
    write_csv_with_provenance(filename, header, table);
}

void write_plot_script(const std::string& filename, const std::string& title,
                       const std::string& csv_filename, const std::vector<PlotSeries>& series) {
    if (series.empty()) throw std::invalid_argument("write_plot_script: no series");
    std::ofstream out(filename);
    if (!out) throw std::runtime_error("cannot open output path " + filename);
    out << "# " << kVersion << "\n";
    out << "# gnuplot script; data columns are named in the CSV header\n";
    out << "set datafile separator ','\n";
    out << "set key autotitle columnhead\n";
    out << "set title '" << title << "'\n";
    out << "plot ";
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (i) out << ", \\\n     ";
        out << "'" << csv_filename << "' using '" << series[i].x_column << "':'"
            << series[i].y_column << "' with " << series[i].style << " title '"
            << series[i].label << "'";
    }
    out << "\n";
    if (!out) throw std::runtime_error("write failed for " + filename);
}

std::string ExperimentSpec::serialize() const {
    std::ostringstream out;
    out << "# experiment spec (key=value)\n";
    out << "name=" << name << "\n";
    out << "target_kind=" << target_kind << "\n";
    out << "hurst=" << format_number(hurst) << "\n";
    out << "c=" << format_number(c) << "\n";
    out << "osc_a=" << format_number(osc_a) << "\n";
    out << "osc_b=" << format_number(osc_b) << "\n";
    out << "x_min=" << format_number(x_min) << "\n";
    out << "x_max=" << format_number(x_max) << "\n";
    out << "grid_points=" << grid_points << "\n";
    out << "env_seed=" << env_seed << "\n";
    out << "path_file=" << path_file << "\n";
    out << "algo=" << algo << "\n";
    out << "dimension=" << dimension << "\n";
    out << "ell=" << format_number(ell) << "\n";
    out << "beta=" << format_number(beta) << "\n";
    out << "convention=" << convention << "\n";
    out << "steps=" << steps << "\n";
    out << "burn_in=" << burn_in << "\n";
    out << "seed=" << seed << "\n";
    out << "init=" << init << "\n";
    out << "thin=" << thin << "\n";
    out << "ells=";
    for (std::size_t i = 0; i < ells.size(); ++i)
        out << (i ? "," : "") << format_number(ells[i]);
    out << "\n";
    out << "replicas=" << replicas << "\n";
    out << "out_path=" << out_path << "\n";
    return out.str();
}

ExperimentSpec ExperimentSpec::parse(const std::string& text) {
    ExperimentSpec spec;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("ExperimentSpec: malformed line '" + line + "'");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        if (key == "name") spec.name = value;
        else if (key == "target_kind") spec.target_kind = value;
        else if (key == "hurst") spec.hurst = std::stod(value);
        else if (key == "c") spec.c = std::stod(value);
        else if (key == "osc_a") spec.osc_a = std::stod(value);
        else if (key == "osc_b") spec.osc_b = std::stod(value);
        else if (key == "x_min") spec.x_min = std::stod(value);
        else if (key == "x_max") spec.x_max = std::stod(value);
        else if (key == "grid_points") spec.grid_points = std::stoul(value);
        else if (key == "env_seed") spec.env_seed = std::stoull(value);
        else if (key == "path_file") spec.path_file = value;
        else if (key == "algo") spec.algo = value;
        else if (key == "dimension") spec.dimension = std::stoul(value);
        else if (key == "ell") spec.ell = std::stod(value);
        else if (key == "beta") spec.beta = std::stod(value);
        else if (key == "convention") spec.convention = value;
        else if (key == "steps") spec.steps = std::stol(value);
        else if (key == "burn_in") spec.burn_in = std::stol(value);
        else if (key == "seed") spec.seed = std::stoull(value);
        else if (key == "init") spec.init = value;
        else if (key == "thin") spec.thin = std::stol(value);
        else if (key == "replicas") spec.replicas = std::stoul(value);
        else if (key == "out_path") spec.out_path = value;
        else if (key == "ells") {
            spec.ells.clear();
            std::istringstream list(value);
            std::string item;
            while (std::getline(list, item, ','))
                if (!item.empty()) spec.ells.push_back(std::stod(item));
        } else {
            throw std::invalid_argument("ExperimentSpec: unknown key '" + key + "'");
        }
    }
    return spec;
}

}
