// config.hpp: run configuration for the command-line front end
//
// Config files are either JSON objects or flat "key = value" lines ('#' starts a comment).
// Both forms share one key set; lists are JSON arrays or comma-separated values.
// Unknown keys are rejected.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "pbgfluor/first_order.hpp"
#include "pbgfluor/grid.hpp"
#include "pbgfluor/params.hpp"
#include "pbgfluor/peaks.hpp"

namespace pbgfluor {

enum class Subcommand { Kernel, Spectrum, Scan, OrderCheck, Validate };
enum class OutputFormat { Csv, Json };

std::string to_string(Subcommand cmd);
Subcommand parse_subcommand(const std::string& name);

struct RunConfig {
    Subcommand command = Subcommand::Spectrum;
    PhysicalParams params = PhysicalParams::resonant(100.27, 0.3, BandEdge{});
    GridSpec grid;
    bool auto_range = true;          // omega_min / omega_max derived from the parameters
    PeakOptions peaks;
    std::vector<double> offsets;     // scan: omega_a values
    std::vector<double> rabi_values; // order-check: rabi values (defaults to params.rabi)
    bool first_order = false;        // spectrum: first-order evaluator
    FirstOrderOptions first_order_options;
    std::string out_dir = ".";
    OutputFormat format = OutputFormat::Csv;
    unsigned threads = 1;
};

using FlatConfig = std::map<std::string, std::string>;

// Both throw ValidationError with a one-line reason.
FlatConfig read_flat_config(const std::string& path);
FlatConfig parse_flat_config(const std::string& text);
RunConfig build_config(Subcommand command, const FlatConfig& flat);

// Key/value echo of every setting that affects outputs; re-parsable by build_config.
FlatConfig echo_config(const RunConfig& cfg);

// Fills grid.omega_min / omega_max when auto_range is set and checks that the range covers
// every expected peak plus 10 linewidths.
void resolve_grid(RunConfig& cfg);

} // namespace pbgfluor
