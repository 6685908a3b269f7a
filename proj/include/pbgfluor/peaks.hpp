// peaks.hpp: peak tables and band-edge offset scans

#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pbgfluor/spectrum.hpp"

namespace pbgfluor {

struct PeakOptions {
    double min_prominence = 1e-2; // fraction of the largest sample
};

struct Peak {
    double location = 0.0;
    double height = 0.0;
    double fwhm = std::numeric_limits<double>::quiet_NaN(); // NaN if a half-maximum crossing is missing
    double power = 0.0;  // integral between the flanking minima
    double lower_bound = 0.0;
    double upper_bound = 0.0;
};

struct PeakTable {
    std::vector<Peak> peaks;
    double total_incoherent_power = 0.0;
    double coherent_weight = 0.0;
};

// Local maxima with prominence above opts.min_prominence * max(s_inc). When an evaluator is
// supplied, locations are polished by Brent's method and half-maximum points by bisection on
// the evaluator; otherwise both come from the samples (linear interpolation).
PeakTable peak_analysis(const SpectrumResult& result, const PeakOptions& opts = {},
                        const PointEvaluator* eval = nullptr);

// Peak powers binned by location: below -rabi/2, within +-rabi/2, above rabi/2. A sideband
// split in two by a kernel edge lands in one bin.
struct SidebandPowers {
    double lower = 0.0;
    double center = 0.0;
    double upper = 0.0;
    int lower_count = 0;
    int center_count = 0;
    int upper_count = 0;
};

SidebandPowers group_sidebands(const PeakTable& table, double rabi);

struct ScanOptions {
    GridSpec grid;
    PeakOptions peaks;
    unsigned threads = 1;
};

struct ScanEntry {
    double omega_a = 0.0;
    double offset = 0.0; // omega_a - omega_c
    bool ok = false;
    std::string error;
    PeakTable table;
    SidebandPowers sidebands;
    double total_power = 0.0;
    SpectrumDiagnostics diagnostics;
};

// Band-gap spectrum, peak table and total power for every omega_a (resonant drive, the rest
// of base unchanged). Failures are recorded per entry; ValidationError for an empty list.
std::vector<ScanEntry> offset_scan(const PhysicalParams& base, std::span<const double> omega_a_values,
                                   const ScanOptions& opts = {});

} // namespace pbgfluor
