#include "pbgfluor/kernels.hpp"

#include <cmath>

namespace pbgfluor {

namespace {

constexpr Complex kI{0.0, 1.0};

// sqrt with the branch for negative radicands selected by sign (+1 or -1).
Complex branch_sqrt(double x, double sign) {
    if (x >= 0.0) {
        return {std::sqrt(x), 0.0};
    }
    return {0.0, sign * std::sqrt(-x)};
}

double beta32(const BandEdge& be) { return be.beta * std::sqrt(be.beta); }

double shifted_envelope(double shifted_frequency, const BandEdge& be) {
    // shifted_frequency = omega_a + omega (+/- rabi)
    if (shifted_frequency <= 0.0) {
        throw DomainError("noise envelope requires omega_a + omega > 0");
    }
    const double above = shifted_frequency - be.omega_c;
    if (above <= 0.0) {
        return 0.0;
    }
    return beta32(be) * std::sqrt(above) / shifted_frequency;
}

} // namespace

double dos(double omega, const ReservoirModel& reservoir) {
    const auto* be = std::get_if<BandEdge>(&reservoir);
    if (be == nullptr) {
        throw UnsupportedError("density of states is defined for the band-edge model only");
    }
    return omega > be->omega_c ? std::sqrt(omega - be->omega_c) : 0.0;
}

Complex memory_kernel(double omega, const PhysicalParams& params) {
    if (const auto* fs = std::get_if<FreeSpace>(&params.reservoir)) {
        return {0.5 * fs->gamma, 0.0};
    }
    const auto& be = std::get<BandEdge>(params.reservoir);
    return -kI * beta32(be) /
           (std::sqrt(be.omega_c) + branch_sqrt(be.omega_c - params.omega_a - omega, -1.0));
}

Complex memory_kernel_conj(double omega, const PhysicalParams& params) {
    if (const auto* fs = std::get_if<FreeSpace>(&params.reservoir)) {
        return {0.5 * fs->gamma, 0.0};
    }
    const auto& be = std::get<BandEdge>(params.reservoir);
    return kI * beta32(be) /
           (std::sqrt(be.omega_c) + branch_sqrt(be.omega_c - params.omega_a + omega, +1.0));
}

double noise_envelope(double omega, const PhysicalParams& params) {
    return 4.0 * shifted_envelope(params.omega_a + omega, params.band_edge());
}

ShiftedEnvelopes rabi_shifted_envelopes(double omega, const PhysicalParams& params) {
    const auto& be = params.band_edge();
    return {shifted_envelope(params.omega_a + omega + params.rabi, be),
            shifted_envelope(params.omega_a + omega - params.rabi, be)};
}

double effective_decay_rate(const PhysicalParams& params) {
    return 2.0 * memory_kernel(0.0, params).real();
}

KernelSpectra sample_kernels(const PhysicalParams& params, std::span<const double> grid) {
    KernelSpectra out;
    out.omega.assign(grid.begin(), grid.end());
    out.g.reserve(grid.size());
    out.gc.reserve(grid.size());
    out.noise.reserve(grid.size());
    for (double w : grid) {
        out.g.push_back(memory_kernel(w, params));
        out.gc.push_back(memory_kernel_conj(w, params));
        if (params.is_band_edge() && params.omega_a + w > 0.0) {
            out.noise.push_back(noise_envelope(w, params));
        } else {
            out.noise.push_back(0.0);
        }
    }
    return out;
}

} // namespace pbgfluor
