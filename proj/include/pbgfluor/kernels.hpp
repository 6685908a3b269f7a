// kernels.hpp: reservoir memory-function spectra and noise envelopes
//
// Frequencies are measured from the atomic transition (rotating frame at omega_a).
// Transform convention: X(omega) = \int dt x(t) e^{i omega t}.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "pbgfluor/errors.hpp"
#include "pbgfluor/params.hpp"

namespace pbgfluor {

// Photon density of states of the band-edge model, sqrt(omega - omega_c) above
// the edge and zero inside the gap (curvature absorbed into the units).
// Throws UnsupportedError for the free-space model.
double dos(double omega, const ReservoirModel& reservoir);

// Spectrum of the memory function G(tau), i.e. the kernel acting on sigma_-.
//   band edge:  -i beta^{3/2} / (sqrt(omega_c) + sqrt(omega_c - omega_a - omega))
//   free space: gamma / 2
// A negative radicand takes the branch -i sqrt(|x|), so Re >= 0 everywhere and the
// kernel is purely imaginary inside the gap.
Complex memory_kernel(double omega, const PhysicalParams& params);

// Spectrum of G_c(tau) = G(tau)^*, the kernel acting on sigma_+.
//   band edge:  +i beta^{3/2} / (sqrt(omega_c) + sqrt(omega_c - omega_a + omega))
// with the branch +i sqrt(|x|). Equals conj(memory_kernel(-omega)).
Complex memory_kernel_conj(double omega, const PhysicalParams& params);

// N(omega) = 4 beta^{3/2} sqrt(omega_a + omega - omega_c) / (omega_a + omega), zero at
// and below the edge. Band-edge only; throws DomainError when omega_a + omega <= 0.
double noise_envelope(double omega, const PhysicalParams& params);

// Rabi-shifted envelopes of the first-order correlations:
//   upper = beta^{3/2} sqrt(omega_a + omega + rabi - omega_c) / (omega_a + omega + rabi)
//   lower = beta^{3/2} sqrt(omega_a + omega - rabi - omega_c) / (omega_a + omega - rabi)
// each zero below its own edge.
struct ShiftedEnvelopes {
    double upper = 0.0;
    double lower = 0.0;
};
ShiftedEnvelopes rabi_shifted_envelopes(double omega, const PhysicalParams& params);

// Decay rate seen by the atom at the drive frequency, 2 Re G(0). Equals gamma in free space.
double effective_decay_rate(const PhysicalParams& params);

// Kernel spectra sampled on a frequency grid (dataset behind the kernel CSV).
struct KernelSpectra {
    std::vector<double> omega;
    std::vector<Complex> g;
    std::vector<Complex> gc;
    std::vector<double> noise; // N(omega); band edge only, zero in free space
};

KernelSpectra sample_kernels(const PhysicalParams& params, std::span<const double> grid);

} // namespace pbgfluor
