// first_order.hpp: first-order Liouville-expansion correction to the generalized Bloch equations
//
// To first order the two-time products pick up cos/sin[rabi (t - t')] modulations, which in
// the frequency domain become half-sums and half-differences of Rabi-shifted kernels:
//   C(w) = [G(w + rabi) + G(w - rabi)] / 2,  S(w) = [G(w + rabi) - G(w - rabi)] / (2i)
// and likewise Cc, Sc from Gc.

#pragma once

#include <span>
#include <vector>

#include "pbgfluor/bloch.hpp"
#include "pbgfluor/spectrum.hpp"

namespace pbgfluor {

struct ShiftedKernels {
    double omega = 0.0;
    Complex gp, gm;   // G(omega + rabi), G(omega - rabi)
    Complex gcp, gcm; // Gc(omega + rabi), Gc(omega - rabi)

    Complex cos_part() const { return 0.5 * (gp + gm); }
    Complex sin_part() const { return (gp - gm) / Complex(0.0, 2.0); }
    Complex cos_part_conj() const { return 0.5 * (gcp + gcm); }
    Complex sin_part_conj() const { return (gcp - gcm) / Complex(0.0, 2.0); }
};

ShiftedKernels shifted_kernels(double omega, const PhysicalParams& params);

// First-order counterpart of system_matrix. Reduces to it exactly at rabi = 0 and for the
// free-space model. Band-edge runs require delta = 0.
SystemMatrix first_order_system(double omega, const PhysicalParams& params);

SteadyState first_order_steady_state(const PhysicalParams& params, double tol = kConditioningTolerance);

// The <n_z n_z> cross term printed with 2 sigma'_- breaks the Hermitian symmetry of the
// spectrum; the default splits it as sigma'_- + sigma'_+.
enum class ZZVariant { Symmetrized, AsPrinted };
// The printed <n_z n_+> takes its cutoffs from omega_2; the default mirrors <n_- n_z> and
// uses omega_1. Identical for the stationary part (omega_1 = omega_2).
enum class ZPlusCutoff { Omega1, Omega2 };

struct FirstOrderOptions {
    ZZVariant zz = ZZVariant::Symmetrized;
    ZPlusCutoff z_plus = ZPlusCutoff::Omega1;
};

// Non-zero first-order correlations (band edge, delta = 0), with Rabi-shifted envelopes
// N1(w) = upper, N2(w) = lower and the unshifted N(w) / 4 in <n_z n_z>.
NoiseCorrelations first_order_noise_correlations(double omega1, double omega2, const PhysicalParams& params,
                                                 const FirstOrderOptions& opts = {});

class FirstOrderSpectrum {
public:
    explicit FirstOrderSpectrum(const PhysicalParams& params, const FirstOrderOptions& opts = {});
    SpectralPoint operator()(double omega) const;
    // Complex value before taking the real part; the imaginary part measures the Hermiticity defect.
    Complex raw(double omega) const;
    const SteadyState& steady() const noexcept { return steady_; }
    double coherent_weight() const noexcept { return coherent_; }

private:
    PhysicalParams params_;
    FirstOrderOptions opts_;
    SteadyState steady_;
    double coherent_ = 0.0;
};

SpectralPoint first_order_spectrum(double omega, const PhysicalParams& params,
                                   const FirstOrderOptions& opts = {});

struct OrderComparison {
    double rabi = 0.0;
    double max_relative = 0.0;        // max |s1 - s0| / max |s0|
    double integrated_relative = 0.0; // int |s1 - s0| / int |s0|
    double omega_at_max = 0.0;
    double max_imag_relative = 0.0;   // max |Im s1| / max |s0|
    double coherent_zeroth = 0.0;
    double coherent_first = 0.0;
    std::size_t points = 0;
};

OrderComparison order_comparison(const PhysicalParams& params, std::span<const double> grid,
                                 const FirstOrderOptions& opts = {}, unsigned threads = 1);

} // namespace pbgfluor
