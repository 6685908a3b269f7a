// oracle.hpp: independent time-domain and quadrature checks
//
// Everything here is derived from the Markovian Bloch generator or from the density of
// states directly, never from the closed forms it is compared against.

#pragma once

#include <span>
#include <string>
#include <vector>

#include "pbgfluor/spectrum.hpp"

namespace pbgfluor {

struct BlochState {
    Complex sm{0.0, 0.0};
    Complex sp{0.0, 0.0};
    double sz = -1.0; // ground state
};

struct BlochTrajectory {
    std::vector<double> t;
    std::vector<Complex> sm;
    std::vector<Complex> sp;
    std::vector<double> sz;
    double tol = 0.0;
    std::size_t steps = 0;       // accepted internal steps
    double last_step = 0.0;
    double max_error_estimate = 0.0; // |state - steady| at t_end, used as a convergence gauge
};

// Free-space mean-value equations in the drive frame:
//   d<s->/dt = (i delta - gamma/2) <s-> + i rabi/2 <sz>
//   d<s+>/dt = (-i delta - gamma/2) <s+> - i rabi/2 <sz>
//   d<sz>/dt = -gamma (1 + <sz>) + i rabi (<s-> - <s+>)
// integrated by adaptive Dormand-Prince and sampled every sample_dt. IntegrationError if the
// stepper gives up.
BlochTrajectory integrate_markovian_bloch(const PhysicalParams& params, double t_end, double tol,
                                          double sample_dt, const BlochState& initial = {});

// Fixed point of the same generator (linear solve), independent of the closed forms.
BlochState markovian_steady_state(const PhysicalParams& params);

struct RegressionOptions {
    double tau_max = 0.0;      // 0: chosen so the slowest mode decays by decay_target
    double decay_target = 1e-10;
    double abs_tol = 1e-15;
    double rel_tol = 1e-14;
};

// Incoherent spectrum 2 pi * 2 Re int_0^inf e^{i nu tau} (g1(tau) - |<s->|^2) dtau with
// nu = omega + delta and g1(tau) = <s+(tau) s-(0)> propagated by the regression theorem.
// The constant offset becomes coherent_weight = 4 pi^2 |<s->|^2. Free space only.
// IntegrationError if g1 has not decayed to decay_target at tau_max.
SpectrumResult regression_spectrum(const PhysicalParams& params, std::span<const double> grid,
                                   const RegressionOptions& opts = {});

// g1(0) - |<s->|^2 from the same propagation, for Parseval checks.
double regression_incoherent_weight(const PhysicalParams& params);

struct KernelCheckOptions {
    double quad_tol = 1e-12;
    double window = 0.0;        // Gaussian window width for the causality transform; 0: 10 omega_c
    int causality_samples = 20;
};

struct KernelCheckReport {
    double max_residual = 0.0;   // max |G_num - G| / |G| over the grid
    double omega_at_max = 0.0;
    double max_gap_real = 0.0;   // max |Re G_num| inside the gap
    double causality_leak = 0.0; // max |G(tau < 0)| / max |G(tau > 0)| of the windowed inverse transform
    std::size_t points = 0;
    std::vector<std::string> trace; // quadrature refinement notes
};

// G(omega) = i int dw' rho(w') / (omega + omega_a - w' + i0) with
// rho(w') = beta^{3/2} sqrt(w' - omega_c) / (pi w'); the real part is pi rho, the imaginary
// part a principal value evaluated by adaptive Gauss-Kronrod after subtraction.
Complex kernel_by_quadrature(double omega, const PhysicalParams& params, double quad_tol = 1e-12,
                             std::vector<std::string>* trace = nullptr);

KernelCheckReport kernel_transform_check(const PhysicalParams& params, std::span<const double> grid,
                                         const KernelCheckOptions& opts = {});

} // namespace pbgfluor
