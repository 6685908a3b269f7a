// spectrum.hpp: steady-state resonance fluorescence spectra
//
// All spectra follow the normalization of <sigma_+(omega) sigma_-(-omega)> with the
// delta(omega_1 - omega_2) factor stripped, i.e. 2 pi times the Fourier transform of
// g1(tau) = <sigma_+(t + tau) sigma_-(t)>. The elastic line is kept as a separate weight
// multiplying delta(omega) and is never painted onto the grid.

#pragma once

#include <array>
#include <functional>
#include <vector>

#include "pbgfluor/bloch.hpp"
#include "pbgfluor/grid.hpp"
#include "pbgfluor/params.hpp"

namespace pbgfluor {

struct SpectralPoint {
    double coherent_weight = 0.0;
    double s_inc = 0.0;
    bool ill_conditioned = false;
};

using PointEvaluator = std::function<SpectralPoint(double)>;

// Free-space closed form; the elastic line sits at omega = -delta.
SpectralPoint free_space_spectrum(double omega, const PhysicalParams& params);

// Three-Lorentzian strong-drive limit (delta = 0, rabi > 0) with free-space gamma.
SpectralPoint mollow_limit_spectrum(double omega, const PhysicalParams& params);

// Band-gap spectrum under resonant drive. Caches the steady state, so construct once per
// parameter set and call for many frequencies. Throws UnsupportedError unless delta == 0
// and ConditioningError if D(0) vanishes (atom inside the gap).
class BandGapSpectrum {
public:
    explicit BandGapSpectrum(const PhysicalParams& params);
    SpectralPoint operator()(double omega) const;
    const SteadyState& steady() const noexcept { return steady_; }
    double coherent_weight() const noexcept { return coherent_; }

private:
    PhysicalParams params_;
    SteadyState steady_;
    double coherent_ = 0.0;
};

SpectralPoint pbg_spectrum(double omega, const PhysicalParams& params);

// One correlation <n_a(omega1) n_b(-omega2)>:
//   stationary * delta(omega1 - omega2) + sum_j mean_coefficients[j] <sigma_j(omega1 - omega2)>
// with j ordered (-, +, z).
struct NoiseCorrelation {
    double stationary = 0.0;
    std::array<Complex, 3> mean_coefficients{};
};

struct NoiseCorrelations {
    NoiseCorrelation minus_plus; // <n_- n_+>
    NoiseCorrelation z_z;        // <n_z n_z>
    NoiseCorrelation z_minus;    // <n_z n_->
    NoiseCorrelation minus_z;    // <n_- n_z>
    NoiseCorrelation z_plus;     // <n_z n_+>
    NoiseCorrelation plus_z;     // <n_+ n_z>
};

// Zero-temperature band-gap noise correlations (band edge only). The Heaviside factor of
// <n_z n_+> uses omega_a, which coincides with omega_L under resonant drive.
NoiseCorrelations pbg_noise_correlations(double omega1, double omega2, const PhysicalParams& params);

// Coefficient of delta(omega1 - omega2) in <n_j(omega) n_k(-omega)> once the steady-state means
// are inserted (<sigma_j(nu)> = 2 pi m_j delta(nu)). Indexed by Channel.
Matrix3c stationary_correlation_matrix(const NoiseCorrelations& corr, const SteadyState& steady);

// sum_{j,k} T(omega)[+, j] T(-omega)[-, k] C[j, k]: the incoherent spectrum from any transfer
// matrix pair and stationary noise matrix.
Complex incoherent_from_transfer(const Matrix3c& transfer_pos, const Matrix3c& transfer_neg,
                                 const Matrix3c& correlations);

struct SpectrumDiagnostics {
    std::size_t clamped = 0;          // samples in [-tol, 0) set to zero
    std::size_t violations = 0;       // samples below -tol (also set to zero)
    std::size_t ill_conditioned = 0;
    double most_negative = 0.0;       // most negative raw sample
};

inline constexpr double kNegativityTolerance = 1e-10; // relative to max s_inc

struct SpectrumResult {
    double coherent_weight = 0.0;
    std::vector<double> omega;
    std::vector<double> s_inc;
    FrequencyUnit unit = FrequencyUnit::Gamma;
    SpectrumDiagnostics diagnostics;
};

// Evaluates on fixed nodes (no refinement).
SpectrumResult sample_spectrum(const PointEvaluator& eval, std::vector<double> nodes,
                               FrequencyUnit unit, unsigned threads = 1);

// Evaluates on nodes, then refines adaptively to rel_tol.
SpectrumResult compute_spectrum(const PointEvaluator& eval, std::vector<double> nodes,
                                FrequencyUnit unit, double rel_tol, std::size_t max_points,
                                unsigned threads = 1);

// Closed form matching the reservoir (free-space formula or band-gap formula) on the
// feature-densified grid of spec.
PointEvaluator default_evaluator(const PhysicalParams& params);
SpectrumResult compute_spectrum(const PhysicalParams& params, const GridSpec& spec,
                                unsigned threads = 1);

// coherent_weight + trapezoid integral of s_inc over the grid.
double total_power(const SpectrumResult& result);

} // namespace pbgfluor
