// params.hpp: physical parameters of the driven two-level atom and its reservoir

#pragma once

#include <string>
#include <variant>

namespace pbgfluor {

// Markovian free-space reservoir with spontaneous decay rate gamma.
struct FreeSpace {
    double gamma = 1.0;
};

// Anisotropic band-edge reservoir: DOS ~ sqrt(omega - omega_c) above the edge,
// coupling scale beta (the natural frequency unit of this model).
struct BandEdge {
    double omega_c = 100.0;
    double beta = 1.0;
};

using ReservoirModel = std::variant<FreeSpace, BandEdge>;

enum class FrequencyUnit { Beta, Gamma };

std::string to_string(FrequencyUnit unit);

void validate(const ReservoirModel& reservoir);

struct PhysicalParams {
    double omega_a = 0.0; // atomic transition
    double omega_L = 0.0; // drive
    double delta = 0.0;   // omega_L - omega_a, stored redundantly and cross-checked
    double rabi = 0.0;
    ReservoirModel reservoir = FreeSpace{};

    // Builds a consistent parameter set from the detuning.
    static PhysicalParams with_detuning(double omega_a, double delta, double rabi,
                                        ReservoirModel reservoir);
    static PhysicalParams resonant(double omega_a, double rabi, ReservoirModel reservoir) {
        return with_detuning(omega_a, 0.0, rabi, reservoir);
    }

    bool is_band_edge() const noexcept { return std::holds_alternative<BandEdge>(reservoir); }
    bool is_free_space() const noexcept { return std::holds_alternative<FreeSpace>(reservoir); }

    // Throw UnsupportedError when the other model is active.
    const BandEdge& band_edge() const;
    const FreeSpace& free_space() const;

    FrequencyUnit unit() const noexcept {
        return is_band_edge() ? FrequencyUnit::Beta : FrequencyUnit::Gamma;
    }
    // beta for band-edge runs, gamma for free-space runs.
    double unit_scale() const noexcept;

    // Throws ValidationError on non-finite frequencies, negative Rabi frequency,
    // inconsistent detuning or an invalid reservoir.
    void validate() const;
};

struct NormalizedParams {
    PhysicalParams params;
    double scale = 1.0; // original value of beta (band edge) or gamma (free space)
    FrequencyUnit unit = FrequencyUnit::Gamma;
};

// Rescale every frequency so that beta = 1 (band edge) or gamma = 1 (free space).
NormalizedParams normalize(const PhysicalParams& params);

// SI values used by compute_beta unless overridden.
inline constexpr double kHbar = 1.054571817e-34;     // J s
inline constexpr double kEpsilon0 = 8.8541878128e-12; // F / m

struct RawCouplingConstants {
    double dipole_moment = 0.0; // |d|
    double curvature = 0.0;     // A in omega_k = omega_c + A |k - k0|^2
    double eta = 0.0;           // space-averaged coupling strength
    double omega_a = 0.0;
    double hbar = kHbar;
    double epsilon0 = kEpsilon0;
};

// beta = (omega_a^2 d^2 eta / (6 hbar epsilon0 pi A^{3/2}))^{2/3}
double compute_beta(const RawCouplingConstants& raw);

} // namespace pbgfluor
