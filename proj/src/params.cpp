#include "pbgfluor/params.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pbgfluor/errors.hpp"

namespace pbgfluor {

namespace {

void require_finite(double value, const char* name) {
    if (!std::isfinite(value)) {
        throw ValidationError(std::string(name) + " must be finite");
    }
}

void require_positive(double value, const char* name) {
    require_finite(value, name);
    if (!(value > 0.0)) {
        throw ValidationError(std::string(name) + " must be > 0");
    }
}

} // namespace

std::string to_string(FrequencyUnit unit) {
    return unit == FrequencyUnit::Beta ? "beta" : "gamma";
}

void validate(const ReservoirModel& reservoir) {
    if (const auto* fs = std::get_if<FreeSpace>(&reservoir)) {
        require_positive(fs->gamma, "gamma");
    } else {
        const auto& be = std::get<BandEdge>(reservoir);
        require_positive(be.beta, "beta");
        require_positive(be.omega_c, "omega_c");
    }
}

PhysicalParams PhysicalParams::with_detuning(double omega_a, double delta, double rabi,
                                             ReservoirModel reservoir) {
    PhysicalParams p;
    p.omega_a = omega_a;
    p.delta = delta;
    p.omega_L = omega_a + delta;
    p.rabi = rabi;
    p.reservoir = reservoir;
    p.validate();
    return p;
}

const BandEdge& PhysicalParams::band_edge() const {
    if (const auto* be = std::get_if<BandEdge>(&reservoir)) {
        return *be;
    }
    throw UnsupportedError("operation requires the band-edge reservoir model");
}

const FreeSpace& PhysicalParams::free_space() const {
    if (const auto* fs = std::get_if<FreeSpace>(&reservoir)) {
        return *fs;
    }
    throw UnsupportedError("operation requires the free-space reservoir model");
}

double PhysicalParams::unit_scale() const noexcept {
    if (const auto* be = std::get_if<BandEdge>(&reservoir)) {
        return be->beta;
    }
    return std::get<FreeSpace>(reservoir).gamma;
}

void PhysicalParams::validate() const {
    require_finite(omega_a, "omega_a");
    require_finite(omega_L, "omega_L");
    require_finite(delta, "delta");
    require_finite(rabi, "rabi");
    if (rabi < 0.0) {
        throw ValidationError("rabi must be >= 0");
    }
    const double mismatch = std::abs(delta - (omega_L - omega_a));
    const double scale = std::max({std::abs(omega_L), std::abs(omega_a), std::abs(delta), 1.0});
    if (mismatch > 8.0 * std::numeric_limits<double>::epsilon() * scale) {
        throw ValidationError("delta is inconsistent with omega_L - omega_a");
    }
    pbgfluor::validate(reservoir);
}

NormalizedParams normalize(const PhysicalParams& params) {
    params.validate();
    const double s = params.unit_scale();
    NormalizedParams out;
    out.scale = s;
    out.unit = params.unit();
    PhysicalParams& p = out.params;
    p.omega_a = params.omega_a / s;
    p.omega_L = params.omega_L / s;
    p.delta = params.delta / s;
    p.rabi = params.rabi / s;
    if (params.is_band_edge()) {
        p.reservoir = BandEdge{params.band_edge().omega_c / s, 1.0};
    } else {
        p.reservoir = FreeSpace{1.0};
    }
    return out;
}

double compute_beta(const RawCouplingConstants& raw) {
    require_positive(raw.dipole_moment, "dipole_moment");
    require_positive(raw.curvature, "curvature");
    require_positive(raw.eta, "eta");
    require_positive(raw.omega_a, "omega_a");
    require_positive(raw.hbar, "hbar");
    require_positive(raw.epsilon0, "epsilon0");
    const double beta32 = raw.omega_a * raw.omega_a * raw.dipole_moment * raw.dipole_moment * raw.eta /
                          (6.0 * raw.hbar * raw.epsilon0 * std::numbers::pi * std::pow(raw.curvature, 1.5));
    return std::cbrt(beta32 * beta32);
}

} // namespace pbgfluor
