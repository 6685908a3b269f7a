#include "pbgfluor/first_order.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pbgfluor/kernels.hpp"
#include "pbgfluor/parallel.hpp"

namespace pbgfluor {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

void require_resonant_band_edge(const PhysicalParams& params) {
    (void)params.band_edge();
    if (params.delta != 0.0) {
        throw UnsupportedError("first-order band-gap correction is defined for resonant drive only");
    }
}

// beta^{3/2} sqrt(x - omega_c) / x above the edge, 0 at or below it.
double envelope_at(double x, const BandEdge& be) {
    if (x - be.omega_c <= 0.0) {
        return 0.0;
    }
    return be.beta * std::sqrt(be.beta) * std::sqrt(x - be.omega_c) / x;
}

double scale_for(double omega, const PhysicalParams& params) {
    const double u = params.unit_scale();
    const double r = params.rabi;
    const double w = std::abs(omega);
    return r * r * r + w * w * w + u * u * u;
}

} // namespace

ShiftedKernels shifted_kernels(double omega, const PhysicalParams& params) {
    ShiftedKernels k;
    k.omega = omega;
    k.gp = memory_kernel(omega + params.rabi, params);
    k.gm = memory_kernel(omega - params.rabi, params);
    k.gcp = memory_kernel_conj(omega + params.rabi, params);
    k.gcm = memory_kernel_conj(omega - params.rabi, params);
    return k;
}

SystemMatrix first_order_system(double omega, const PhysicalParams& params) {
    params.validate();
    if (params.is_band_edge()) {
        require_resonant_band_edge(params);
    }
    const double r = params.rabi;
    const ShiftedKernels k = shifted_kernels(omega, params);
    const Complex c = k.cos_part();
    const Complex s = k.sin_part();
    const Complex cc = k.cos_part_conj();
    const Complex sc = k.sin_part_conj();
    const Complex gsum = memory_kernel(omega, params) + memory_kernel_conj(omega, params);

    SystemMatrix sys;
    sys.omega = omega;
    sys.matrix << -kI * omega - kI * params.delta + c, 0.0, -kI * r / 2.0 + kI * s / 2.0,
                  0.0, -kI * omega + kI * params.delta + cc, kI * r / 2.0 - kI * sc / 2.0,
                  -kI * r + kI * s, kI * r - kI * sc, -kI * omega + (0.5 * gsum + 0.5 * (c + cc));

    const ShiftedKernels k0 = shifted_kernels(0.0, params);
    const Complex g0sum = memory_kernel(0.0, params) + memory_kernel_conj(0.0, params);
    const double two_pi = 2.0 * kPi;
    sys.delta_source << two_pi * (-kI * k0.sin_part() / 2.0),
                        two_pi * (kI * k0.sin_part_conj() / 2.0),
                        -two_pi * (0.5 * (g0sum + (k0.cos_part() + k0.cos_part_conj())));
    return sys;
}

SteadyState first_order_steady_state(const PhysicalParams& params, double tol) {
    const SystemMatrix at_zero = first_order_system(0.0, params);
    SteadyState ss = steady_state_from_system(at_zero);
    if (std::abs(ss.denominator) < tol * scale_for(0.0, params)) {
        throw ConditioningError("first-order steady state: system is singular at omega = 0", ss.denominator);
    }
    return ss;
}

NoiseCorrelations first_order_noise_correlations(double omega1, double omega2, const PhysicalParams& params,
                                                 const FirstOrderOptions& opts) {
    params.validate();
    require_resonant_band_edge(params);
    const BandEdge& be = params.band_edge();
    const double r = params.rabi;
    const double n1 = envelope_at(params.omega_a + omega1 + r, be);
    const double n2 = envelope_at(params.omega_a + omega1 - r, be);
    const double n0 = envelope_at(params.omega_a + omega1, be);
    const double two_pi = 2.0 * kPi;

    NoiseCorrelations c;
    c.minus_plus.stationary = two_pi * (n1 + n2);
    c.minus_plus.mean_coefficients[kMinus] = n1 - n2;
    c.minus_plus.mean_coefficients[kPlus] = n1 - n2;

    c.z_z.stationary = two_pi * (n1 + n2) + 2.0 * two_pi * n0;
    c.z_z.mean_coefficients[kZ] = n1 + n2 + 2.0 * n0;
    if (opts.zz == ZZVariant::Symmetrized) {
        c.z_z.mean_coefficients[kMinus] = n1 - n2;
        c.z_z.mean_coefficients[kPlus] = n1 - n2;
    } else {
        c.z_z.mean_coefficients[kMinus] = 2.0 * (n1 - n2);
    }

    c.minus_z.stationary = two_pi * (n1 - n2);
    c.minus_z.mean_coefficients[kMinus] = 2.0 * (n1 + n2);
    c.minus_z.mean_coefficients[kZ] = n1 - n2;

    const double w = opts.z_plus == ZPlusCutoff::Omega1 ? omega1 : omega2;
    const double p1 = envelope_at(params.omega_a + w + r, be);
    const double p2 = envelope_at(params.omega_a + w - r, be);
    c.z_plus.stationary = two_pi * (p1 - p2);
    c.z_plus.mean_coefficients[kPlus] = 2.0 * (p1 + p2);
    c.z_plus.mean_coefficients[kZ] = p1 - p2;
    return c;
}

FirstOrderSpectrum::FirstOrderSpectrum(const PhysicalParams& params, const FirstOrderOptions& opts)
    : params_(params), opts_(opts) {
    params_.validate();
    require_resonant_band_edge(params_);
    steady_ = first_order_steady_state(params_);
    coherent_ = (4.0 * kPi * kPi * steady_.sm * steady_.sp).real();
}

Complex FirstOrderSpectrum::raw(double omega) const {
    const BandEdge& be = params_.band_edge();
    if (params_.omega_a + omega + params_.rabi - be.omega_c <= 0.0) {
        return 0.0; // every cutoff closed
    }
    const NoiseCorrelations corr = first_order_noise_correlations(omega, omega, params_, opts_);
    const Matrix3c c = stationary_correlation_matrix(corr, steady_);
    const TransferMatrix pos = invert_system(first_order_system(omega, params_), scale_for(omega, params_));
    const TransferMatrix neg = invert_system(first_order_system(-omega, params_), scale_for(omega, params_));
    return incoherent_from_transfer(pos.coefficients, neg.coefficients, c);
}

SpectralPoint FirstOrderSpectrum::operator()(double omega) const {
    SpectralPoint p;
    p.coherent_weight = coherent_;
    p.s_inc = raw(omega).real();
    return p;
}

SpectralPoint first_order_spectrum(double omega, const PhysicalParams& params, const FirstOrderOptions& opts) {
    return FirstOrderSpectrum(params, opts)(omega);
}

OrderComparison order_comparison(const PhysicalParams& params, std::span<const double> grid,
                                 const FirstOrderOptions& opts, unsigned threads) {
    require_increasing(grid);
    const BandGapSpectrum zeroth(params);
    const FirstOrderSpectrum first(params, opts);
    const std::size_t n = grid.size();
    std::vector<double> s0(n), diff(n), imag(n);
    parallel_for(n, threads, [&](std::size_t i) {
        const double s = zeroth(grid[i]).s_inc;
        const Complex t = first.raw(grid[i]);
        s0[i] = std::abs(s);
        diff[i] = std::abs(t.real() - s);
        imag[i] = std::abs(t.imag());
    });
    OrderComparison rep;
    rep.rabi = params.rabi;
    rep.points = n;
    rep.coherent_zeroth = zeroth.coherent_weight();
    rep.coherent_first = first.coherent_weight();
    const double peak = n == 0 ? 0.0 : *std::max_element(s0.begin(), s0.end());
    if (peak > 0.0) {
        const auto it = std::max_element(diff.begin(), diff.end());
        rep.max_relative = *it / peak;
        rep.omega_at_max = grid[static_cast<std::size_t>(it - diff.begin())];
        rep.max_imag_relative = *std::max_element(imag.begin(), imag.end()) / peak;
        const double area = trapezoid(grid, s0);
        rep.integrated_relative = area > 0.0 ? trapezoid(grid, diff) / area : 0.0;
    }
    return rep;
}

} // namespace pbgfluor
