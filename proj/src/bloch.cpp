#include "pbgfluor/bloch.hpp"

#include <cmath>
#include <numbers>

#include "pbgfluor/kernels.hpp"

namespace pbgfluor {

namespace {

constexpr Complex kI{0.0, 1.0};

double conditioning_scale(double omega, const PhysicalParams& params) {
    const double u = params.unit_scale();
    const double r = params.rabi;
    const double w = std::abs(omega);
    return r * r * r + w * w * w + u * u * u;
}

Complex shared_denominator(const Shorthand& s, double rabi) {
    return rabi * rabi * (s.f + s.g) + 2.0 * s.f * s.g * s.h;
}

} // namespace

Shorthand shorthand(double omega, const PhysicalParams& params) {
    const Complex gk = memory_kernel(omega, params);
    const Complex gck = memory_kernel_conj(omega, params);
    Shorthand s;
    s.omega = omega;
    s.f = -kI * omega - kI * params.delta + gk;
    s.g = -kI * omega + kI * params.delta + gck;
    s.h = -kI * omega + (gk + gck);
    return s;
}

Denominator denominator(double omega, const PhysicalParams& params, double tol) {
    const Complex d = shared_denominator(shorthand(omega, params), params.rabi);
    return {d, std::abs(d) < tol * conditioning_scale(omega, params)};
}

SystemMatrix system_matrix(double omega, const PhysicalParams& params) {
    const Shorthand s = shorthand(omega, params);
    const double r = params.rabi;
    SystemMatrix sys;
    sys.omega = omega;
    sys.matrix << s.f, 0.0, -kI * r / 2.0,
                  0.0, s.g, kI * r / 2.0,
                  -kI * r, kI * r, s.h;
    const Complex g0 = memory_kernel(0.0, params) + memory_kernel_conj(0.0, params);
    sys.delta_source << 0.0, 0.0, -2.0 * std::numbers::pi * g0;
    return sys;
}

SteadyState steady_state(const PhysicalParams& params, double tol) {
    params.validate();
    const Shorthand s0 = shorthand(0.0, params);
    const Denominator d0 = denominator(0.0, params, tol);
    if (d0.ill_conditioned) {
        throw ConditioningError("steady state: D(0) is numerically zero", d0.value);
    }
    const Complex gp = memory_kernel(0.0, params) + memory_kernel_conj(0.0, params);
    const double r = params.rabi;
    const Complex sz = -2.0 * s0.f * s0.g * gp / d0.value;
    SteadyState ss;
    ss.sz = sz.real();
    ss.sz_imag = sz.imag();
    ss.sm = -kI * s0.g * r * gp / d0.value;
    ss.sp = kI * s0.f * r * gp / d0.value;
    ss.denominator = d0.value;
    return ss;
}

SteadyState steady_state_from_system(const SystemMatrix& at_zero) {
    const Vector3c rhs = at_zero.delta_source / (2.0 * std::numbers::pi);
    const Vector3c m = at_zero.matrix.fullPivLu().solve(rhs);
    SteadyState ss;
    ss.sm = m(kMinus);
    ss.sp = m(kPlus);
    ss.sz = m(kZ).real();
    ss.sz_imag = m(kZ).imag();
    ss.denominator = 2.0 * at_zero.matrix.determinant();
    return ss;
}

TransferMatrix solution_coefficients(double omega, const PhysicalParams& params, double tol) {
    const Shorthand s = shorthand(omega, params);
    const double r = params.rabi;
    const double r2 = r * r;
    const Complex d = shared_denominator(s, r);
    TransferMatrix t;
    t.omega = omega;
    t.denominator = d;
    t.ill_conditioned = std::abs(d) < tol * conditioning_scale(omega, params);
    t.coefficients << 2.0 * s.g * s.h + r2, r2, kI * s.g * r,
                      r2, 2.0 * s.f * s.h + r2, -kI * s.f * r,
                      2.0 * kI * s.g * r, -2.0 * kI * s.f * r, 2.0 * s.f * s.g;
    t.coefficients /= d;
    return t;
}

TransferMatrix invert_system(const SystemMatrix& system, double conditioning_scale, double tol) {
    TransferMatrix t;
    t.omega = system.omega;
    t.denominator = 2.0 * system.matrix.determinant();
    t.ill_conditioned = std::abs(t.denominator) < tol * conditioning_scale;
    t.coefficients = system.matrix.inverse();
    return t;
}

} // namespace pbgfluor
