#include "pbgfluor/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "pbgfluor/kernels.hpp"

namespace pbgfluor {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

namespace odeint = boost::numeric::odeint;

struct Generator {
    Matrix3c a;
    Vector3c b;
};

Generator markovian_generator(const PhysicalParams& params) {
    params.validate();
    const double gamma = params.free_space().gamma;
    const double d = params.delta;
    const double r = params.rabi;
    Generator g;
    g.a << kI * d - gamma / 2.0, 0.0, kI * r / 2.0,
           0.0, -kI * d - gamma / 2.0, -kI * r / 2.0,
           kI * r, -kI * r, -gamma;
    g.b << 0.0, 0.0, -gamma;
    return g;
}

using State6 = std::array<double, 6>;

Vector3c unpack(const State6& x) {
    return {Complex(x[0], x[1]), Complex(x[2], x[3]), Complex(x[4], x[5])};
}

State6 pack(const Vector3c& v) {
    return {v(0).real(), v(0).imag(), v(1).real(), v(1).imag(), v(2).real(), v(2).imag()};
}

std::string format_trace(const char* what, double lo, double hi, double value, double error, double l1) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s [%.6g, %.6g]: I=%.17g err=%.3g L1=%.3g", what, lo, hi, value, error, l1);
    return buf;
}

// Adaptive Gauss-Kronrod with one deeper retry; throws with the trace if it still misses tol.
template <class F>
double integrate_gk(F f, double lo, double hi, double tol, const char* what, std::vector<std::string>* trace) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    double error = 0.0;
    double l1 = 0.0;
    double value = GK::integrate(f, lo, hi, 15, tol, &error, &l1);
    if (error <= 100.0 * tol * l1) {
        return value;
    }
    std::vector<std::string> local;
    local.push_back(format_trace(what, lo, hi, value, error, l1));
    value = GK::integrate(f, lo, hi, 30, tol, &error, &l1);
    local.push_back(format_trace(what, lo, hi, value, error, l1));
    if (trace != nullptr) {
        trace->insert(trace->end(), local.begin(), local.end());
    }
    if (error > 1e4 * tol * l1) {
        std::string msg = "quadrature did not converge:";
        for (const auto& s : local) {
            msg += " | " + s;
        }
        throw IntegrationError(msg);
    }
    return value;
}

} // namespace

BlochState markovian_steady_state(const PhysicalParams& params) {
    const Generator g = markovian_generator(params);
    const Vector3c y = g.a.fullPivLu().solve(-g.b);
    return {y(0), y(1), y(2).real()};
}

BlochTrajectory integrate_markovian_bloch(const PhysicalParams& params, double t_end, double tol,
                                          double sample_dt, const BlochState& initial) {
    if (!(t_end > 0.0) || !(tol > 0.0) || !(sample_dt > 0.0)) {
        throw ValidationError("integrate_markovian_bloch: t_end, tol and sample_dt must be positive");
    }
    const Generator g = markovian_generator(params);
    auto rhs = [&g](const State6& x, State6& dx, double) {
        dx = pack(g.a * unpack(x) + g.b);
    };
    State6 x = pack(Vector3c(initial.sm, initial.sp, Complex(initial.sz, 0.0)));

    BlochTrajectory traj;
    traj.tol = tol;
    auto observe = [&traj](const State6& s, double t) {
        const Vector3c v = unpack(s);
        traj.t.push_back(t);
        traj.sm.push_back(v(0));
        traj.sp.push_back(v(1));
        traj.sz.push_back(v(2).real());
    };
    auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State6>>(tol, tol);
    const auto n = static_cast<std::size_t>(std::floor(t_end / sample_dt + 1e-9));
    try {
        traj.steps = odeint::integrate_n_steps(stepper, rhs, x, 0.0, sample_dt, n, observe,
                                               odeint::max_step_checker(100000));
    } catch (const std::exception& ex) {
        throw IntegrationError(std::string("Bloch integration failed: ") + ex.what());
    }
    traj.last_step = sample_dt;
    const BlochState ss = markovian_steady_state(params);
    traj.max_error_estimate = std::abs(traj.sm.back() - ss.sm) + std::abs(traj.sp.back() - ss.sp) +
                              std::abs(traj.sz.back() - ss.sz);
    return traj;
}

namespace {

struct Propagation {
    Vector3c u0;     // initial deviation of <s_j(tau) s_-(0)> from its limit
    double coherent; // |<s->|^2
    double slowest;  // smallest decay rate of the generator
    Generator gen;
};

Propagation regression_setup(const PhysicalParams& params) {
    Propagation p;
    p.gen = markovian_generator(params);
    const BlochState ss = markovian_steady_state(params);
    const Vector3c mean(ss.sm, ss.sp, Complex(ss.sz, 0.0));
    // <s- s->, <s+ s->, <sz s-> at equal times
    const Vector3c x0(0.0, 0.5 * (1.0 + ss.sz), -ss.sm);
    p.u0 = x0 - mean * ss.sm;
    p.coherent = std::norm(ss.sm);
    Eigen::ComplexEigenSolver<Matrix3c> es(p.gen.a, false);
    p.slowest = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        p.slowest = std::min(p.slowest, -es.eigenvalues()(i).real());
    }
    return p;
}

} // namespace

double regression_incoherent_weight(const PhysicalParams& params) {
    return regression_setup(params).u0(kPlus).real();
}

SpectrumResult regression_spectrum(const PhysicalParams& params, std::span<const double> grid,
                                   const RegressionOptions& opts) {
    require_increasing(grid);
    const Propagation p = regression_setup(params);
    SpectrumResult r;
    r.unit = FrequencyUnit::Gamma;
    r.omega.assign(grid.begin(), grid.end());
    r.s_inc.assign(grid.size(), 0.0);
    r.coherent_weight = 4.0 * kPi * kPi * p.coherent;
    const double u_norm = p.u0.norm();
    if (u_norm == 0.0) {
        return r;
    }
    if (!(p.slowest > 0.0)) {
        throw IntegrationError("regression: generator has no decaying modes");
    }
    const double tau_max = opts.tau_max > 0.0 ? opts.tau_max : std::log(1.0 / opts.decay_target) / p.slowest;

    const std::size_t k = grid.size();
    std::vector<double> nu(k);
    for (std::size_t i = 0; i < k; ++i) {
        nu[i] = grid[i] + params.delta;
    }
    using State = std::vector<double>;
    State x(6 + 2 * k, 0.0);
    const State6 u = pack(p.u0);
    std::copy(u.begin(), u.end(), x.begin());
    const Matrix3c& a = p.gen.a;
    auto rhs = [&](const State& s, State& ds, double tau) {
        const Vector3c v(Complex(s[0], s[1]), Complex(s[2], s[3]), Complex(s[4], s[5]));
        const Vector3c dv = a * v;
        for (int j = 0; j < 3; ++j) {
            ds[2 * j] = dv(j).real();
            ds[2 * j + 1] = dv(j).imag();
        }
        const Complex g1 = v(kPlus);
        for (std::size_t i = 0; i < k; ++i) {
            const Complex val = g1 * std::polar(1.0, nu[i] * tau);
            ds[6 + 2 * i] = val.real();
            ds[6 + 2 * i + 1] = val.imag();
        }
    };
    auto stepper = odeint::make_controlled<odeint::runge_kutta_fehlberg78<State>>(opts.abs_tol, opts.rel_tol);
    try {
        odeint::integrate_adaptive(stepper, rhs, x, 0.0, tau_max, 1e-3 / (p.slowest + 1.0));
    } catch (const std::exception& ex) {
        throw IntegrationError(std::string("regression integration failed: ") + ex.what());
    }
    const double residual = std::hypot(std::hypot(x[0], x[1]), std::hypot(x[2], x[3]), std::hypot(x[4], x[5]));
    if (residual > opts.decay_target * u_norm * 10.0) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "regression: correlation not decayed at tau_max=%.6g (%.3g of initial)",
                      tau_max, residual / u_norm);
        throw IntegrationError(buf);
    }
    for (std::size_t i = 0; i < k; ++i) {
        r.s_inc[i] = 2.0 * kPi * 2.0 * x[6 + 2 * i];
    }
    return r;
}

Complex kernel_by_quadrature(double omega, const PhysicalParams& params, double quad_tol,
                             std::vector<std::string>* trace) {
    const BandEdge& be = params.band_edge();
    const double pref = be.beta * std::sqrt(be.beta) / kPi;
    const double z = omega + params.omega_a;
    const double a = z - be.omega_c;
    // w' = omega_c + t^2: rho(w') dw' = pref * F(t) dt
    auto big_f = [&](double t) { return 2.0 * t * t / (be.omega_c + t * t); };
    const double inf = std::numeric_limits<double>::infinity();
    double im = 0.0;
    double re = 0.0;
    if (a <= 0.0) {
        auto f = [&](double t) {
            const double den = a - t * t;
            return den == 0.0 ? -2.0 / be.omega_c : big_f(t) / den;
        };
        im = integrate_gk(f, 0.0, inf, quad_tol, "gap", trace);
    } else {
        const double s = std::sqrt(a);
        const double fs = big_f(s);
        // PV int_0^inf dt / (a - t^2) = 0, so subtracting F(s) leaves a regular integrand.
        auto f = [&](double t) {
            const double den = a - t * t;
            return den == 0.0 ? 0.0 : (big_f(t) - fs) / den;
        };
        im = integrate_gk(f, 0.0, s, quad_tol, "below pole", trace) +
             integrate_gk(f, s, inf, quad_tol, "above pole", trace);
        re = kPi * pref * std::sqrt(a) / z;
    }
    return {re, pref * im};
}

KernelCheckReport kernel_transform_check(const PhysicalParams& params, std::span<const double> grid,
                                         const KernelCheckOptions& opts) {
    params.validate();
    const BandEdge& be = params.band_edge();
    KernelCheckReport rep;
    rep.points = grid.size();
    for (double w : grid) {
        const Complex num = kernel_by_quadrature(w, params, opts.quad_tol, &rep.trace);
        const Complex ref = memory_kernel(w, params);
        const double res = std::abs(num - ref) / std::abs(ref);
        if (res > rep.max_residual) {
            rep.max_residual = res;
            rep.omega_at_max = w;
        }
        if (w + params.omega_a < be.omega_c) {
            rep.max_gap_real = std::max(rep.max_gap_real, std::abs(num.real()));
        }
    }

    // Gaussian-windowed inverse transform G_W(tau) = (1/2 pi) int G(w) e^{-i w tau - w^2 / 2W^2} dw.
    const double width = opts.window > 0.0 ? opts.window : 10.0 * be.omega_c;
    const double cusp = be.omega_c - params.omega_a;
    auto inverse = [&](double tau) {
        auto part = [&](auto pick) {
            auto f = [&](double w) {
                const Complex v = memory_kernel(w, params) * std::polar(1.0, -w * tau) *
                                  std::exp(-0.5 * w * w / (width * width));
                return pick(v);
            };
            const double lo = -8.0 * width;
            const double hi = 8.0 * width;
            const double mid = std::clamp(cusp, lo, hi);
            return integrate_gk(f, lo, mid, 1e-10, "window", &rep.trace) +
                   integrate_gk(f, mid, hi, 1e-10, "window", &rep.trace);
        };
        const double re = part([](Complex v) { return v.real(); });
        const double im = part([](Complex v) { return v.imag(); });
        return std::abs(Complex(re, im)) / (2.0 * kPi);
    };
    double causal = 0.0;
    double acausal = 0.0;
    for (int j = 0; j < opts.causality_samples; ++j) {
        causal = std::max(causal, inverse((0.25 + 0.5 * j) / width));
        acausal = std::max(acausal, inverse(-(6.0 + j) / width));
    }
    rep.causality_leak = causal > 0.0 ? acausal / causal : 0.0;
    return rep;
}

} // namespace pbgfluor
