#include "pbgfluor/spectrum.hpp"

#include <algorithm>
#include <atomic>
#include <memory>
#include <cmath>
#include <numbers>

#include "pbgfluor/kernels.hpp"
#include "pbgfluor/parallel.hpp"

namespace pbgfluor {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr Complex kI{0.0, 1.0};

// Theta(omega + omega_a - omega_c) N(omega), never touching N's domain below the edge.
double gated_envelope(double omega, const PhysicalParams& params) {
    if (params.omega_a + omega - params.band_edge().omega_c <= 0.0) {
        return 0.0;
    }
    return noise_envelope(omega, params);
}

void finalize(SpectrumResult& r) {
    double peak = 0.0;
    for (double v : r.s_inc) {
        peak = std::max(peak, v);
    }
    const double tol = kNegativityTolerance * peak;
    for (double& v : r.s_inc) {
        if (v < 0.0) {
            r.diagnostics.most_negative = std::min(r.diagnostics.most_negative, v);
            if (v >= -tol) {
                ++r.diagnostics.clamped;
            } else {
                ++r.diagnostics.violations;
            }
            v = 0.0;
        }
    }
}

} // namespace

SpectralPoint free_space_spectrum(double omega, const PhysicalParams& params) {
    params.validate();
    const double gamma = params.free_space().gamma;
    const double r2 = params.rabi * params.rabi;
    const double d2 = params.delta * params.delta;
    const double g2 = gamma * gamma;
    const double a = r2 / 2.0 + d2 + g2 / 4.0;
    const double x = omega + params.delta;
    const double x2 = x * x;

    SpectralPoint p;
    p.coherent_weight = kPi * kPi * r2 * (g2 / 4.0 + d2) / (a * a);
    const double t1 = a - 2.0 * x2;
    const double t2 = r2 + d2 + 1.25 * g2 - x2;
    p.s_inc = kPi * gamma * r2 * r2 * (r2 / 2.0 + g2 + x2) / (2.0 * a * (g2 * t1 * t1 + x2 * t2 * t2));
    return p;
}

SpectralPoint mollow_limit_spectrum(double omega, const PhysicalParams& params) {
    params.validate();
    const double gamma = params.free_space().gamma;
    if (params.delta != 0.0) {
        throw UnsupportedError("Mollow limit requires resonant drive (delta = 0)");
    }
    if (!(params.rabi > 0.0)) {
        throw ValidationError("Mollow limit requires rabi > 0");
    }
    const double r = params.rabi;
    const double g2 = gamma * gamma;
    auto side = [&](double x) { return (3.0 / 16.0) * gamma / (x * x + (9.0 / 16.0) * g2); };
    SpectralPoint p;
    p.coherent_weight = 2.0 * kPi * 2.0 * kPi * g2 / (4.0 * r * r);
    p.s_inc = 2.0 * kPi * (side(omega + r) + 0.25 * gamma / (omega * omega + 0.25 * g2) + side(omega - r));
    return p;
}

BandGapSpectrum::BandGapSpectrum(const PhysicalParams& params) : params_(params) {
    params_.validate();
    (void)params_.band_edge();
    if (params_.delta != 0.0) {
        throw UnsupportedError("band-gap spectrum is defined for resonant drive only (delta = 0)");
    }
    steady_ = steady_state(params_);
    const Shorthand s0 = shorthand(0.0, params_);
    const Complex gp = memory_kernel(0.0, params_) + memory_kernel_conj(0.0, params_);
    const double r2 = params_.rabi * params_.rabi;
    const Complex d0 = steady_.denominator;
    coherent_ = (4.0 * kPi * kPi * r2 * s0.f * s0.g * gp * gp / (d0 * d0)).real();
}

SpectralPoint BandGapSpectrum::operator()(double omega) const {
    SpectralPoint p;
    p.coherent_weight = coherent_;
    const double envelope = gated_envelope(omega, params_);
    if (envelope == 0.0) {
        return p;
    }
    const double r = params_.rabi;
    const double r2 = r * r;
    const Shorthand pos = shorthand(omega, params_);
    const Shorthand neg = shorthand(-omega, params_);
    const Denominator d_pos = denominator(omega, params_);
    const Denominator d_neg = denominator(-omega, params_);
    const Complex sm = 2.0 * kPi * steady_.sm;
    const Complex sp = 2.0 * kPi * steady_.sp;
    const double sz = 2.0 * kPi * steady_.sz;
    const Complex numerator = kPi * r2 * r2 + kI * r2 * r * neg.g * sm - kI * r2 * r * pos.f * sp +
                              r2 * pos.f * neg.g * (2.0 * kPi + sz);
    p.s_inc = (envelope * numerator / (d_pos.value * d_neg.value)).real();
    p.ill_conditioned = d_pos.ill_conditioned || d_neg.ill_conditioned;
    return p;
}

SpectralPoint pbg_spectrum(double omega, const PhysicalParams& params) {
    return BandGapSpectrum(params)(omega);
}

NoiseCorrelations pbg_noise_correlations(double omega1, double /*omega2*/, const PhysicalParams& params) {
    params.validate();
    const double n = gated_envelope(omega1, params);
    NoiseCorrelations c;
    c.minus_plus.stationary = kPi * n;
    c.z_z.stationary = 2.0 * kPi * n;
    c.z_z.mean_coefficients[kZ] = n;
    c.minus_z.mean_coefficients[kMinus] = n;
    c.z_plus.mean_coefficients[kPlus] = n;
    return c;
}

Matrix3c stationary_correlation_matrix(const NoiseCorrelations& corr, const SteadyState& steady) {
    const std::array<Complex, 3> means{steady.sm, steady.sp, Complex(steady.sz, 0.0)};
    auto collapse = [&](const NoiseCorrelation& c) {
        Complex v = c.stationary;
        for (int j = 0; j < 3; ++j) {
            v += c.mean_coefficients[j] * 2.0 * kPi * means[j];
        }
        return v;
    };
    Matrix3c m = Matrix3c::Zero();
    m(kMinus, kPlus) = collapse(corr.minus_plus);
    m(kZ, kZ) = collapse(corr.z_z);
    m(kZ, kMinus) = collapse(corr.z_minus);
    m(kMinus, kZ) = collapse(corr.minus_z);
    m(kZ, kPlus) = collapse(corr.z_plus);
    m(kPlus, kZ) = collapse(corr.plus_z);
    return m;
}

Complex incoherent_from_transfer(const Matrix3c& transfer_pos, const Matrix3c& transfer_neg,
                                 const Matrix3c& correlations) {
    Complex sum = 0.0;
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
            sum += transfer_pos(kPlus, j) * transfer_neg(kMinus, k) * correlations(j, k);
        }
    }
    return sum;
}

SpectrumResult sample_spectrum(const PointEvaluator& eval, std::vector<double> nodes,
                               FrequencyUnit unit, unsigned threads) {
    require_increasing(nodes);
    SpectrumResult r;
    r.unit = unit;
    r.omega = std::move(nodes);
    r.s_inc.resize(r.omega.size());
    std::vector<char> flags(r.omega.size(), 0);
    parallel_for(r.omega.size(), threads, [&](std::size_t i) {
        const SpectralPoint p = eval(r.omega[i]);
        r.s_inc[i] = p.s_inc;
        flags[i] = p.ill_conditioned ? 1 : 0;
    });
    r.diagnostics.ill_conditioned = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), 1));
    r.coherent_weight = r.omega.empty() ? 0.0 : eval(r.omega.front()).coherent_weight;
    finalize(r);
    return r;
}

SpectrumResult compute_spectrum(const PointEvaluator& eval, std::vector<double> nodes,
                                FrequencyUnit unit, double rel_tol, std::size_t max_points,
                                unsigned threads) {
    std::atomic<std::size_t> flagged{0};
    auto fn = [&](double w) {
        const SpectralPoint p = eval(w);
        if (p.ill_conditioned) {
            flagged.fetch_add(1, std::memory_order_relaxed);
        }
        return p.s_inc;
    };
    Samples s = refine_adaptive(fn, std::move(nodes), rel_tol, max_points, threads);
    SpectrumResult r;
    r.unit = unit;
    r.omega = std::move(s.x);
    r.s_inc = std::move(s.y);
    r.coherent_weight = r.omega.empty() ? 0.0 : eval(r.omega.front()).coherent_weight;
    r.diagnostics.ill_conditioned = flagged.load();
    finalize(r);
    return r;
}

PointEvaluator default_evaluator(const PhysicalParams& params) {
    params.validate();
    if (params.is_free_space()) {
        return [params](double w) { return free_space_spectrum(w, params); };
    }
    auto spectrum = std::make_shared<const BandGapSpectrum>(params);
    return [spectrum](double w) { return (*spectrum)(w); };
}

SpectrumResult compute_spectrum(const PhysicalParams& params, const GridSpec& spec, unsigned threads) {
    const PointEvaluator eval = default_evaluator(params);
    const auto features = expected_features(params, spec);
    return compute_spectrum(eval, make_grid(spec, features), params.unit(), spec.refine_tol,
                            spec.max_points, threads);
}

double total_power(const SpectrumResult& result) {
    require_increasing(result.omega);
    if (result.omega.size() != result.s_inc.size()) {
        throw ValidationError("spectrum: omega and s_inc differ in length");
    }
    return result.coherent_weight + trapezoid(result.omega, result.s_inc);
}

} // namespace pbgfluor
