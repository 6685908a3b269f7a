#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pbgfluor/kernels.hpp"
#include "pbgfluor/spectrum.hpp"

using namespace pbgfluor;

namespace {

constexpr double kPi = std::numbers::pi;

Matrix3c free_space_noise(double gamma, const SteadyState& ss) {
    // zero-th order correlations with the band-edge envelope replaced by the flat 2 gamma
    const double n = 2.0 * gamma;
    Matrix3c c = Matrix3c::Zero();
    c(kMinus, kPlus) = kPi * n;
    c(kZ, kZ) = n * 2.0 * kPi * (1.0 + ss.sz);
    c(kMinus, kZ) = n * 2.0 * kPi * ss.sm;
    c(kZ, kPlus) = n * 2.0 * kPi * ss.sp;
    return c;
}

} // namespace

TEST_CASE("free-space spectrum basics") {
    const auto undriven = PhysicalParams::resonant(0.0, 0.0, FreeSpace{1.0});
    for (double w : {-2.0, 0.0, 1.0}) {
        const SpectralPoint p = free_space_spectrum(w, undriven);
        CHECK(p.s_inc == 0.0);
        CHECK(p.coherent_weight == 0.0);
    }
    for (double rabi : {0.2, 1.0, 3.0}) {
        for (double gamma : {0.5, 2.0}) {
            const auto p = PhysicalParams::resonant(0.0, rabi, FreeSpace{gamma});
            const SteadyState ss = steady_state(p);
            const double coh = free_space_spectrum(0.0, p).coherent_weight;
            CHECK(coh == doctest::Approx(4.0 * kPi * kPi * std::norm(ss.sm)).epsilon(1e-13));
        }
    }
}

TEST_CASE("free-space closed form equals the transfer-matrix route") {
    for (const auto& p : {PhysicalParams::resonant(0.0, 2.0, FreeSpace{1.0}),
                          PhysicalParams::with_detuning(0.0, 0.8, 1.3, FreeSpace{0.7})}) {
        const SteadyState ss = steady_state(p);
        const Matrix3c c = free_space_noise(p.free_space().gamma, ss);
        for (double w : {-4.0, -1.5, -0.2, 0.0, 0.3, 2.2}) {
            const Complex s = incoherent_from_transfer(solution_coefficients(w, p).coefficients,
                                                       solution_coefficients(-w, p).coefficients, c);
            // the closed form is written in omega + delta
            const double ref = free_space_spectrum(w - p.delta, p).s_inc;
            CHECK(s.real() == doctest::Approx(ref).epsilon(1e-12));
            CHECK(std::abs(s.imag()) < 1e-12 * ref);
        }
    }
}

TEST_CASE("Mollow limit") {
    const auto p = PhysicalParams::resonant(0.0, 20.0, FreeSpace{1.0});
    const double side = mollow_limit_spectrum(20.0, p).s_inc;
    const double centre = mollow_limit_spectrum(0.0, p).s_inc;
    CHECK(centre / side == doctest::Approx(3.0).epsilon(1e-2));
    CHECK(mollow_limit_spectrum(0.0, p).coherent_weight == doctest::Approx(kPi * kPi / 400.0));
    CHECK_THROWS_AS(mollow_limit_spectrum(0.0, PhysicalParams::with_detuning(0.0, 1.0, 1.0, FreeSpace{})),
                    UnsupportedError);

    const auto strong = PhysicalParams::resonant(0.0, 50.0, FreeSpace{1.0});
    for (double centre_w : {-50.0, 0.0, 50.0}) {
        for (double dw : {-1.0, -0.3, 0.0, 0.4, 1.0}) {
            const double w = centre_w + dw;
            CHECK(free_space_spectrum(w, strong).s_inc ==
                  doctest::Approx(mollow_limit_spectrum(w, strong).s_inc).epsilon(2e-2));
        }
    }
}

TEST_CASE("band-gap spectrum against the transfer-matrix route") {
    for (const auto& p : {PhysicalParams::resonant(100.27, 0.3, BandEdge{}),
                          PhysicalParams::resonant(1000.0, 0.3, BandEdge{}),
                          PhysicalParams::resonant(150.0, 2.0, BandEdge{100.0, 1.7})}) {
        const BandGapSpectrum spec(p);
        for (double w : {-0.26, -0.1, 0.0, 0.05, 0.31, 1.0}) {
            const Matrix3c c = stationary_correlation_matrix(pbg_noise_correlations(w, w, p), spec.steady());
            const Complex s = incoherent_from_transfer(solution_coefficients(w, p).coefficients,
                                                       solution_coefficients(-w, p).coefficients, c);
            const double direct = spec(w).s_inc;
            CHECK(s.real() == doctest::Approx(direct).epsilon(1e-11));
            CHECK(std::abs(s.imag()) <= 1e-11 * std::abs(direct) + 1e-300);
        }
        CHECK(spec.coherent_weight() == doctest::Approx(4.0 * kPi * kPi * std::norm(spec.steady().sm)).epsilon(1e-12));
        CHECK(pbg_spectrum(0.0, p).s_inc == spec(0.0).s_inc);
    }
}

TEST_CASE("band-gap support and preconditions") {
    const auto p = PhysicalParams::resonant(100.27, 0.3, BandEdge{});
    const BandGapSpectrum spec(p);
    CHECK(spec(-0.27).s_inc == 0.0);
    CHECK(spec(-0.5).s_inc == 0.0);
    CHECK(spec(-0.2699).s_inc > 0.0);
    CHECK_THROWS_AS(BandGapSpectrum(PhysicalParams::with_detuning(100.27, 0.1, 0.3, BandEdge{})), UnsupportedError);
    CHECK_THROWS_AS(BandGapSpectrum(PhysicalParams::resonant(0.0, 1.0, FreeSpace{})), UnsupportedError);
    CHECK_THROWS_AS(BandGapSpectrum(PhysicalParams::resonant(99.0, 0.3, BandEdge{})), ConditioningError);
    const BandGapSpectrum undriven(PhysicalParams::resonant(100.27, 0.0, BandEdge{}));
    CHECK(undriven(0.1).s_inc == 0.0);
    CHECK(undriven.coherent_weight() == 0.0);
}

TEST_CASE("noise correlations") {
    const auto p = PhysicalParams::resonant(104.0, 0.3, BandEdge{});
    const NoiseCorrelations c = pbg_noise_correlations(0.0, 0.0, p);
    const double n = noise_envelope(0.0, p);
    CHECK(c.minus_plus.stationary == doctest::Approx(kPi * n));
    CHECK(c.z_minus.stationary == 0.0);
    CHECK(c.plus_z.stationary == 0.0);
    for (int j = 0; j < 3; ++j) {
        CHECK(c.z_minus.mean_coefficients[j] == Complex(0.0, 0.0));
        CHECK(c.plus_z.mean_coefficients[j] == Complex(0.0, 0.0));
    }
    const NoiseCorrelations closed = pbg_noise_correlations(-4.5, -4.5, p);
    CHECK(closed.minus_plus.stationary == 0.0);
    CHECK(closed.z_z.stationary == 0.0);
    CHECK(closed.z_plus.mean_coefficients[kPlus] == Complex(0.0, 0.0));
}

TEST_CASE("total power") {
    const auto p = PhysicalParams::with_detuning(0.0, 0.3, 1.5, FreeSpace{1.0});
    GridSpec spec;
    spec.omega_min = -60.0;
    spec.omega_max = 60.0;
    spec.refine_tol = 1e-10;
    const SpectrumResult r = compute_spectrum(p, spec);
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double exact = GK::integrate([&](double w) { return free_space_spectrum(w, p).s_inc; }, -60.0, 60.0, 20, 1e-14);
    CHECK(trapezoid(r.omega, r.s_inc) == doctest::Approx(exact).epsilon(1e-6));
    CHECK(total_power(r) == doctest::Approx(exact + r.coherent_weight).epsilon(1e-6));

    // all-frequency power: 4 pi^2 <s+ s-> = 2 pi^2 (1 + <sz>)
    const double all = GK::integrate([&](double w) { return free_space_spectrum(w, p).s_inc; },
                                     -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                                     20, 1e-13) +
                       r.coherent_weight;
    CHECK(all == doctest::Approx(2.0 * kPi * kPi * (1.0 + steady_state(p).sz)).epsilon(1e-9));

    const auto undriven = PhysicalParams::resonant(0.0, 0.0, FreeSpace{1.0});
    CHECK(total_power(compute_spectrum(undriven, spec)) == 0.0);

    SpectrumResult bad = r;
    std::swap(bad.omega[3], bad.omega[4]);
    CHECK_THROWS_AS(total_power(bad), ValidationError);
}

TEST_CASE("negative samples are clamped with diagnostics") {
    const std::vector<double> nodes{0.0, 1.0, 2.0, 3.0};
    const std::vector<double> values{1.0, -1e-12, -0.5, 2.0};
    const PointEvaluator eval = [&](double w) {
        SpectralPoint p;
        p.s_inc = values[static_cast<std::size_t>(w)];
        return p;
    };
    const SpectrumResult r = sample_spectrum(eval, nodes, FrequencyUnit::Gamma);
    CHECK(r.diagnostics.clamped == 1);
    CHECK(r.diagnostics.violations == 1);
    CHECK(r.diagnostics.most_negative == -0.5);
    for (double v : r.s_inc) {
        CHECK(v >= 0.0);
    }
}

TEST_CASE("grid contains the Heaviside edge and is strictly increasing") {
    const auto p = PhysicalParams::resonant(100.27, 0.3, BandEdge{});
    const GridSpec spec;
    const auto grid = make_grid(spec, expected_features(p, spec));
    CHECK_NOTHROW(require_increasing(grid));
    CHECK(std::find(grid.begin(), grid.end(), -(p.omega_a - 100.0)) != grid.end());
    CHECK(grid.front() == spec.omega_min);
    CHECK(grid.back() == spec.omega_max);
}

TEST_CASE("parallel evaluation is deterministic") {
    const auto p = PhysicalParams::resonant(100.27, 0.3, BandEdge{});
    const GridSpec spec;
    const SpectrumResult a = compute_spectrum(p, spec, 1);
    const SpectrumResult b = compute_spectrum(p, spec, 4);
    CHECK(a.omega == b.omega);
    CHECK(a.s_inc == b.s_inc);
}
