#include <doctest.h>

#include <cmath>

#include "pbgfluor/bloch.hpp"
#include "pbgfluor/kernels.hpp"

using namespace pbgfluor;

TEST_CASE("shorthand") {
    const auto fs = PhysicalParams::resonant(0.0, 2.0, FreeSpace{1.5});
    const Shorthand s = shorthand(0.0, fs);
    CHECK(s.f == Complex(0.75, 0.0));
    CHECK(s.g == Complex(0.75, 0.0));
    CHECK(s.h == Complex(1.5, 0.0));

    const auto be = PhysicalParams::resonant(100.5, 0.3, BandEdge{});
    for (double w : {-3.0, -0.4, 0.1, 0.7, 20.0}) {
        CHECK(std::abs(shorthand(-w, be).g - std::conj(shorthand(w, be).f)) < 1e-14);
        CHECK(std::abs(denominator(-w, be).value - std::conj(denominator(w, be).value)) < 1e-12);
    }
    CHECK(shorthand(-40.0, be).f.real() == 0.0);
}

TEST_CASE("denominator") {
    const double gamma = 1.3;
    const double rabi = 0.7;
    const auto fs = PhysicalParams::resonant(0.0, rabi, FreeSpace{gamma});
    const Complex d0 = denominator(0.0, fs).value;
    CHECK(d0.real() == doctest::Approx(gamma * rabi * rabi + gamma * gamma * gamma / 2.0).epsilon(1e-14));
    CHECK(d0.imag() == doctest::Approx(0.0));

    const auto undriven = PhysicalParams::resonant(0.0, 0.0, FreeSpace{gamma});
    for (double w : {-1.0, 0.2, 3.0}) {
        const Shorthand s = shorthand(w, undriven);
        CHECK(std::abs(denominator(w, undriven).value - 2.0 * s.f * s.g * s.h) < 1e-14);
    }
    // roots at the relaxation rates: f = 0 at omega = -i gamma / 2 lies off the real axis,
    // so D stays well conditioned on the real line
    CHECK_FALSE(denominator(0.0, undriven).ill_conditioned);
}

TEST_CASE("far from the gap the band edge looks Markovian") {
    const auto be = PhysicalParams::resonant(1e5, 0.2, BandEdge{100.0, 1.0});
    const double gamma = effective_decay_rate(be);
    const double shift = memory_kernel(0.0, be).imag();
    const auto fs = PhysicalParams::with_detuning(0.0, -shift, 0.2, FreeSpace{gamma});
    for (double w : {-0.5, -0.1, 0.0, 0.05, 0.3}) {
        const Complex a = denominator(w, be).value;
        const Complex b = denominator(w, fs).value;
        CHECK(std::abs(a - b) / std::abs(b) < 1e-3);
    }
}

TEST_CASE("system matrix determinant and closed-form inverse") {
    for (const auto& p : {PhysicalParams::resonant(100.27, 0.3, BandEdge{}),
                          PhysicalParams::with_detuning(0.0, 0.4, 1.7, FreeSpace{0.8}),
                          PhysicalParams::resonant(130.0, 2.0, BandEdge{100.0, 1.4})}) {
        for (double w : {-1.1, -0.3, 0.0, 0.2, 0.9, 5.0}) {
            const SystemMatrix sys = system_matrix(w, p);
            const Complex d = denominator(w, p).value;
            CHECK(std::abs(sys.matrix.determinant() - d / 2.0) <= 1e-12 * std::abs(d));

            const TransferMatrix closed = solution_coefficients(w, p);
            const TransferMatrix inv = invert_system(sys, 1.0);
            CHECK((closed.coefficients - inv.coefficients).cwiseAbs().maxCoeff() <=
                  1e-12 * inv.coefficients.cwiseAbs().maxCoeff());
            CHECK(std::abs(inv.denominator - d) <= 1e-12 * std::abs(d));
        }
    }
}

TEST_CASE("undriven transfer matrix is diagonal") {
    const auto p = PhysicalParams::resonant(101.0, 0.0, BandEdge{});
    const TransferMatrix t = solution_coefficients(0.4, p);
    const Shorthand s = shorthand(0.4, p);
    CHECK(std::abs(t.coefficients(0, 0) - 1.0 / s.f) < 1e-14);
    CHECK(std::abs(t.coefficients(1, 1) - 1.0 / s.g) < 1e-14);
    CHECK(std::abs(t.coefficients(2, 2) - 1.0 / s.h) < 1e-14);
    CHECK(std::abs(t.coefficients(0, 1)) == 0.0);
    CHECK(std::abs(t.coefficients(2, 0)) == 0.0);
}

TEST_CASE("steady state") {
    for (double gamma : {0.5, 1.0, 2.0}) {
        for (double rabi : {0.0, 0.3, 1.0, 10.0}) {
            const auto fs = PhysicalParams::resonant(0.0, rabi, FreeSpace{gamma});
            const SteadyState ss = steady_state(fs);
            CHECK(ss.sz == doctest::Approx(-gamma * gamma / (gamma * gamma + 2.0 * rabi * rabi)).epsilon(1e-14));
            CHECK(std::abs(ss.sp - std::conj(ss.sm)) < 1e-15);
        }
    }
    const double delta = 0.6;
    const auto detuned = PhysicalParams::with_detuning(0.0, delta, 1.0, FreeSpace{1.0});
    CHECK(steady_state(detuned).sz == doctest::Approx(-(1.0 + 4.0 * delta * delta) / (1.0 + 4.0 * delta * delta + 2.0)));

    const auto undriven = PhysicalParams::resonant(101.0, 0.0, BandEdge{});
    const SteadyState u = steady_state(undriven);
    CHECK(u.sz == doctest::Approx(-1.0));
    CHECK(std::abs(u.sm) == 0.0);

    const auto saturated = PhysicalParams::resonant(0.0, 1e6, FreeSpace{1.0});
    CHECK(std::abs(steady_state(saturated).sz) < 1e-11);
    CHECK(std::abs(steady_state(saturated).sm) < 1e-5);
}

TEST_CASE("steady state from the generic system matches the closed form") {
    for (const auto& p : {PhysicalParams::resonant(100.27, 0.3, BandEdge{}),
                          PhysicalParams::with_detuning(0.0, -0.7, 2.0, FreeSpace{1.0}),
                          PhysicalParams::resonant(400.0, 5.0, BandEdge{100.0, 2.0})}) {
        const SteadyState a = steady_state(p);
        const SteadyState b = steady_state_from_system(system_matrix(0.0, p));
        CHECK(a.sz == doctest::Approx(b.sz).epsilon(1e-12));
        CHECK(std::abs(a.sm - b.sm) < 1e-12);
        CHECK(std::abs(a.sp - b.sp) < 1e-12);
        CHECK(std::abs(a.denominator - b.denominator) < 1e-10 * std::abs(a.denominator));
        CHECK(std::abs(a.sz_imag) < 1e-14);
    }
}

TEST_CASE("atom inside the gap has no steady state") {
    const auto p = PhysicalParams::resonant(99.0, 0.3, BandEdge{});
    CHECK(denominator(0.0, p).ill_conditioned);
    try {
        (void)steady_state(p);
        FAIL("expected ConditioningError");
    } catch (const ConditioningError& ex) {
        CHECK(std::abs(ex.denominator()) < 1e-12);
    }
}
