#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pbgfluor/kernels.hpp"
#include "pbgfluor/oracle.hpp"

using namespace pbgfluor;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("undriven decay from the excited state") {
    const auto p = PhysicalParams::resonant(0.0, 0.0, FreeSpace{1.3});
    BlochState excited;
    excited.sz = 1.0;
    const BlochTrajectory t = integrate_markovian_bloch(p, 5.0, 1e-12, 0.25, excited);
    REQUIRE(t.t.size() == 21);
    for (std::size_t i = 0; i < t.t.size(); ++i) {
        CHECK(t.sz[i] == doctest::Approx(2.0 * std::exp(-1.3 * t.t[i]) - 1.0).epsilon(1e-9));
    }
}

TEST_CASE("trajectory relaxes to the steady state") {
    for (double rabi : {0.5, 2.0}) {
        const auto p = PhysicalParams::resonant(0.0, rabi, FreeSpace{1.0});
        const BlochTrajectory t = integrate_markovian_bloch(p, 60.0, 1e-11, 1.0);
        CHECK(t.sz.back() == doctest::Approx(-1.0 / (1.0 + 2.0 * rabi * rabi)).epsilon(1e-8));
        CHECK(t.max_error_estimate < 1e-8);
        CHECK(steady_state(p).sz == doctest::Approx(markovian_steady_state(p).sz).epsilon(1e-12));
        for (std::size_t i = 0; i < t.t.size(); ++i) {
            CHECK(std::abs(t.sz[i]) <= 1.0 + 1e-9);
            CHECK(std::abs(t.sm[i]) <= 0.5 + 1e-9);
        }
    }
}

TEST_CASE("strong drive: damped Rabi oscillation at the Rabi frequency") {
    const double rabi = 12.0;
    const auto p = PhysicalParams::resonant(0.0, rabi, FreeSpace{1.0});
    const double dt = 0.005;
    const BlochTrajectory t = integrate_markovian_bloch(p, 6.0, 1e-10, dt);
    const double mean = markovian_steady_state(p).sz;
    double best = 0.0;
    double best_w = 0.0;
    for (double w = 1.0; w < 40.0; w += 0.01) {
        Complex acc = 0.0;
        for (std::size_t i = 0; i < t.t.size(); ++i) {
            acc += (t.sz[i] - mean) * std::polar(1.0, w * t.t[i]);
        }
        if (std::abs(acc) > best) {
            best = std::abs(acc);
            best_w = w;
        }
    }
    CHECK(best_w == doctest::Approx(rabi).epsilon(1e-2));
}

TEST_CASE("regression spectrum matches the closed form") {
    for (const auto& p : {PhysicalParams::resonant(0.0, 2.0, FreeSpace{1.0}),
                          PhysicalParams::with_detuning(0.0, -0.9, 0.8, FreeSpace{1.7})}) {
        std::vector<double> grid;
        for (int i = -40; i <= 40; ++i) {
            grid.push_back(0.15 * i - p.delta);
        }
        const SpectrumResult r = regression_spectrum(p, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const SpectralPoint ref = free_space_spectrum(grid[i], p);
            CHECK(r.s_inc[i] == doctest::Approx(ref.s_inc).epsilon(1e-7));
        }
        CHECK(r.coherent_weight == doctest::Approx(free_space_spectrum(0.0, p).coherent_weight).epsilon(1e-12));
    }
}

TEST_CASE("regression Parseval consistency") {
    const auto p = PhysicalParams::resonant(0.0, 1.2, FreeSpace{1.0});
    const BlochState ss = markovian_steady_state(p);
    const double g1_0 = 0.5 * (1.0 + ss.sz);
    CHECK(regression_incoherent_weight(p) == doctest::Approx(g1_0 - std::norm(ss.sm)).epsilon(1e-14));
    std::vector<double> grid;
    for (int i = -3000; i <= 3000; ++i) {
        grid.push_back(0.01 * i);
    }
    const SpectrumResult r = regression_spectrum(p, grid);
    // int s_inc d omega over +-30 gamma captures all but the 1/omega^4 tail
    CHECK(trapezoid(r.omega, r.s_inc) / (4.0 * kPi * kPi) ==
          doctest::Approx(regression_incoherent_weight(p)).epsilon(1e-4));
}

TEST_CASE("regression guards") {
    const auto undriven = PhysicalParams::resonant(0.0, 0.0, FreeSpace{1.0});
    const std::vector<double> grid{-1.0, 0.0, 1.0};
    const SpectrumResult r = regression_spectrum(undriven, grid);
    CHECK(r.s_inc == std::vector<double>{0.0, 0.0, 0.0});
    CHECK(r.coherent_weight == 0.0);

    RegressionOptions short_tau;
    short_tau.tau_max = 2.0;
    CHECK_THROWS_AS(regression_spectrum(PhysicalParams::resonant(0.0, 1.0, FreeSpace{1.0}), grid, short_tau),
                    IntegrationError);
    CHECK_THROWS_AS(regression_spectrum(PhysicalParams::resonant(100.5, 1.0, BandEdge{}), grid), UnsupportedError);
}

TEST_CASE("kernel by quadrature") {
    const auto p = PhysicalParams::resonant(100.27, 0.3, BandEdge{100.0, 1.2});
    for (double w : {-50.0, -0.3, -0.27, -0.2, 0.0, 1.0, 300.0, -200.0}) {
        const Complex num = kernel_by_quadrature(w, p);
        const Complex ref = memory_kernel(w, p);
        CHECK(std::abs(num - ref) / std::abs(ref) < 1e-8);
    }
    CHECK(kernel_by_quadrature(-5.0, p).real() == 0.0);
}

TEST_CASE("kernel transform check report") {
    const auto p = PhysicalParams::resonant(101.0, 0.3, BandEdge{});
    std::vector<double> grid;
    for (int i = 0; i <= 50; ++i) {
        grid.push_back(-1000.0 + 40.0 * i + 0.5);
    }
    KernelCheckOptions opts;
    opts.causality_samples = 4;
    const KernelCheckReport rep = kernel_transform_check(p, grid, opts);
    CHECK(rep.points == grid.size());
    CHECK(rep.max_residual < 1e-4);
    CHECK(rep.max_gap_real == 0.0);
    CHECK(rep.causality_leak < 1e-4);
}
