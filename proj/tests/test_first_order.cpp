#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pbgfluor/first_order.hpp"
#include "pbgfluor/kernels.hpp"

using namespace pbgfluor;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("exact reduction to the zero-th order system") {
    const std::vector<PhysicalParams> cases{
        PhysicalParams::resonant(100.27, 0.0, BandEdge{}),
        PhysicalParams::resonant(130.0, 0.0, BandEdge{100.0, 2.0}),
        PhysicalParams::resonant(0.0, 3.0, FreeSpace{1.0}),
        PhysicalParams::with_detuning(0.0, 0.7, 20.0, FreeSpace{0.4}),
    };
    for (const auto& p : cases) {
        for (double w : {-3.0, -0.27, 0.0, 0.1, 1.5}) {
            const SystemMatrix a = first_order_system(w, p);
            const SystemMatrix b = system_matrix(w, p);
            CHECK(a.matrix == b.matrix);
            CHECK(a.delta_source == b.delta_source);
        }
        if (p.is_free_space() || p.rabi == 0.0) {
            const SteadyState a = first_order_steady_state(p);
            const SteadyState b = steady_state_from_system(system_matrix(0.0, p));
            CHECK(a.sz == b.sz);
            CHECK(a.sm == b.sm);
        }
    }
}

TEST_CASE("shifted kernels") {
    const auto p = PhysicalParams::resonant(101.0, 0.2, BandEdge{});
    const ShiftedKernels k = shifted_kernels(0.1, p);
    CHECK(k.gp == memory_kernel(0.3, p));
    CHECK(k.gm == memory_kernel(-0.1, p));
    CHECK(std::abs(k.gcp - std::conj(memory_kernel(-0.3, p))) < 1e-15);
    const auto fs = shifted_kernels(0.1, PhysicalParams::resonant(0.0, 2.0, FreeSpace{1.0}));
    CHECK(fs.cos_part() == Complex(0.5, 0.0));
    CHECK(std::abs(fs.sin_part()) == 0.0);
}

TEST_CASE("small Rabi frequency: first-order Taylor bound") {
    const double rabi = 1e-3;
    const auto p = PhysicalParams::resonant(110.0, rabi, BandEdge{});
    for (double w : {-1.0, 0.0, 2.0}) {
        const Matrix3c d = first_order_system(w, p).matrix - system_matrix(w, p).matrix;
        const double h = 1e-4;
        const double slope = std::abs(memory_kernel(w + h, p) - memory_kernel(w - h, p)) / (2.0 * h);
        CHECK(d.cwiseAbs().maxCoeff() <= 2.0 * rabi * slope + 1e-12);
        CHECK(d.cwiseAbs().maxCoeff() > 0.0);
    }
}

TEST_CASE("first-order correlations") {
    const auto undriven = PhysicalParams::resonant(104.0, 0.0, BandEdge{});
    const NoiseCorrelations c0 = first_order_noise_correlations(0.5, 0.5, undriven);
    CHECK(c0.minus_plus.stationary == doctest::Approx(kPi * noise_envelope(0.5, undriven)).epsilon(1e-14));

    const auto p = PhysicalParams::resonant(104.0, 3.0, BandEdge{});
    const NoiseCorrelations closed = first_order_noise_correlations(-7.5, -7.5, p);
    CHECK(closed.minus_plus.stationary == 0.0);
    CHECK(closed.z_z.stationary == 0.0);
    CHECK(closed.minus_z.stationary == 0.0);
    CHECK(closed.z_plus.stationary == 0.0);

    // unshifted envelope in <n_z n_z>: subtract the shifted parts
    const NoiseCorrelations c = first_order_noise_correlations(0.0, 0.0, p);
    const auto s = rabi_shifted_envelopes(0.0, p);
    const double unshifted = (c.z_z.stationary - 2.0 * kPi * (s.upper + s.lower)) / (4.0 * kPi);
    CHECK(unshifted == doctest::Approx(std::sqrt(4.0) / 104.0).epsilon(1e-14));
    CHECK(c.z_minus.stationary == 0.0);
    CHECK(c.plus_z.stationary == 0.0);

    FirstOrderOptions printed;
    printed.zz = ZZVariant::AsPrinted;
    const NoiseCorrelations a = first_order_noise_correlations(0.0, 0.0, p, printed);
    CHECK(a.z_z.mean_coefficients[kMinus] == 2.0 * c.z_z.mean_coefficients[kMinus]);
    CHECK(a.z_z.mean_coefficients[kPlus] == Complex(0.0, 0.0));

    FirstOrderOptions other;
    other.z_plus = ZPlusCutoff::Omega2;
    const NoiseCorrelations b = first_order_noise_correlations(0.0, 0.0, p, other);
    CHECK(b.z_plus.stationary == c.z_plus.stationary);

    CHECK_THROWS_AS(first_order_noise_correlations(0.0, 0.0, PhysicalParams::resonant(0.0, 1.0, FreeSpace{})),
                    UnsupportedError);
}

TEST_CASE("first-order spectrum") {
    const auto undriven = PhysicalParams::resonant(110.0, 0.0, BandEdge{});
    CHECK(first_order_spectrum(0.1, undriven).s_inc == 0.0);

    const auto p = PhysicalParams::resonant(200.0, 0.1, BandEdge{});
    const FirstOrderSpectrum fo(p);
    const BandGapSpectrum zo(p);
    CHECK(fo(-101.0).s_inc == 0.0);
    CHECK(fo.coherent_weight() == doctest::Approx(zo.coherent_weight()).epsilon(1e-3));
    std::vector<double> grid;
    for (int i = -400; i <= 400; ++i) {
        grid.push_back(0.001 * i);
    }
    const OrderComparison c = order_comparison(p, grid);
    CHECK(c.max_relative < 1e-2);
    CHECK(c.max_imag_relative < 1e-10);
    CHECK(c.points == grid.size());

    // the incoherent part is an O(rabi^4) remainder, so stay well above roundoff
    const OrderComparison weak = order_comparison(PhysicalParams::resonant(200.0, 1e-4, BandEdge{}), grid);
    CHECK(weak.max_relative < 1e-2);
    CHECK(weak.max_relative < 3.0 * c.max_relative);
}

TEST_CASE("strong pumping shows visible deviation") {
    const auto p = PhysicalParams::resonant(101.0, 0.5, BandEdge{});
    std::vector<double> grid;
    for (int i = -300; i <= 300; ++i) {
        grid.push_back(0.005 * i);
    }
    CHECK(order_comparison(p, grid).max_relative > 1e-2);
}
