#include "pbgfluor/peaks.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include "pbgfluor/parallel.hpp"

namespace pbgfluor {

namespace {

struct Candidate {
    std::size_t index;
    double prominence;
};

std::vector<Candidate> local_maxima(const std::vector<double>& y) {
    std::vector<Candidate> out;
    const std::size_t n = y.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (y[i] > y[i - 1]) {
            std::size_t j = i;
            while (j + 1 < n && y[j + 1] == y[i]) {
                ++j; // plateau
            }
            if (j + 1 < n && y[j + 1] < y[i]) {
                out.push_back({(i + j) / 2, 0.0});
            }
            i = j + 1;
        } else {
            ++i;
        }
    }
    // Prominence: height above the higher of the two minima reached before a taller sample.
    for (auto& c : out) {
        const double h = y[c.index];
        double left_min = h;
        for (std::size_t k = c.index; k-- > 0;) {
            if (y[k] > h) {
                break;
            }
            left_min = std::min(left_min, y[k]);
        }
        double right_min = h;
        for (std::size_t k = c.index + 1; k < n; ++k) {
            if (y[k] > h) {
                break;
            }
            right_min = std::min(right_min, y[k]);
        }
        c.prominence = h - std::max(left_min, right_min);
    }
    return out;
}

std::size_t argmin_between(const std::vector<double>& y, std::size_t lo, std::size_t hi) {
    return static_cast<std::size_t>(std::min_element(y.begin() + lo, y.begin() + hi + 1) - y.begin());
}

double integrate_range(const std::vector<double>& x, const std::vector<double>& y, std::size_t lo,
                       std::size_t hi) {
    double sum = 0.0;
    for (std::size_t i = lo + 1; i <= hi; ++i) {
        sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    }
    return sum;
}

// Half-maximum crossing walking from index `from` in direction `step` (+1 / -1), not past `stop`.
double half_crossing(const SpectrumResult& r, std::size_t from, std::size_t stop, int step, double half,
                     const PointEvaluator* eval) {
    const auto& x = r.omega;
    const auto& y = r.s_inc;
    std::size_t k = from;
    while (k != stop) {
        const std::size_t next = step > 0 ? k + 1 : k - 1;
        if (y[next] < half) {
            const double xa = x[k];
            const double xb = x[next];
            if (eval == nullptr) {
                return xa + (half - y[k]) * (xb - xa) / (y[next] - y[k]);
            }
            auto fn = [&](double w) { return (*eval)(w).s_inc - half; };
            const double fa = fn(xa);
            const double fb = fn(xb);
            if (!(fa >= 0.0 && fb < 0.0)) {
                return xa + (half - y[k]) * (xb - xa) / (y[next] - y[k]);
            }
            boost::math::tools::eps_tolerance<double> tol(48);
            auto [lo, hi] = boost::math::tools::bisect(fn, std::min(xa, xb), std::max(xa, xb), tol);
            return 0.5 * (lo + hi);
        }
        k = next;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

} // namespace

PeakTable peak_analysis(const SpectrumResult& result, const PeakOptions& opts, const PointEvaluator* eval) {
    PeakTable table;
    table.coherent_weight = result.coherent_weight;
    const auto& x = result.omega;
    const auto& y = result.s_inc;
    if (x.size() < 3 || x.size() != y.size()) {
        return table;
    }
    table.total_incoherent_power = trapezoid(x, y);
    const double ymax = *std::max_element(y.begin(), y.end());
    if (!(ymax > 0.0)) {
        return table;
    }
    std::vector<Candidate> kept;
    for (const auto& c : local_maxima(y)) {
        if (c.prominence >= opts.min_prominence * ymax) {
            kept.push_back(c);
        }
    }
    for (std::size_t p = 0; p < kept.size(); ++p) {
        const std::size_t i = kept[p].index;
        const std::size_t lo = p == 0 ? 0 : argmin_between(y, kept[p - 1].index, i);
        const std::size_t hi = p + 1 == kept.size() ? x.size() - 1 : argmin_between(y, i, kept[p + 1].index);

        Peak peak;
        peak.location = x[i];
        peak.height = y[i];
        if (eval != nullptr) {
            auto neg = [&](double w) { return -(*eval)(w).s_inc; };
            auto [loc, val] = boost::math::tools::brent_find_minima(neg, x[i - 1], x[i + 1], 40);
            if (-val > peak.height) {
                peak.location = loc;
                peak.height = -val;
            }
        }
        const double half = 0.5 * peak.height;
        const double left = half_crossing(result, i, lo, -1, half, eval);
        const double right = half_crossing(result, i, hi, +1, half, eval);
        peak.fwhm = right - left;
        peak.lower_bound = x[lo];
        peak.upper_bound = x[hi];
        peak.power = integrate_range(x, y, lo, hi);
        table.peaks.push_back(peak);
    }
    return table;
}

SidebandPowers group_sidebands(const PeakTable& table, double rabi) {
    SidebandPowers s;
    for (const auto& p : table.peaks) {
        if (p.location < -0.5 * rabi) {
            s.lower += p.power;
            ++s.lower_count;
        } else if (p.location > 0.5 * rabi) {
            s.upper += p.power;
            ++s.upper_count;
        } else {
            s.center += p.power;
            ++s.center_count;
        }
    }
    return s;
}

std::vector<ScanEntry> offset_scan(const PhysicalParams& base, std::span<const double> omega_a_values,
                                   const ScanOptions& opts) {
    if (omega_a_values.empty()) {
        throw ValidationError("scan: offset list is empty");
    }
    base.validate();
    const double omega_c = base.band_edge().omega_c;
    std::vector<ScanEntry> out(omega_a_values.size());
    parallel_for(out.size(), opts.threads, [&](std::size_t k) {
        ScanEntry& e = out[k];
        e.omega_a = omega_a_values[k];
        e.offset = e.omega_a - omega_c;
        try {
            const auto params = PhysicalParams::resonant(e.omega_a, base.rabi, base.reservoir);
            const BandGapSpectrum spectrum(params);
            const PointEvaluator eval = [&spectrum](double w) { return spectrum(w); };
            const auto features = expected_features(params, opts.grid);
            const SpectrumResult r = compute_spectrum(eval, make_grid(opts.grid, features), params.unit(),
                                                      opts.grid.refine_tol, opts.grid.max_points, 1);
            e.table = peak_analysis(r, opts.peaks, &eval);
            e.sidebands = group_sidebands(e.table, params.rabi);
            e.total_power = total_power(r);
            e.diagnostics = r.diagnostics;
            e.ok = true;
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
    });
    return out;
}

} // namespace pbgfluor
