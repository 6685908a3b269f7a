#include "pbgfluor/grid.hpp"

#include <algorithm>
#include <cmath>

#include "pbgfluor/errors.hpp"
#include "pbgfluor/kernels.hpp"
#include "pbgfluor/parallel.hpp"

namespace pbgfluor {

namespace {

void add_geometric(std::vector<double>& pts, double center, double halfwidth, double ratio,
                   double smallest) {
    for (double d = halfwidth; d > smallest; d *= ratio) {
        pts.push_back(center - d);
        pts.push_back(center + d);
    }
}

} // namespace

std::vector<GridFeature> expected_features(const PhysicalParams& params, const GridSpec& spec) {
    std::vector<GridFeature> out;
    double linewidth = effective_decay_rate(params);
    if (!(linewidth > 0.0)) {
        linewidth = 1e-3 * params.unit_scale();
    }
    const double hw = spec.peak_halfwidth * linewidth;
    const Complex g0 = memory_kernel(0.0, params);
    const double center = params.is_free_space() ? -params.delta : 0.0;
    const double detuning = params.delta - g0.imag();
    const double generalized = std::hypot(params.rabi, detuning);

    out.push_back({center, hw, GridFeature::Kind::Peak});
    if (params.rabi > 0.0) {
        for (double side : {params.rabi, generalized}) {
            out.push_back({center - side, hw, GridFeature::Kind::Peak});
            out.push_back({center + side, hw, GridFeature::Kind::Peak});
        }
    }
    if (params.is_band_edge()) {
        const double offset = params.omega_a - params.band_edge().omega_c;
        out.push_back({-offset, spec.edge_halfwidth * params.unit_scale(), GridFeature::Kind::Edge});
        out.push_back({offset, spec.edge_halfwidth * params.unit_scale(), GridFeature::Kind::Edge});
    }
    return out;
}

std::vector<double> make_grid(const GridSpec& spec, std::span<const GridFeature> features) {
    if (!(spec.omega_max > spec.omega_min) || spec.base_points < 2) {
        throw ValidationError("grid: need omega_max > omega_min and at least 2 base points");
    }
    if (!(spec.geometric_ratio > 0.0 && spec.geometric_ratio < 1.0)) {
        throw ValidationError("grid: geometric_ratio must lie in (0, 1)");
    }
    std::vector<double> pts;
    const double span = spec.omega_max - spec.omega_min;
    for (std::size_t i = 0; i < spec.base_points; ++i) {
        pts.push_back(spec.omega_min + span * static_cast<double>(i) / static_cast<double>(spec.base_points - 1));
    }
    for (const auto& f : features) {
        if (!(f.halfwidth > 0.0)) {
            continue;
        }
        pts.push_back(f.center);
        if (f.kind == GridFeature::Kind::Peak) {
            constexpr int kFine = 50;
            for (int k = -kFine; k <= kFine; ++k) {
                pts.push_back(f.center + f.halfwidth * k / kFine);
            }
            add_geometric(pts, f.center, f.halfwidth, spec.geometric_ratio, 1e-4 * f.halfwidth);
        } else {
            add_geometric(pts, f.center, f.halfwidth, spec.geometric_ratio, 1e-6 * f.halfwidth);
        }
    }
    std::erase_if(pts, [&](double x) { return !(x >= spec.omega_min && x <= spec.omega_max); });
    std::sort(pts.begin(), pts.end());
    const double eps = 1e-13 * span;
    // feature centers (edges in particular) win over nearby base points
    std::vector<double> centers;
    for (const auto& f : features) {
        centers.push_back(f.center);
    }
    std::sort(centers.begin(), centers.end());
    std::vector<double> out;
    out.reserve(pts.size());
    for (double x : pts) {
        if (out.empty() || x - out.back() > eps) {
            out.push_back(x);
        } else if (std::binary_search(centers.begin(), centers.end(), x)) {
            out.back() = x;
        }
    }
    out.back() = spec.omega_max;
    return out;
}

void require_increasing(std::span<const double> grid) {
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
            throw ValidationError("grid is not strictly increasing");
        }
    }
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
    double sum = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) {
        sum += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    }
    return sum;
}

Samples refine_adaptive(const std::function<double(double)>& fn, std::vector<double> nodes,
                        double rel_tol, std::size_t max_points, unsigned threads) {
    require_increasing(nodes);
    Samples s;
    s.x = std::move(nodes);
    s.y.resize(s.x.size());
    parallel_for(s.x.size(), threads, [&](std::size_t i) { s.y[i] = fn(s.x[i]); });
    if (s.x.size() < 2) {
        return s;
    }
    const double length = s.x.back() - s.x.front();
    // active[i] refers to the interval [x[i], x[i+1]]
    std::vector<char> active(s.x.size() - 1, 1);
    constexpr int kMaxPasses = 60;
    for (int pass = 0; pass < kMaxPasses; ++pass) {
        std::vector<std::size_t> todo;
        for (std::size_t i = 0; i + 1 < s.x.size(); ++i) {
            if (active[i]) {
                todo.push_back(i);
            }
        }
        if (todo.empty() || s.x.size() + todo.size() > max_points) {
            break;
        }
        std::vector<double> mid(todo.size());
        std::vector<double> fmid(todo.size());
        parallel_for(todo.size(), threads, [&](std::size_t k) {
            const std::size_t i = todo[k];
            mid[k] = 0.5 * (s.x[i] + s.x[i + 1]);
            fmid[k] = fn(mid[k]);
        });
        const double total = std::abs(trapezoid(s.x, s.y));
        if (total == 0.0) {
            break;
        }
        Samples next;
        std::vector<char> next_active;
        next.x.reserve(s.x.size() + todo.size());
        next.y.reserve(s.x.size() + todo.size());
        std::size_t k = 0;
        for (std::size_t i = 0; i + 1 < s.x.size(); ++i) {
            next.x.push_back(s.x[i]);
            next.y.push_back(s.y[i]);
            if (k < todo.size() && todo[k] == i) {
                const double h = s.x[i + 1] - s.x[i];
                const double coarse = 0.5 * h * (s.y[i] + s.y[i + 1]);
                const double fine = 0.25 * h * (s.y[i] + 2.0 * fmid[k] + s.y[i + 1]);
                const double err = std::abs(fine - coarse) / 3.0;
                if (err > rel_tol * total * h / length && mid[k] > s.x[i] && mid[k] < s.x[i + 1]) {
                    next.x.push_back(mid[k]);
                    next.y.push_back(fmid[k]);
                    next_active.push_back(1);
                    next_active.push_back(1);
                } else {
                    next_active.push_back(0);
                }
                ++k;
            } else {
                next_active.push_back(0);
            }
        }
        next.x.push_back(s.x.back());
        next.y.push_back(s.y.back());
        const bool changed = next.x.size() != s.x.size();
        s = std::move(next);
        active = std::move(next_active);
        if (!changed) {
            break;
        }
    }
    return s;
}

} // namespace pbgfluor
