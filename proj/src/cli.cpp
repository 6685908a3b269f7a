#include "pbgfluor/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

#include <CLI11.hpp>
#include <json.hpp>

#include "pbgfluor/first_order.hpp"
#include "pbgfluor/kernels.hpp"
#include "pbgfluor/oracle.hpp"
#include "pbgfluor/peaks.hpp"
#include "pbgfluor/spectrum.hpp"

namespace pbgfluor {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const fs::path& path, std::initializer_list<const char*> header) : out_(path) {
        if (!out_) {
            throw ValidationError("output: cannot write '" + path.string() + "'");
        }
        bool first = true;
        for (const char* h : header) {
            out_ << (first ? "" : ",") << h;
            first = false;
        }
        out_ << '\n';
    }
    template <class... T>
    void row(const T&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string cell(double v) { return num(v); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(std::size_t v) { return std::to_string(v); }
    static std::string cell(bool v) { return v ? "true" : "false"; }
    std::ofstream out_;
};

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        throw ValidationError("output: cannot write '" + path.string() + "'");
    }
    out << j.dump(2) << '\n';
}

// Typed JSON view of the flat echo, so it parses back through the JSON config path.
json echo_json(const RunConfig& cfg) {
    json j = json::object();
    for (const auto& [key, value] : echo_config(cfg)) {
        if (key == "offsets" || key == "rabi_values") {
            json arr = json::array();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                arr.push_back(std::stod(item));
            }
            j[key] = arr;
        } else if (value == "true" || value == "false") {
            j[key] = value == "true";
        } else if (key == "base_points" || key == "max_points") {
            j[key] = std::stoull(value);
        } else {
            char* end = nullptr;
            const double d = std::strtod(value.c_str(), &end);
            if (end != value.c_str() && *end == '\0') {
                j[key] = d;
            } else {
                j[key] = value;
            }
        }
    }
    return j;
}

json params_json(const PhysicalParams& p) {
    json j{{"omega_a", p.omega_a}, {"omega_L", p.omega_L}, {"delta", p.delta}, {"rabi", p.rabi},
           {"unit", to_string(p.unit())}};
    if (p.is_band_edge()) {
        j["model"] = "band_edge";
        j["omega_c"] = p.band_edge().omega_c;
        j["beta"] = p.band_edge().beta;
    } else {
        j["model"] = "free_space";
        j["gamma"] = p.free_space().gamma;
    }
    return j;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json peaks_json(const PeakTable& t) {
    json arr = json::array();
    for (const auto& p : t.peaks) {
        arr.push_back({{"location", p.location},
                       {"height", p.height},
                       {"fwhm", finite_or_null(p.fwhm)},
                       {"power", p.power},
                       {"lower_bound", p.lower_bound},
                       {"upper_bound", p.upper_bound}});
    }
    return arr;
}

json diagnostics_json(const SpectrumDiagnostics& d) {
    return {{"clamped", d.clamped},
            {"violations", d.violations},
            {"ill_conditioned", d.ill_conditioned},
            {"most_negative", d.most_negative}};
}

json steady_json(const SteadyState& s) {
    return {{"sigma_z", s.sz},
            {"sigma_minus", {s.sm.real(), s.sm.imag()}},
            {"sigma_plus", {s.sp.real(), s.sp.imag()}},
            {"sigma_z_imag_residual", s.sz_imag}};
}

json envelope(const RunConfig& cfg) {
    return {{"version", library_version()},
            {"command", to_string(cfg.command)},
            {"params", params_json(cfg.params)},
            {"config", echo_json(cfg)}};
}

int run_kernel(const RunConfig& cfg, const fs::path& out) {
    const GridSpec& g = cfg.grid;
    std::vector<double> grid;
    for (std::size_t i = 0; i < g.base_points; ++i) {
        grid.push_back(g.omega_min + (g.omega_max - g.omega_min) * static_cast<double>(i) /
                                         static_cast<double>(g.base_points - 1));
    }
    const KernelSpectra k = sample_kernels(cfg.params, grid);
    if (cfg.format == OutputFormat::Csv) {
        CsvWriter csv(out / "kernel.csv", {"omega", "re_g", "im_g", "abs_g", "arg_g", "re_gc", "im_gc", "noise"});
        for (std::size_t i = 0; i < grid.size(); ++i) {
            csv.row(k.omega[i], k.g[i].real(), k.g[i].imag(), std::abs(k.g[i]), std::arg(k.g[i]), k.gc[i].real(),
                    k.gc[i].imag(), k.noise[i]);
        }
    } else {
        json j = envelope(cfg);
        json rows = json::array();
        for (std::size_t i = 0; i < grid.size(); ++i) {
            rows.push_back({k.omega[i], k.g[i].real(), k.g[i].imag(), k.gc[i].real(), k.gc[i].imag(), k.noise[i]});
        }
        j["columns"] = {"omega", "re_g", "im_g", "re_gc", "im_gc", "noise"};
        j["rows"] = rows;
        write_json(out / "kernel.json", j);
    }
    write_json(out / "config.json", echo_json(cfg));
    return kExitOk;
}

int run_spectrum(const RunConfig& cfg, const fs::path& out) {
    PointEvaluator eval;
    SteadyState steady;
    if (cfg.first_order) {
        auto fo = std::make_shared<const FirstOrderSpectrum>(cfg.params, cfg.first_order_options);
        steady = fo->steady();
        eval = [fo](double w) { return (*fo)(w); };
    } else {
        eval = default_evaluator(cfg.params);
        steady = steady_state(cfg.params);
    }
    const auto features = expected_features(cfg.params, cfg.grid);
    const SpectrumResult r = compute_spectrum(eval, make_grid(cfg.grid, features), cfg.params.unit(),
                                              cfg.grid.refine_tol, cfg.grid.max_points, cfg.threads);
    const PeakTable table = peak_analysis(r, cfg.peaks, &eval);

    json j = envelope(cfg);
    j["unit"] = to_string(r.unit);
    j["coherent_weight"] = r.coherent_weight;
    j["total_power"] = total_power(r);
    j["incoherent_power"] = table.total_incoherent_power;
    j["steady_state"] = steady_json(steady);
    j["peaks"] = peaks_json(table);
    j["diagnostics"] = diagnostics_json(r.diagnostics);
    j["points"] = r.omega.size();
    if (cfg.format == OutputFormat::Csv) {
        CsvWriter csv(out / "spectrum.csv", {"omega", "s_inc"});
        for (std::size_t i = 0; i < r.omega.size(); ++i) {
            csv.row(r.omega[i], r.s_inc[i]);
        }
    } else {
        j["omega"] = r.omega;
        j["s_inc"] = r.s_inc;
    }
    write_json(out / "summary.json", j);
    write_json(out / "config.json", echo_json(cfg));
    return kExitOk;
}

int run_scan(const RunConfig& cfg, const fs::path& out) {
    ScanOptions opts;
    opts.grid = cfg.grid;
    opts.peaks = cfg.peaks;
    opts.threads = cfg.threads;
    const auto entries = offset_scan(cfg.params, cfg.offsets, opts);

    json j = envelope(cfg);
    json rows = json::array();
    for (const auto& e : entries) {
        rows.push_back({{"omega_a", e.omega_a},
                        {"offset", e.offset},
                        {"ok", e.ok},
                        {"error", e.error},
                        {"total_power", e.total_power},
                        {"coherent_weight", e.table.coherent_weight},
                        {"incoherent_power", e.table.total_incoherent_power},
                        {"peak_count", e.table.peaks.size()},
                        {"lower_power", e.sidebands.lower},
                        {"center_power", e.sidebands.center},
                        {"upper_power", e.sidebands.upper},
                        {"peaks", peaks_json(e.table)},
                        {"diagnostics", diagnostics_json(e.diagnostics)}});
    }
    j["entries"] = rows;
    if (cfg.format == OutputFormat::Csv) {
        CsvWriter scan(out / "scan.csv", {"omega_a", "offset", "ok", "total_power", "coherent_weight",
                                          "incoherent_power", "peak_count", "lower_power", "center_power",
                                          "upper_power"});
        CsvWriter peaks(out / "peaks.csv", {"omega_a", "location", "height", "fwhm", "power"});
        for (const auto& e : entries) {
            scan.row(e.omega_a, e.offset, e.ok, e.total_power, e.table.coherent_weight, e.table.total_incoherent_power,
                     e.table.peaks.size(), e.sidebands.lower, e.sidebands.center, e.sidebands.upper);
            for (const auto& p : e.table.peaks) {
                peaks.row(e.omega_a, p.location, p.height, p.fwhm, p.power);
            }
        }
    }
    write_json(out / "scan.json", j);
    write_json(out / "config.json", echo_json(cfg));
    return kExitOk;
}

int run_order_check(const RunConfig& cfg, const fs::path& out) {
    std::vector<double> rabis = cfg.rabi_values;
    if (rabis.empty()) {
        rabis.push_back(cfg.params.rabi);
    }
    json j = envelope(cfg);
    json rows = json::array();
    std::vector<OrderComparison> reports;
    for (double r : rabis) {
        const auto p = PhysicalParams::with_detuning(cfg.params.omega_a, cfg.params.delta, r, cfg.params.reservoir);
        const auto grid = make_grid(cfg.grid, expected_features(p, cfg.grid));
        const OrderComparison c = order_comparison(p, grid, cfg.first_order_options, cfg.threads);
        reports.push_back(c);
        rows.push_back({{"rabi", c.rabi},
                        {"max_relative", c.max_relative},
                        {"integrated_relative", c.integrated_relative},
                        {"omega_at_max", c.omega_at_max},
                        {"max_imag_relative", c.max_imag_relative},
                        {"coherent_zeroth", c.coherent_zeroth},
                        {"coherent_first", c.coherent_first},
                        {"points", c.points}});
    }
    j["comparisons"] = rows;
    write_json(out / "order_check.json", j);
    if (cfg.format == OutputFormat::Csv) {
        CsvWriter csv(out / "order_check.csv",
                      {"rabi", "max_relative", "integrated_relative", "omega_at_max", "max_imag_relative"});
        for (const auto& c : reports) {
            csv.row(c.rabi, c.max_relative, c.integrated_relative, c.omega_at_max, c.max_imag_relative);
        }
    }
    write_json(out / "config.json", echo_json(cfg));
    return kExitOk;
}

struct Check {
    std::string name;
    double value = 0.0;
    double limit = 0.0;
    bool passed = false;
};

Check check_below(std::string name, double value, double limit) {
    return {std::move(name), value, limit, std::isfinite(value) && value < limit};
}

std::vector<Check> validation_suite(const RunConfig& cfg) {
    std::vector<Check> checks;
    const PhysicalParams fsp = PhysicalParams::with_detuning(0.0, 0.4, 2.0, FreeSpace{1.0});

    {
        std::vector<double> grid;
        for (int i = -30; i <= 30; ++i) {
            grid.push_back(0.2 * i);
        }
        const SpectrumResult oracle = regression_spectrum(fsp, grid);
        double worst = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double ref = free_space_spectrum(grid[i], fsp).s_inc;
            worst = std::max(worst, std::abs(oracle.s_inc[i] - ref) / ref);
        }
        checks.push_back(check_below("free_space_vs_regression", worst, 1e-6));
    }
    {
        const SteadyState ss = steady_state(fsp);
        const BlochState ref = markovian_steady_state(fsp);
        checks.push_back(check_below("steady_state_vs_generator", std::abs(ss.sz - ref.sz), 1e-8));
        const double coh = free_space_spectrum(0.0, fsp).coherent_weight;
        checks.push_back(check_below("coherent_identity_free_space",
                                     std::abs(coh - 4.0 * kPi * kPi * std::norm(ss.sm)) / coh, 1e-10));
        const BlochTrajectory traj = integrate_markovian_bloch(fsp, 40.0, 1e-10, 0.5);
        checks.push_back(check_below("trajectory_converges", traj.max_error_estimate, 1e-6));
    }

    const PhysicalParams bep = cfg.params.is_band_edge() ? PhysicalParams::resonant(cfg.params.omega_a, cfg.params.rabi,
                                                                                    cfg.params.reservoir)
                                                         : PhysicalParams::resonant(100.27, 0.3, BandEdge{});
    const double wc = bep.band_edge().omega_c;
    {
        double worst_n = 0.0;
        double worst_c = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double w = -10.0 * wc + 20.0 * wc * i / 2000.0;
            const Complex g = memory_kernel(w, bep);
            if (bep.omega_a + w > 0.0) {
                worst_n = std::max(worst_n, std::abs(noise_envelope(w, bep) - 4.0 * g.real()));
            }
            worst_c = std::max(worst_c, std::abs(memory_kernel_conj(w, bep) - std::conj(memory_kernel(-w, bep))));
        }
        checks.push_back(check_below("noise_equals_4_re_g", worst_n, 1e-12));
        checks.push_back(check_below("gc_equals_conj_g_reflected", worst_c, 1e-12));
    }
    {
        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) {
            grid.push_back(-10.0 * wc + 20.0 * wc * i / 40.0 + 1e-3);
        }
        KernelCheckOptions opts;
        opts.causality_samples = 5;
        const KernelCheckReport rep = kernel_transform_check(bep, grid, opts);
        checks.push_back(check_below("kernel_quadrature_residual", rep.max_residual, 1e-4));
        checks.push_back(check_below("kernel_causality_leak", rep.causality_leak, 1e-4));
    }
    {
        const BandGapSpectrum spec(bep);
        const double ss = 4.0 * kPi * kPi * std::norm(spec.steady().sm);
        checks.push_back(check_below("coherent_identity_band_edge", std::abs(spec.coherent_weight() - ss) / ss, 1e-10));
    }
    {
        double worst = 0.0;
        for (const auto& p : {PhysicalParams::resonant(bep.omega_a, 0.0, bep.reservoir), fsp}) {
            for (double w : {-1.0, -0.1, 0.0, 0.3, 2.0}) {
                const Matrix3c d = first_order_system(w, p).matrix - system_matrix(w, p).matrix;
                worst = std::max(worst, d.cwiseAbs().maxCoeff());
            }
        }
        checks.push_back({"first_order_reduction_exact", worst, 0.0, worst == 0.0});
    }
    return checks;
}

int run_validate(const RunConfig& cfg, const fs::path& out) {
    const auto checks = validation_suite(cfg);
    json j = envelope(cfg);
    json arr = json::array();
    bool all = true;
    for (const auto& c : checks) {
        arr.push_back({{"name", c.name}, {"value", c.value}, {"limit", c.limit}, {"passed", c.passed}});
        all = all && c.passed;
    }
    j["checks"] = arr;
    j["passed"] = all;
    write_json(out / "config.json", echo_json(cfg));
    write_json(out / "validate.json", j);
    return all ? kExitOk : kExitValidateFailed;
}

void fail_line(std::ostream& err, const char* kind, const std::string& reason) {
    std::string flat = reason;
    for (char& c : flat) {
        if (c == '\n' || c == '\r') {
            c = ' ';
        }
    }
    err << "error kind=" << kind << " reason=\"" << flat << "\"\n";
}

} // namespace

const char* library_version() { return PBGFLUOR_VERSION; }

int run(RunConfig cfg, std::ostream& log) {
    try {
        resolve_grid(cfg);
        const fs::path out(cfg.out_dir);
        std::error_code ec;
        fs::create_directories(out, ec);
        if (ec || !fs::is_directory(out)) {
            throw ValidationError("output: cannot create directory '" + cfg.out_dir + "'");
        }
        switch (cfg.command) {
        case Subcommand::Kernel: return run_kernel(cfg, out);
        case Subcommand::Spectrum: return run_spectrum(cfg, out);
        case Subcommand::Scan: return run_scan(cfg, out);
        case Subcommand::OrderCheck: return run_order_check(cfg, out);
        case Subcommand::Validate: return run_validate(cfg, out);
        }
        return kExitOk;
    } catch (const ConditioningError& ex) {
        fail_line(log, "conditioning", ex.what());
        return kExitConditioning;
    } catch (const ValidationError& ex) {
        fail_line(log, "config", ex.what());
        return kExitConfig;
    } catch (const UnsupportedError& ex) {
        fail_line(log, "config", ex.what());
        return kExitConfig;
    } catch (const DomainError& ex) {
        fail_line(log, "config", ex.what());
        return kExitConfig;
    } catch (const std::exception& ex) {
        fail_line(log, "numerical", ex.what());
        return kExitNumerical;
    }
}

int run_cli(int argc, char** argv) {
    CLI::App app{"Resonance fluorescence spectra near a photonic band edge"};
    app.set_version_flag("--version", std::string(library_version()));
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
    std::string format = "csv";
    int threads = 0;
    app.add_option("--config", config_path, "JSON or key=value config file")->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "override a config key (key=value), repeatable");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    for (auto cmd : {Subcommand::Kernel, Subcommand::Spectrum, Subcommand::Scan, Subcommand::OrderCheck,
                     Subcommand::Validate}) {
        app.add_subcommand(to_string(cmd))->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        fail_line(std::cerr, "config", e.what());
        return kExitConfig;
    }

    RunConfig cfg;
    try {
        const Subcommand cmd = parse_subcommand(app.get_subcommands().front()->get_name());
        FlatConfig flat;
        if (!config_path.empty()) {
            flat = read_flat_config(config_path);
        }
        for (const auto& kv : overrides) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw ValidationError("config: --set expects key=value, got '" + kv + "'");
            }
            flat[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
        cfg = build_config(cmd, flat);
    } catch (const Error& ex) {
        fail_line(std::cerr, "config", ex.what());
        return kExitConfig;
    }
    cfg.out_dir = out_dir;
    cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    if (threads > 0) {
        cfg.threads = static_cast<unsigned>(threads);
    } else if (const char* env = std::getenv("PBGFLUOR_THREADS")) {
        char* end = nullptr;
        const long n = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || n < 1) {
            fail_line(std::cerr, "config", std::string("PBGFLUOR_THREADS must be a positive integer, got '") + env + "'");
            return kExitConfig;
        }
        cfg.threads = static_cast<unsigned>(n);
    }
    return run(std::move(cfg), std::cerr);
}

} // namespace pbgfluor
