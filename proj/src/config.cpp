#include "pbgfluor/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "pbgfluor/kernels.hpp"

namespace pbgfluor {

namespace {

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "command",        "model",          "omega_a",        "delta",         "rabi",
        "gamma",          "omega_c",        "beta",           "omega_min",     "omega_max",
        "base_points",    "peak_halfwidth", "edge_halfwidth", "geometric_ratio", "refine_tol",
        "max_points",     "min_prominence", "offsets",        "rabi_values",   "first_order",
        "zz_variant",     "z_plus_cutoff"};
    return keys;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return "";
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ValidationError("config: key '" + key + "' expects a number, got '" + text + "'");
    }
    return v;
}

std::size_t to_count(const std::string& key, const std::string& text) {
    const double v = to_double(key, text);
    if (!(v >= 0.0) || v != std::floor(v) || v > 1e9) {
        throw ValidationError("config: key '" + key + "' expects a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& text) {
    const std::string t = trim(text);
    if (t == "true" || t == "1") {
        return true;
    }
    if (t == "false" || t == "0") {
        return false;
    }
    throw ValidationError("config: key '" + key + "' expects true or false");
}

std::vector<double> to_list(const std::string& key, const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!trim(item).empty()) {
            out.push_back(to_double(key, item));
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += (i ? "," : "") + fmt(v[i]);
    }
    return out;
}

FlatConfig flatten_json(const nlohmann::json& j) {
    if (!j.is_object()) {
        throw ValidationError("config: JSON config must be an object");
    }
    FlatConfig flat;
    for (const auto& [key, value] : j.items()) {
        if (value.is_string()) {
            flat[key] = value.get<std::string>();
        } else if (value.is_boolean()) {
            flat[key] = value.get<bool>() ? "true" : "false";
        } else if (value.is_number()) {
            flat[key] = fmt(value.get<double>());
        } else if (value.is_array()) {
            std::vector<double> items;
            for (const auto& e : value) {
                if (!e.is_number()) {
                    throw ValidationError("config: key '" + key + "' expects a list of numbers");
                }
                items.push_back(e.get<double>());
            }
            flat[key] = fmt_list(items);
        } else {
            throw ValidationError("config: key '" + key + "' has an unsupported value type");
        }
    }
    return flat;
}

} // namespace

std::string to_string(Subcommand cmd) {
    switch (cmd) {
    case Subcommand::Kernel: return "kernel";
    case Subcommand::Spectrum: return "spectrum";
    case Subcommand::Scan: return "scan";
    case Subcommand::OrderCheck: return "order-check";
    case Subcommand::Validate: return "validate";
    }
    return "spectrum";
}

Subcommand parse_subcommand(const std::string& name) {
    for (auto c : {Subcommand::Kernel, Subcommand::Spectrum, Subcommand::Scan, Subcommand::OrderCheck,
                   Subcommand::Validate}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    throw ValidationError("config: unknown subcommand '" + name + "'");
}

FlatConfig parse_flat_config(const std::string& text) {
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(t);
        } catch (const nlohmann::json::exception& ex) {
            throw ValidationError(std::string("config: invalid JSON: ") + ex.what());
        }
        return flatten_json(j);
    }
    FlatConfig flat;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config: line " + std::to_string(lineno) + " is not key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        if (flat.count(key)) {
            throw ValidationError("config: duplicate key '" + key + "'");
        }
        flat[key] = trim(line.substr(eq + 1));
    }
    return flat;
}

FlatConfig read_flat_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("config: cannot open '" + path + "'");
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_flat_config(buf.str());
}

RunConfig build_config(Subcommand command, const FlatConfig& flat) {
    for (const auto& [key, value] : flat) {
        if (!known_keys().count(key)) {
            throw ValidationError("config: unknown key '" + key + "'");
        }
    }
    auto get = [&](const std::string& key) -> const std::string* {
        const auto it = flat.find(key);
        return it == flat.end() ? nullptr : &it->second;
    };
    auto number = [&](const std::string& key, double fallback) {
        const std::string* v = get(key);
        return v ? to_double(key, *v) : fallback;
    };

    RunConfig cfg;
    cfg.command = command;
    if (const auto* c = get("command"); c && parse_subcommand(*c) != command) {
        throw ValidationError("config: command '" + *c + "' does not match subcommand '" + to_string(command) + "'");
    }

    const std::string model = get("model") ? *get("model") : "band_edge";
    ReservoirModel reservoir;
    double omega_a = 0.0;
    double rabi = 0.0;
    if (model == "band_edge") {
        if (get("gamma")) {
            throw ValidationError("config: 'gamma' is a free_space key");
        }
        reservoir = BandEdge{number("omega_c", 100.0), number("beta", 1.0)};
        omega_a = number("omega_a", 100.27);
        rabi = number("rabi", 0.3);
    } else if (model == "free_space") {
        if (get("omega_c") || get("beta")) {
            throw ValidationError("config: 'omega_c' and 'beta' are band_edge keys");
        }
        reservoir = FreeSpace{number("gamma", 1.0)};
        omega_a = number("omega_a", 0.0);
        rabi = number("rabi", 1.0);
    } else {
        throw ValidationError("config: model must be band_edge or free_space, got '" + model + "'");
    }
    cfg.params = PhysicalParams::with_detuning(omega_a, number("delta", 0.0), rabi, reservoir);

    GridSpec& g = cfg.grid;
    cfg.auto_range = !get("omega_min") && !get("omega_max");
    if (get("omega_min") || get("omega_max")) {
        if (!get("omega_min") || !get("omega_max")) {
            throw ValidationError("config: omega_min and omega_max must be given together");
        }
        g.omega_min = number("omega_min", g.omega_min);
        g.omega_max = number("omega_max", g.omega_max);
        if (!(g.omega_max > g.omega_min)) {
            throw ValidationError("config: omega_max must exceed omega_min");
        }
    }
    if (const auto* v = get("base_points")) {
        g.base_points = to_count("base_points", *v);
    }
    if (const auto* v = get("max_points")) {
        g.max_points = to_count("max_points", *v);
    }
    g.peak_halfwidth = number("peak_halfwidth", g.peak_halfwidth);
    g.edge_halfwidth = number("edge_halfwidth", g.edge_halfwidth);
    g.geometric_ratio = number("geometric_ratio", g.geometric_ratio);
    g.refine_tol = number("refine_tol", g.refine_tol);
    if (g.base_points < 2 || !(g.refine_tol > 0.0) || !(g.peak_halfwidth > 0.0) || !(g.edge_halfwidth > 0.0) ||
        !(g.geometric_ratio > 0.0 && g.geometric_ratio < 1.0)) {
        throw ValidationError("config: invalid grid settings");
    }
    cfg.peaks.min_prominence = number("min_prominence", cfg.peaks.min_prominence);
    if (!(cfg.peaks.min_prominence >= 0.0)) {
        throw ValidationError("config: min_prominence must be >= 0");
    }
    if (const auto* v = get("offsets")) {
        cfg.offsets = to_list("offsets", *v);
    }
    if (const auto* v = get("rabi_values")) {
        cfg.rabi_values = to_list("rabi_values", *v);
        for (double r : cfg.rabi_values) {
            if (!(r >= 0.0)) {
                throw ValidationError("config: rabi_values must be >= 0");
            }
        }
    }
    if (const auto* v = get("first_order")) {
        cfg.first_order = to_bool("first_order", *v);
    }
    if (const auto* v = get("zz_variant")) {
        if (*v == "symmetrized") {
            cfg.first_order_options.zz = ZZVariant::Symmetrized;
        } else if (*v == "as_printed") {
            cfg.first_order_options.zz = ZZVariant::AsPrinted;
        } else {
            throw ValidationError("config: zz_variant must be symmetrized or as_printed");
        }
    }
    if (const auto* v = get("z_plus_cutoff")) {
        if (*v == "omega1") {
            cfg.first_order_options.z_plus = ZPlusCutoff::Omega1;
        } else if (*v == "omega2") {
            cfg.first_order_options.z_plus = ZPlusCutoff::Omega2;
        } else {
            throw ValidationError("config: z_plus_cutoff must be omega1 or omega2");
        }
    }
    if (command == Subcommand::Scan) {
        if (cfg.offsets.empty()) {
            throw ValidationError("config: scan requires a non-empty 'offsets' list");
        }
        (void)cfg.params.band_edge();
    }
    return cfg;
}

FlatConfig echo_config(const RunConfig& cfg) {
    FlatConfig f;
    const PhysicalParams& p = cfg.params;
    f["command"] = to_string(cfg.command);
    if (p.is_band_edge()) {
        f["model"] = "band_edge";
        f["omega_c"] = fmt(p.band_edge().omega_c);
        f["beta"] = fmt(p.band_edge().beta);
    } else {
        f["model"] = "free_space";
        f["gamma"] = fmt(p.free_space().gamma);
    }
    f["omega_a"] = fmt(p.omega_a);
    f["delta"] = fmt(p.delta);
    f["rabi"] = fmt(p.rabi);
    const GridSpec& g = cfg.grid;
    f["omega_min"] = fmt(g.omega_min);
    f["omega_max"] = fmt(g.omega_max);
    f["base_points"] = std::to_string(g.base_points);
    f["max_points"] = std::to_string(g.max_points);
    f["peak_halfwidth"] = fmt(g.peak_halfwidth);
    f["edge_halfwidth"] = fmt(g.edge_halfwidth);
    f["geometric_ratio"] = fmt(g.geometric_ratio);
    f["refine_tol"] = fmt(g.refine_tol);
    f["min_prominence"] = fmt(cfg.peaks.min_prominence);
    if (!cfg.offsets.empty()) {
        f["offsets"] = fmt_list(cfg.offsets);
    }
    if (!cfg.rabi_values.empty()) {
        f["rabi_values"] = fmt_list(cfg.rabi_values);
    }
    f["first_order"] = cfg.first_order ? "true" : "false";
    f["zz_variant"] = cfg.first_order_options.zz == ZZVariant::Symmetrized ? "symmetrized" : "as_printed";
    f["z_plus_cutoff"] = cfg.first_order_options.z_plus == ZPlusCutoff::Omega1 ? "omega1" : "omega2";
    return f;
}

void resolve_grid(RunConfig& cfg) {
    const PhysicalParams& p = cfg.params;
    if (cfg.command == Subcommand::Kernel) {
        if (cfg.auto_range) {
            if (p.is_band_edge()) {
                const double wc = p.band_edge().omega_c;
                const double cusp = wc - p.omega_a;
                cfg.grid.omega_min = cusp - 2.0 * wc;
                cfg.grid.omega_max = cusp + 6.0 * wc;
            } else {
                cfg.grid.omega_min = -10.0 * p.free_space().gamma;
                cfg.grid.omega_max = 10.0 * p.free_space().gamma;
            }
        }
        return;
    }
    std::vector<PhysicalParams> sets{p};
    if (cfg.command == Subcommand::Scan) {
        sets.clear();
        for (double wa : cfg.offsets) {
            sets.push_back(PhysicalParams::resonant(wa, p.rabi, p.reservoir));
        }
    }
    double lo = 0.0;
    double hi = 0.0;
    bool first = true;
    for (const auto& s : sets) {
        double lw = effective_decay_rate(s);
        if (!(lw > 0.0)) {
            lw = 1e-3 * s.unit_scale();
        }
        for (const auto& f : expected_features(s, cfg.grid)) {
            if (f.kind != GridFeature::Kind::Peak) {
                continue;
            }
            const double a = f.center - 10.0 * lw;
            const double b = f.center + 10.0 * lw;
            lo = first ? a : std::min(lo, a);
            hi = first ? b : std::max(hi, b);
            first = false;
        }
    }
    if (cfg.auto_range) {
        cfg.grid.omega_min = lo;
        cfg.grid.omega_max = hi;
    } else if (cfg.grid.omega_min > lo || cfg.grid.omega_max < hi) {
        throw ValidationError("config: grid [" + fmt(cfg.grid.omega_min) + ", " + fmt(cfg.grid.omega_max) +
                              "] must cover the expected peaks plus 10 linewidths [" + fmt(lo) + ", " + fmt(hi) + "]");
    }
}

} // namespace pbgfluor
