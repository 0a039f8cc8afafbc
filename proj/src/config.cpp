#include "sblab/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "sblab/field_io.hpp"

namespace sblab {

namespace {

struct KeyValue {
    std::string key;
    std::string value;
    int line;  // 0 for overrides
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& path, const KeyValue& kv, const std::string& what) {
    std::ostringstream os;
    os << path << ":";
    if (kv.line > 0)
        os << kv.line;
    else
        os << "override";
    os << ": key '" << kv.key << "': " << what;
    throw std::invalid_argument(os.str());
}

std::vector<KeyValue> parse_pairs(const std::string& text, std::span<const std::string> overrides,
                                  const std::string& path) {
    std::vector<KeyValue> out;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value', got '" + line + "'");
        out.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno});
    }
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("override '" + o + "' must have the form key=value");
        out.push_back({trim(o.substr(0, eq)), trim(o.substr(eq + 1)), 0});
    }
    return out;
}

double parse_double(const std::string& path, const KeyValue& kv) {
    double v = 0.0;
    std::size_t used = 0;
    bool ok = true;
    try {
        v = std::stod(kv.value, &used);
    } catch (const std::exception&) {
        ok = false;
    }
    if (!ok || used != kv.value.size()) fail(path, kv, "expected a number, got '" + kv.value + "'");
    return v;
}

long long parse_int(const std::string& path, const KeyValue& kv) {
    long long v = 0;
    std::size_t used = 0;
    bool ok = true;
    try {
        v = std::stoll(kv.value, &used);
    } catch (const std::exception&) {
        ok = false;
    }
    if (!ok || used != kv.value.size()) fail(path, kv, "expected an integer, got '" + kv.value + "'");
    return v;
}

Vec3 parse_vec3(const std::string& path, const KeyValue& kv) {
    std::istringstream is(kv.value);
    Vec3 v;
    if (!(is >> v.x >> v.y >> v.z)) fail(path, kv, "expected three numbers, got '" + kv.value + "'");
    std::string rest;
    if (is >> rest) fail(path, kv, "trailing characters after three numbers");
    return v;
}

std::vector<double> parse_list(const std::string& path, const KeyValue& kv) {
    std::istringstream is(kv.value);
    std::vector<double> out;
    double v;
    while (is >> v) out.push_back(v);
    if (!is.eof()) fail(path, kv, "expected a space-separated list of numbers");
    if (out.empty()) fail(path, kv, "empty list");
    return out;
}

bool apply_simulation_key(SimulationConfig& c, const std::string& path, const KeyValue& kv) {
    if (kv.key == "nu") c.nu = parse_double(path, kv);
    else if (kv.key == "L") c.L = parse_double(path, kv);
    else if (kv.key == "N") c.N = static_cast<int>(parse_int(path, kv));
    else if (kv.key == "dt") c.dt = parse_double(path, kv);
    else if (kv.key == "T") c.T = parse_double(path, kv);
    else if (kv.key == "epsilon") c.epsilon = parse_double(path, kv);
    else if (kv.key == "alpha") c.alpha = parse_double(path, kv);
    else if (kv.key == "rho0") c.rho0 = parse_double(path, kv);
    else if (kv.key == "lambda") c.lambda = parse_double(path, kv);
    else if (kv.key == "initial_field_id") c.initial_field_id = kv.value;
    else if (kv.key == "l0") c.l0 = parse_vec3(path, kv);
    else if (kv.key == "omega0") c.omega0 = parse_vec3(path, kv);
    else if (kv.key == "seed") c.seed = static_cast<std::uint64_t>(parse_int(path, kv));
    else if (kv.key == "output_interval") c.output_interval = parse_double(path, kv);
    else if (kv.key == "smoothing_width") c.smoothing_width = parse_double(path, kv);
    else return false;
    return true;
}

void validate_named(const std::string& path, const SimulationConfig& c) {
    // re-raise config invariant violations with the file in the message
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

}  // namespace

SimulationConfig parse_simulation_config_text(const std::string& text,
                                              std::span<const std::string> overrides,
                                              const std::string& path) {
    SimulationConfig c;
    for (const auto& kv : parse_pairs(text, overrides, path)) {
        if (!apply_simulation_key(c, path, kv)) fail(path, kv, "unknown key");
    }
    validate_named(path, c);
    return c;
}

SweepPlan parse_sweep_plan_text(const std::string& text, std::span<const std::string> overrides,
                                const std::string& path) {
    SweepPlan plan;
    // defaults for the sweep-only keys: filled below unless given
    bool have_epsilons = false, have_center = false, have_radius = false;
    for (const auto& kv : parse_pairs(text, overrides, path)) {
        if (apply_simulation_key(plan.base, path, kv)) continue;
        if (kv.key == "epsilons") {
            plan.epsilons = parse_list(path, kv);
            have_epsilons = true;
        } else if (kv.key == "K_center") {
            plan.comparison.center = parse_vec3(path, kv);
            have_center = true;
        } else if (kv.key == "K_radius") {
            plan.comparison.radius = parse_double(path, kv);
            have_radius = true;
        } else if (kv.key == "n_probes") {
            plan.n_probes = static_cast<int>(parse_int(path, kv));
        } else if (kv.key == "probe_kmax") {
            plan.probe_kmax = static_cast<int>(parse_int(path, kv));
        } else {
            fail(path, kv, "unknown key");
        }
    }
    const double L = plan.base.L;
    if (!have_epsilons) plan.epsilons = {L / 8.0, L / 16.0, L / 24.0, L / 32.0};
    if (!have_center) plan.comparison.center = Vec3{L / 3.0, L / 3.0, 0.0};
    if (!have_radius) plan.comparison.radius = L / 4.0;
    validate_named(path, plan.base);
    try {
        plan.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return plan;
}

namespace {
std::string slurp(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::invalid_argument("config file does not exist: " + path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}
}  // namespace

SimulationConfig parse_simulation_config(const std::string& path,
                                         std::span<const std::string> overrides) {
    return parse_simulation_config_text(slurp(path), overrides, path);
}

SweepPlan parse_sweep_plan(const std::string& path, std::span<const std::string> overrides) {
    return parse_sweep_plan_text(slurp(path), overrides, path);
}

std::string echo_config(const SimulationConfig& c) {
    std::ostringstream os;
    os << "nu = " << format_full(c.nu) << "\n"
       << "L = " << format_full(c.L) << "\n"
       << "N = " << c.N << "\n"
       << "dt = " << format_full(c.dt) << "\n"
       << "T = " << format_full(c.T) << "\n"
       << "epsilon = " << format_full(c.epsilon) << "\n"
       << "alpha = " << format_full(c.alpha) << "\n"
       << "rho0 = " << format_full(c.rho0) << "\n"
       << "lambda = " << format_full(c.lambda) << "\n"
       << "initial_field_id = " << c.initial_field_id << "\n"
       << "l0 = " << format_full(c.l0.x) << " " << format_full(c.l0.y) << " " << format_full(c.l0.z)
       << "\n"
       << "omega0 = " << format_full(c.omega0.x) << " " << format_full(c.omega0.y) << " "
       << format_full(c.omega0.z) << "\n"
       << "seed = " << c.seed << "\n"
       << "output_interval = " << format_full(c.output_interval) << "\n"
       << "smoothing_width = " << format_full(c.smoothing_width) << "\n";
    return os.str();
}

std::string echo_plan(const SweepPlan& plan) {
    std::ostringstream os;
    os << echo_config(plan.base);
    os << "epsilons =";
    for (double e : plan.epsilons) os << " " << format_full(e);
    os << "\n";
    os << "K_center = " << format_full(plan.comparison.center.x) << " "
       << format_full(plan.comparison.center.y) << " " << format_full(plan.comparison.center.z) << "\n";
    os << "K_radius = " << format_full(plan.comparison.radius) << "\n";
    os << "n_probes = " << plan.n_probes << "\n";
    os << "probe_kmax = " << plan.probe_kmax << "\n";
    return os.str();
}

}  // namespace sblab
