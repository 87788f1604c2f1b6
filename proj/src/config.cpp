#include "fricflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "fricflow/spaces.hpp"

namespace fricflow {

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::optional<double> to_double(const std::string& s) {
    double v = 0.0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
    return v;
}

std::optional<int> to_int(const std::string& s) {
    int v = 0;
    const char* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
    return v;
}

std::string upper(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
}

struct Entry {
    std::string value;
    int line = 0;
};

// returns an error message, empty on success
using Setter = std::function<std::string(const std::string&, ParsedConfig&)>;

struct Key {
    Setter set;
    bool required = false;
};

template <class F>
Setter real(F field) {
    return [field](const std::string& v, ParsedConfig& c) -> std::string {
        auto d = to_double(v);
        if (!d) return "expected a number, got '" + v + "'";
        field(c) = *d;
        return {};
    };
}

template <class F>
Setter integer(F field) {
    return [field](const std::string& v, ParsedConfig& c) -> std::string {
        auto d = to_int(v);
        if (!d) return "expected an integer, got '" + v + "'";
        field(c) = *d;
        return {};
    };
}

template <class F>
Setter text(F field) {
    return [field](const std::string& v, ParsedConfig& c) -> std::string {
        field(c) = v;
        return {};
    };
}

template <class F>
Setter reals(F field, std::size_t count = 0) {
    return [field, count](const std::string& v, ParsedConfig& c) -> std::string {
        std::vector<double> out;
        for (const auto& tok : split_list(v)) {
            auto d = to_double(tok);
            if (!d) return "expected a list of numbers, got '" + tok + "'";
            out.push_back(*d);
        }
        if (count && out.size() != count)
            return "expected " + std::to_string(count) + " numbers, got " + std::to_string(out.size());
        if (out.empty()) return "expected at least one number";
        field(c) = out;
        return {};
    };
}

template <class E>
Setter choice(std::vector<std::pair<std::string, E>> options, std::function<E&(ParsedConfig&)> field) {
    return [options, field](const std::string& v, ParsedConfig& c) -> std::string {
        for (const auto& [name, val] : options)
            if (upper(v) == name) {
                field(c) = val;
                return {};
            }
        std::string msg = "unknown value '" + v + "', expected one of";
        for (std::size_t i = 0; i < options.size(); ++i) msg += (i ? ", " : " ") + options[i].first;
        return msg;
    };
}

Setter box_setter(bool inner) {
    return [inner](const std::string& v, ParsedConfig& c) -> std::string {
        std::vector<double> x;
        for (const auto& tok : split_list(v)) {
            auto d = to_double(tok);
            if (!d) return "expected 4 numbers 'xmin ymin xmax ymax', got '" + tok + "'";
            x.push_back(*d);
        }
        if (x.size() != 4) return "expected 4 numbers 'xmin ymin xmax ymax'";
        if (!(x[2] > x[0]) || !(x[3] > x[1])) return "box must have xmax > xmin and ymax > ymin";
        (inner ? c.run.mesh.inner_box : c.run.mesh.outer_box) = Box{x[0], x[1], x[2], x[3]};
        return {};
    };
}

Setter field_shape(std::function<VectorFieldSpec&(ParsedConfig&)> f) {
    return [f](const std::string& v, ParsedConfig& c) -> std::string {
        if (!is_known_field_shape(v))
            return "unknown shape '" + v + "', expected one of zero, constant, rotation, vortex, mms_velocity, mms_force";
        f(c).shape = v;
        return {};
    };
}

Setter time_mode(std::function<VectorFieldSpec&(ParsedConfig&)> f) {
    return [f](const std::string& v, ParsedConfig& c) -> std::string {
        if (v != "steady" && v != "cos") return "unknown time mode '" + v + "', expected one of steady, cos";
        f(c).time_mode = v;
        return {};
    };
}

Setter direction(std::function<VectorFieldSpec&(ParsedConfig&)> f) {
    return [f](const std::string& v, ParsedConfig& c) -> std::string {
        auto toks = split_list(v);
        if (toks.size() != 2) return "expected 2 numbers";
        auto a = to_double(toks[0]), b = to_double(toks[1]);
        if (!a || !b) return "expected 2 numbers";
        f(c).direction = {*a, *b};
        return {};
    };
}

void add_field_keys(std::map<std::string, Key>& keys, std::function<VectorFieldSpec&(ParsedConfig&)> f) {
    keys["shape"] = {field_shape(f)};
    keys["amplitude"] = {real([f](ParsedConfig& c) -> double& { return f(c).amplitude; })};
    keys["direction"] = {direction(f)};
    keys["time_mode"] = {time_mode(f)};
    keys["omega"] = {real([f](ParsedConfig& c) -> double& { return f(c).omega; })};
}

using Schema = std::map<std::string, std::map<std::string, Key>>;

Schema make_schema() {
    Schema s;
    auto& mesh = s["mesh"];
    mesh["n"] = {integer([](ParsedConfig& c) -> int& { return c.run.mesh.n; }), true};
    mesh["outer_box"] = {box_setter(false)};
    mesh["inner_box"] = {box_setter(true)};

    auto& phys = s["physics"];
    phys["nu"] = {real([](ParsedConfig& c) -> double& { return c.run.nu; }), true};
    phys["T"] = {real([](ParsedConfig& c) -> double& { return c.run.T; }), true};
    phys["dt"] = {real([](ParsedConfig& c) -> double& { return c.run.dt; }), true};
    phys["eps"] = {real([](ParsedConfig& c) -> double& { return c.run.eps; }), true};
    phys["problem"] = {choice<ProblemKind>({{"STOKES", ProblemKind::Stokes}, {"NAVIER_STOKES", ProblemKind::NavierStokes}},
                                           [](ParsedConfig& c) -> ProblemKind& { return c.run.problem; })};
    phys["convection"] = {choice<ConvectionTreatment>(
        {{"SEMI_IMPLICIT", ConvectionTreatment::SemiImplicit}, {"FULLY_IMPLICIT", ConvectionTreatment::FullyImplicit}},
        [](ParsedConfig& c) -> ConvectionTreatment& { return c.run.convection; })};

    auto& fr = s["friction"];
    fr["type"] = {choice<FrictionSpec::Kind>({{"CONSTANT", FrictionSpec::Kind::Constant},
                                              {"EXPRESSION", FrictionSpec::Kind::Expression},
                                              {"TABLE", FrictionSpec::Kind::Table}},
                                             [](ParsedConfig& c) -> FrictionSpec::Kind& { return c.run.friction.kind; })};
    fr["g"] = {real([](ParsedConfig& c) -> double& { return c.run.friction.value; })};
    fr["expression"] = {[](const std::string& v, ParsedConfig& c) -> std::string {
        if (v != "arclength_sine" && v != "time_sine" && v != "time_ramp")
            return "unknown expression '" + v + "', expected one of arclength_sine, time_sine, time_ramp";
        c.run.friction.expression = v;
        return {};
    }};
    fr["amplitude"] = {real([](ParsedConfig& c) -> double& { return c.run.friction.amplitude; })};
    fr["frequency"] = {real([](ParsedConfig& c) -> double& { return c.run.friction.frequency; })};
    fr["samples"] = {reals([](ParsedConfig& c) -> std::vector<double>& { return c.run.friction.samples; })};

    add_field_keys(s["force"], [](ParsedConfig& c) -> VectorFieldSpec& { return c.run.force; });
    auto& init = s["initial"];
    add_field_keys(init, [](ParsedConfig& c) -> VectorFieldSpec& { return c.run.initial.field; });
    init["mode"] = {choice<InitialMode>({{"PROJECTION", InitialMode::Projection}, {"STATIONARY", InitialMode::Stationary}},
                                        [](ParsedConfig& c) -> InitialMode& { return c.run.initial.mode; })};

    auto& sol = s["solver"];
    sol["tol_abs"] = {real([](ParsedConfig& c) -> double& { return c.run.newton.tol_abs; })};
    sol["tol_rel"] = {real([](ParsedConfig& c) -> double& { return c.run.newton.tol_rel; })};
    sol["max_iter"] = {integer([](ParsedConfig& c) -> int& { return c.run.newton.max_iter; })};
    sol["line_search"] = {[](const std::string& v, ParsedConfig& c) -> std::string {
        if (v == "true" || v == "1" || v == "on") c.run.newton.line_search = true;
        else if (v == "false" || v == "0" || v == "off") c.run.newton.line_search = false;
        else return "expected true or false, got '" + v + "'";
        return {};
    }};

    auto& out = s["output"];
    out["directory"] = {text([](ParsedConfig& c) -> std::string& { return c.run.output.directory; })};
    out["snapshot_stride"] = {integer([](ParsedConfig& c) -> int& { return c.run.output.snapshot_stride; })};

    auto& v = s["verify"];
    auto vr = [](double VerifySettings::*m) {
        return Key{real([m](ParsedConfig& c) -> double& { return c.verify.*m; })};
    };
    v["energy_identity_tol"] = vr(&VerifySettings::energy_identity_tol);
    v["complementarity_tol"] = vr(&VerifySettings::complementarity_tol);
    v["pressure_identity_tol"] = vr(&VerifySettings::pressure_identity_tol);
    v["delta_tol"] = vr(&VerifySettings::delta_tol);
    v["stationary_n"] = {integer([](ParsedConfig& c) -> int& { return c.verify.stationary_n; })};
    v["eps_values"] = {reals([](ParsedConfig& c) -> std::vector<double>& { return c.verify.eps_values; })};
    v["eps_reference"] = vr(&VerifySettings::eps_reference);
    v["eps_rate_min_slope"] = vr(&VerifySettings::eps_rate_min_slope);
    v["dirichlet_g_factor"] = vr(&VerifySettings::dirichlet_g_factor);
    v["dirichlet_trace_ratio"] = vr(&VerifySettings::dirichlet_trace_ratio);
    v["dirichlet_h1_rel"] = vr(&VerifySettings::dirichlet_h1_rel);
    v["neumann_h1_rel"] = vr(&VerifySettings::neumann_h1_rel);
    v["convergence_meshes"] = {[](const std::string& val, ParsedConfig& c) -> std::string {
        std::vector<int> ns;
        for (const auto& tok : split_list(val)) {
            auto d = to_int(tok);
            if (!d) return "expected a list of integers, got '" + tok + "'";
            ns.push_back(*d);
        }
        if (ns.size() < 2) return "expected at least two mesh sizes";
        c.verify.convergence_meshes = ns;
        return {};
    }};
    v["convergence_l2_rate"] = vr(&VerifySettings::convergence_l2_rate);
    v["convergence_h1_rate"] = vr(&VerifySettings::convergence_h1_rate);
    v["convergence_g"] = vr(&VerifySettings::convergence_g);
    v["random_samples"] = {integer([](ParsedConfig& c) -> int& { return c.verify.random_samples; })};
    return s;
}

class Checker {
public:
    Checker(const std::string& origin, const std::map<std::string, std::map<std::string, Entry>>& entries,
            const std::set<std::string>& failed, std::vector<std::string>& errors)
        : origin_(origin), entries_(entries), failed_(failed), errors_(errors) {}

    void require(bool ok, const std::string& section, const std::string& key, const std::string& msg) {
        if (ok || failed_.count(section + "." + key)) return;
        errors_.push_back(where(section, key) + "[" + section + "]." + key + ": " + msg);
    }

    std::string where(const std::string& section, const std::string& key) const {
        auto s = entries_.find(section);
        if (s != entries_.end()) {
            auto k = s->second.find(key);
            if (k != s->second.end()) return origin_ + ":" + std::to_string(k->second.line) + ": ";
        }
        return origin_ + ": ";
    }

private:
    const std::string& origin_;
    const std::map<std::string, std::map<std::string, Entry>>& entries_;
    const std::set<std::string>& failed_;
    std::vector<std::string>& errors_;
};

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

void check_constraints(const ParsedConfig& c, Checker& ck) {
    const RunConfig& r = c.run;
    ck.require(r.mesh.n >= 1, "mesh", "n", "must be a positive integer (got " + std::to_string(r.mesh.n) + ")");
    ck.require(r.nu > 0.0, "physics", "nu", "must be positive (got " + fmt(r.nu) + ")");
    ck.require(r.dt > 0.0, "physics", "dt", "must be positive (got " + fmt(r.dt) + ")");
    ck.require(r.T >= r.dt, "physics", "T", "must be at least dt (got " + fmt(r.T) + ")");
    ck.require(r.eps > 0.0, "physics", "eps", "must be positive (got " + fmt(r.eps) + ")");
    ck.require(r.friction.value >= 0.0, "friction", "g", "must be nonnegative (got " + fmt(r.friction.value) + ")");
    if (r.friction.kind == FrictionSpec::Kind::Expression)
        ck.require(!r.friction.expression.empty(), "friction", "expression", "required when type = expression");
    if (r.friction.kind == FrictionSpec::Kind::Table) {
        ck.require(!r.friction.samples.empty(), "friction", "samples", "required when type = table");
        ck.require(std::all_of(r.friction.samples.begin(), r.friction.samples.end(), [](double g) { return g >= 0.0; }),
                   "friction", "samples", "must be nonnegative");
    }
    ck.require(r.newton.tol_abs > 0.0, "solver", "tol_abs", "must be positive");
    ck.require(r.newton.tol_rel > 0.0, "solver", "tol_rel", "must be positive");
    ck.require(r.newton.max_iter >= 1, "solver", "max_iter", "must be at least 1");
    ck.require(r.output.snapshot_stride >= 0, "output", "snapshot_stride", "must be nonnegative");
    ck.require(!r.output.directory.empty(), "output", "directory", "must not be empty");

    const VerifySettings& v = c.verify;
    ck.require(v.stationary_n >= 1, "verify", "stationary_n", "must be a positive integer");
    ck.require(v.eps_reference > 0.0, "verify", "eps_reference", "must be positive");
    bool eps_ok = v.eps_values.size() >= 2;
    for (std::size_t i = 0; i < v.eps_values.size(); ++i) {
        eps_ok = eps_ok && v.eps_values[i] > v.eps_reference;
        if (i) eps_ok = eps_ok && v.eps_values[i] < v.eps_values[i - 1];
    }
    ck.require(eps_ok, "verify", "eps_values",
               "need at least two strictly decreasing values above eps_reference");
    ck.require(v.dirichlet_g_factor > 0.0, "verify", "dirichlet_g_factor", "must be positive");
    ck.require(v.convergence_g >= 0.0, "verify", "convergence_g", "must be nonnegative");
    ck.require(std::all_of(v.convergence_meshes.begin(), v.convergence_meshes.end(), [](int n) { return n >= 1; }),
               "verify", "convergence_meshes", "must be positive integers");
    ck.require(v.random_samples >= 1, "verify", "random_samples", "must be at least 1");
}

// Geometry and table size depend on the mesh; only checked when the scalar
// constraints they rely on hold.
void check_geometry(const ParsedConfig& c, Checker& ck) {
    if (c.run.mesh.n < 1) return;
    try {
        const Mesh mesh = build_two_domain_mesh(c.run.mesh);
        if (c.run.friction.kind == FrictionSpec::Kind::Table) {
            const std::size_t expected = mesh.interface_edges.size() * 3;
            ck.require(c.run.friction.samples.size() == expected, "friction", "samples",
                       "expected " + std::to_string(expected) + " values (3 per interface edge), got " +
                           std::to_string(c.run.friction.samples.size()));
        }
    } catch (const std::invalid_argument& e) {
        ck.require(false, "mesh", "inner_box", e.what());
    }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errs)
    : std::runtime_error([&] {
          std::string m = "configuration has " + std::to_string(errs.size()) + " error(s):";
          for (const auto& e : errs) m += "\n  " + e;
          return m;
      }()),
      errors(std::move(errs)) {}

const char* to_string(ProblemKind k) { return k == ProblemKind::Stokes ? "STOKES" : "NAVIER_STOKES"; }
const char* to_string(ConvectionTreatment c) {
    return c == ConvectionTreatment::SemiImplicit ? "SEMI_IMPLICIT" : "FULLY_IMPLICIT";
}

ParsedConfig parse_config_text(const std::string& text, const std::string& origin) {
    static const Schema schema = make_schema();
    std::vector<std::string> errors;
    std::map<std::string, std::map<std::string, Entry>> entries;

    std::istringstream in(text);
    std::string raw, section;
    int lineno = 0;
    bool section_known = false;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto hash = raw.find_first_of("#;");
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const std::string here = origin + ":" + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') {
                errors.push_back(here + "malformed section header '" + line + "'");
                section_known = false;
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            section_known = schema.count(section) > 0;
            if (!section_known) {
                std::string msg = here + "unknown section [" + section + "], expected one of";
                for (const auto& [name, keys] : schema) msg += " [" + name + "]";
                errors.push_back(msg);
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            errors.push_back(here + "expected 'key = value', got '" + line + "'");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) {
            errors.push_back(here + "key '" + key + "' outside of any section");
            continue;
        }
        if (!section_known) continue;
        const auto& keys = schema.at(section);
        if (!keys.count(key)) {
            std::string msg = here + "[" + section + "]." + key + ": unknown key, expected one of";
            for (const auto& [k, spec] : keys) msg += " " + k;
            errors.push_back(msg);
            continue;
        }
        if (entries[section].count(key)) {
            errors.push_back(here + "[" + section + "]." + key + ": duplicate key (first set on line " +
                             std::to_string(entries[section][key].line) + ")");
            continue;
        }
        entries[section][key] = {value, lineno};
    }

    ParsedConfig cfg;
    std::set<std::string> failed;
    for (const auto& [sname, keys] : schema) {
        for (const auto& [kname, spec] : keys) {
            auto s = entries.find(sname);
            const Entry* e = nullptr;
            if (s != entries.end()) {
                auto k = s->second.find(kname);
                if (k != s->second.end()) e = &k->second;
            }
            if (!e) {
                if (spec.required) failed.insert(sname + "." + kname);
                if (spec.required) errors.push_back(origin + ": [" + sname + "]." + kname + ": missing required key");
                continue;
            }
            const std::string err = spec.set(e->value, cfg);
            if (!err.empty()) failed.insert(sname + "." + kname);
            if (!err.empty())
                errors.push_back(origin + ":" + std::to_string(e->line) + ": [" + sname + "]." + kname + ": " + err);
        }
    }

    // keys that failed to parse are not checked again
    Checker ck(origin, entries, failed, errors);
    check_constraints(cfg, ck);
    if (errors.empty()) check_geometry(cfg, ck);
    if (!errors.empty()) throw ConfigError(errors);
    return cfg;
}

ParsedConfig parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

}  // namespace fricflow
