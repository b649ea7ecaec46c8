#include "torusflow/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "torusflow/ledger.hpp"

namespace torusflow {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
}

Real get_real(const json& obj, const char* key, Real fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) throw ConfigError(std::string(key) + " must be a number");
    return obj[key].get<Real>();
}

FieldSpec parse_field_spec(const json& obj, const std::string& where) {
    require_keys(obj,
                 {"family", "amplitude", "k0", "vector", "abc", "seed", "k_min",
                  "k_max", "slope", "files", "cadence"},
                 where);
    FieldSpec s;
    if (!obj.contains("family")) throw ConfigError(where + ": 'family' is required");
    s.family = obj["family"].get<std::string>();
    if (!is_known_family(s.family))
        throw ConfigError(where + ": unknown family '" + s.family + "'");
    s.amplitude = get_real(obj, "amplitude", s.amplitude);
    if (obj.contains("k0")) s.k0 = obj["k0"].get<int>();
    if (obj.contains("vector")) {
        const auto v = obj["vector"].get<std::vector<Real>>();
        if (v.size() != 3) throw ConfigError(where + ": 'vector' needs 3 entries");
        s.vector = Vec3(v[0], v[1], v[2]);
    }
    if (obj.contains("abc")) {
        const auto v = obj["abc"].get<std::vector<Real>>();
        if (v.size() != 3) throw ConfigError(where + ": 'abc' needs 3 entries");
        s.abc_a = v[0];
        s.abc_b = v[1];
        s.abc_c = v[2];
    }
    if (obj.contains("seed")) s.seed = obj["seed"].get<std::uint64_t>();
    if (obj.contains("k_min")) s.k_min = obj["k_min"].get<int>();
    if (obj.contains("k_max")) s.k_max = obj["k_max"].get<int>();
    s.slope = get_real(obj, "slope", s.slope);
    if (obj.contains("files")) s.files = obj["files"].get<std::vector<std::string>>();
    s.cadence = get_real(obj, "cadence", s.cadence);
    return s;
}

json field_spec_json(const FieldSpec& s) {
    json j;
    j["family"] = s.family;
    j["amplitude"] = s.amplitude;
    if (s.family == "taylor_green" || s.family == "abc_flow") j["k0"] = s.k0;
    if (s.family == "constant_mode" || s.family == "aperiodic_linear")
        j["vector"] = {s.vector(0), s.vector(1), s.vector(2)};
    if (s.family == "abc_flow") j["abc"] = {s.abc_a, s.abc_b, s.abc_c};
    if (s.family == "random_band") {
        j["seed"] = s.seed;
        j["k_min"] = s.k_min;
        j["k_max"] = s.k_max;
        j["slope"] = s.slope;
    }
    if (s.family == "from_file") {
        j["files"] = s.files;
        j["cadence"] = s.cadence;
    }
    return j;
}

}  // namespace

std::string to_string(Scheme s) { return s == Scheme::rk4 ? "rk4" : "ifrk4"; }

void RunConfig::validate() {
    if (!(box_l > 0)) throw ConfigError("box_l must be > 0");
    if (!(viscosity > 0)) throw ConfigError("viscosity must be > 0");
    if (horizon < 0) throw ConfigError("horizon must be >= 0");
    if (!(dt > 0)) throw ConfigError("dt must be > 0");
    if (cutoff < 0) throw ConfigError("cutoff must be >= 0");
    if (q0 == 0.0) q0 = box_l * box_l * box_l;  // unit mean pressure
    if (!(q0 > 0)) throw ConfigError("q0 must be > 0");
    if (horizon > 0 && std::abs(horizon - n_steps() * dt) > 1e-9 * std::max(horizon, dt))
        throw ConfigError("horizon must be an integer multiple of dt");
    if (!is_periodic_family(ic.family) || ic.family == "from_file")
        throw ConfigError("ic family '" + ic.family + "' cannot initialize a run");
    // Aperiodic forcing is allowed to parse (the compatibility checker's whole
    // job is to flag it); building a sampler for a run rejects it instead.
    if (scheme == Scheme::rk4) {
        const Real kappa_max_sq = 3.0 * std::pow(2.0 * pi * cutoff / box_l, 2);
        if (dt * viscosity * kappa_max_sq > tolerances.cfl_viscous)
            throw ConfigError(
                "viscous CFL guard violated: dt * nu * kappa_max^2 = " +
                format_double(dt * viscosity * kappa_max_sq) + " exceeds cfl_viscous = " +
                format_double(tolerances.cfl_viscous) + " (rk4 scheme)");
    }
    if (output.checkpoint_cadence < 0) throw ConfigError("checkpoint_cadence must be >= 0");
}

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    require_keys(j,
                 {"box_l", "viscosity", "horizon", "dt", "cutoff", "scheme",
                  "nonlinear", "q0", "ic", "forcing", "tolerances", "output"},
                 "config");
    RunConfig c;
    c.box_l = get_real(j, "box_l", c.box_l);
    c.viscosity = get_real(j, "viscosity", c.viscosity);
    c.horizon = get_real(j, "horizon", c.horizon);
    c.dt = get_real(j, "dt", c.dt);
    if (j.contains("cutoff")) c.cutoff = j["cutoff"].get<int>();
    if (j.contains("scheme")) {
        const std::string s = j["scheme"].get<std::string>();
        if (s == "rk4")
            c.scheme = Scheme::rk4;
        else if (s == "ifrk4")
            c.scheme = Scheme::ifrk4;
        else
            throw ConfigError("scheme must be 'rk4' or 'ifrk4'");
    }
    if (j.contains("nonlinear")) c.nonlinear = j["nonlinear"].get<bool>();
    c.q0 = get_real(j, "q0", c.q0);
    if (j.contains("ic")) c.ic = parse_field_spec(j["ic"], "ic");
    if (j.contains("forcing")) c.forcing = parse_field_spec(j["forcing"], "forcing");
    if (j.contains("tolerances")) {
        const json& t = j["tolerances"];
        require_keys(t,
                     {"solenoidal_rel", "energy_identity_rel", "gronwall_margin_rel",
                      "regularity_margin_rel", "pressure_poisson_rel",
                      "pressure_gradient_rel", "compat_jump_rel", "cfl_advective",
                      "cfl_viscous"},
                     "tolerances");
        Tolerances& tol = c.tolerances;
        tol.solenoidal_rel = get_real(t, "solenoidal_rel", tol.solenoidal_rel);
        tol.energy_identity_rel = get_real(t, "energy_identity_rel", tol.energy_identity_rel);
        tol.gronwall_margin_rel = get_real(t, "gronwall_margin_rel", tol.gronwall_margin_rel);
        tol.regularity_margin_rel =
            get_real(t, "regularity_margin_rel", tol.regularity_margin_rel);
        tol.pressure_poisson_rel =
            get_real(t, "pressure_poisson_rel", tol.pressure_poisson_rel);
        tol.pressure_gradient_rel =
            get_real(t, "pressure_gradient_rel", tol.pressure_gradient_rel);
        tol.compat_jump_rel = get_real(t, "compat_jump_rel", tol.compat_jump_rel);
        tol.cfl_advective = get_real(t, "cfl_advective", tol.cfl_advective);
        tol.cfl_viscous = get_real(t, "cfl_viscous", tol.cfl_viscous);
    }
    if (j.contains("output")) {
        require_keys(j["output"], {"checkpoint_cadence"}, "output");
        if (j["output"].contains("checkpoint_cadence"))
            c.output.checkpoint_cadence = j["output"]["checkpoint_cadence"].get<long>();
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string resolved_json(const RunConfig& c) {
    json j;
    j["box_l"] = c.box_l;
    j["viscosity"] = c.viscosity;
    j["horizon"] = c.horizon;
    j["dt"] = c.dt;
    j["cutoff"] = c.cutoff;
    j["scheme"] = to_string(c.scheme);
    j["nonlinear"] = c.nonlinear;
    j["q0"] = c.q0;
    j["ic"] = field_spec_json(c.ic);
    j["forcing"] = field_spec_json(c.forcing);
    j["tolerances"] = {{"solenoidal_rel", c.tolerances.solenoidal_rel},
                       {"energy_identity_rel", c.tolerances.energy_identity_rel},
                       {"gronwall_margin_rel", c.tolerances.gronwall_margin_rel},
                       {"regularity_margin_rel", c.tolerances.regularity_margin_rel},
                       {"pressure_poisson_rel", c.tolerances.pressure_poisson_rel},
                       {"pressure_gradient_rel", c.tolerances.pressure_gradient_rel},
                       {"compat_jump_rel", c.tolerances.compat_jump_rel},
                       {"cfl_advective", c.tolerances.cfl_advective},
                       {"cfl_viscous", c.tolerances.cfl_viscous}};
    j["output"] = {{"checkpoint_cadence", c.output.checkpoint_cadence}};
    return j.dump(2);
}

std::string config_hash(const RunConfig& c) {
    const std::string s = resolved_json(c);
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof(buf), "0x%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace torusflow
