#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "torusflow/fields.hpp"

namespace torusflow {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Tolerances {
    Real solenoidal_rel = 1e-11;       // per-step divergence guard
    Real energy_identity_rel = 1e-8;   // residual / max(E)
    Real gronwall_margin_rel = 1e-10;  // allowed envelope undershoot
    Real regularity_margin_rel = 1e-10;
    Real pressure_poisson_rel = 1e-12;
    Real pressure_gradient_rel = 1e-10;
    Real compat_jump_rel = 1e-12;
    Real cfl_advective = 0.5;          // dt <= c * dx / ||u||_inf, per step
    Real cfl_viscous = 2.5;            // dt * nu * kappa_max^2 <= c (rk4 only)
};

enum class Scheme { rk4, ifrk4 };

std::string to_string(Scheme s);

struct OutputSpec {
    long checkpoint_cadence = 0;  // steps between checkpoints; 0 = final only
};

/// Everything a run needs; parses from a single JSON document. Unknown keys
/// anywhere are hard errors.
struct RunConfig {
    Real box_l = 2.0 * pi;
    Real viscosity = 1.0;
    Real horizon = 1.0;  // T
    Real dt = 1e-3;
    int cutoff = 4;
    Scheme scheme = Scheme::ifrk4;
    bool nonlinear = true;
    Real q0 = 0.0;  // 0 means "default to l^3", resolved in validate()
    FieldSpec ic;
    FieldSpec forcing;
    Tolerances tolerances;
    OutputSpec output;

    long n_steps() const { return std::lround(horizon / dt); }

    /// Positivity, CFL (viscous, for rk4), family checks. Fills q0 default.
    /// Throws ConfigError with a message naming the violated guard.
    void validate();
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

/// Canonical resolved form (defaults filled in), serialized deterministically.
std::string resolved_json(const RunConfig& c);

/// FNV-1a 64-bit over the resolved JSON, as "0x" hex; embedded in artifacts.
std::string config_hash(const RunConfig& c);

}  // namespace torusflow
