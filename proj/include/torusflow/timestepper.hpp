#pragma once

#include <functional>
#include <vector>

#include "torusflow/config.hpp"
#include "torusflow/galerkin.hpp"
#include "torusflow/ledger.hpp"

namespace torusflow {

/// Samples the forcing at arbitrary times. Named analytic families are
/// constant in time; "from_file" interpolates checkpoint snapshots linearly
/// at the configured cadence (clamped at the ends).
class ForcingSampler {
public:
    ForcingSampler(const FieldSpec& spec, int cutoff, Real box_l);

    const SpectralField& sample(Real t) const;
    bool is_static() const { return snapshots_.size() <= 1; }

private:
    std::vector<SpectralField> snapshots_;
    Real cadence_ = 0.0;
    mutable SpectralField interp_;  // scratch for the interpolated value
};

struct TrajectoryState {
    Real t = 0.0;
    long step = 0;
    SpectralField u;         // solenoidal
    SpectralField last_rhs;  // u' at (t, u); empty until first evaluation
    Real int_a_uu = 0.0;     // companion integral of a(u,u)
    Real int_f_dot_u = 0.0;  // companion integral of (f,u)
};

struct InitReport {
    TrajectoryState state;
    Real dropped_energy = 0.0;    // L^2 mass of modes beyond the cutoff
    Real gradient_energy = 0.0;   // L^2 mass removed by the Leray projection
};

/// Project the initial data: truncate to the cutoff, then Leray-project.
InitReport initial_state(const SpectralField& u0, int cutoff);

/// Classical explicit RK4 on u' = -nu A u - g(u) + P f. Subject to the
/// viscous stability guard dt * nu * kappa_max^2 <= cfl_viscous (validated
/// at config level).
TrajectoryState step_rk4(const TrajectoryState& s, Real dt, const ForcingSampler& f,
                         Real nu, bool nonlinear = true);

/// Integrating-factor RK4: the viscous decay exp(-nu |kappa|^2 dt) is applied
/// exactly per mode, so there is no viscous step-size restriction and purely
/// linear dynamics are integrated to machine precision.
TrajectoryState step_ifrk4(const TrajectoryState& s, Real dt, const ForcingSampler& f,
                           Real nu, bool nonlinear = true);

struct RunResult {
    enum class Status { ok, nonfinite, guard_violation };
    Status status = Status::ok;
    std::string diagnostic;
    TrajectoryState final_state;
    EnergyLedger ledger;  // partial on abort
    Real dropped_energy = 0.0;
    Real gradient_energy = 0.0;
};

using StepMonitor = std::function<void(const TrajectoryState&)>;

/// Integrate from 0 to T = n_steps * dt, building the ledger (one row per
/// accepted state, including t = 0; empty when T = 0) and invoking each
/// monitor on every logged state. Solenoidality is re-imposed after each
/// step with the correction magnitude logged and guarded.
RunResult run(const RunConfig& config, const std::vector<StepMonitor>& monitors = {});

}  // namespace torusflow
