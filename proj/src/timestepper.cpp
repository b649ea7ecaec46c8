#include "torusflow/timestepper.hpp"

#include <cmath>
#include <stdexcept>

#include "torusflow/checkpoint.hpp"

namespace torusflow {

namespace {

// One stage evaluation: the non-stiff part -g(u) + P f, plus the integrand
// samples for the companion integrals.
struct Stage {
    SpectralField nonlinear;
    Real a_uu = 0.0;
    Real f_dot_u = 0.0;
    Real f_dual1 = 0.0;
};

Stage eval_stage(const SpectralField& u, const SpectralField& f, bool nonlinear) {
    Stage s;
    const SpectralField f_proj =
        leray_project(f.cutoff() == u.cutoff() ? f : resample(f, u.cutoff()));
    if (nonlinear) {
        s.nonlinear = f_proj - advection_term(u);
    } else {
        s.nonlinear = f_proj;
    }
    s.a_uu = grad_inner(u, u);
    s.f_dot_u = l2_inner(f_proj, u);
    s.f_dual1 = sobolev_norm(f_proj, -1.0);
    return s;
}

SpectralField with_viscous(const Stage& st, const SpectralField& u, Real nu) {
    SpectralField d = neg_laplacian(u);
    d *= -nu;
    d += st.nonlinear;
    return d;
}

RealVector decay_table(const SpectralField& u, Real nu, Real tau) {
    return (-nu * tau * mode_kappa_sq(u.cutoff(), u.box_l()).array()).exp();
}

void scale_modes(SpectralField& f, const RealVector& table) {
    for (int c = 0; c < f.components(); ++c)
        f.coeffs().col(c).array() *= table.array().cast<Complex>();
}

TrajectoryState advance_rk4(const TrajectoryState& s, const Stage& s1, Real dt,
                            const ForcingSampler& f, Real nu, bool nonlinear) {
    const Real t = s.t;
    const SpectralField k1 = with_viscous(s1, s.u, nu);
    const SpectralField u2 = s.u + (dt / 2) * k1;
    const Stage s2 = eval_stage(u2, f.sample(t + dt / 2), nonlinear);
    const SpectralField k2 = with_viscous(s2, u2, nu);
    const SpectralField u3 = s.u + (dt / 2) * k2;
    const Stage s3 = eval_stage(u3, f.sample(t + dt / 2), nonlinear);
    const SpectralField k3 = with_viscous(s3, u3, nu);
    const SpectralField u4 = s.u + dt * k3;
    const Stage s4 = eval_stage(u4, f.sample(t + dt), nonlinear);
    const SpectralField k4 = with_viscous(s4, u4, nu);

    TrajectoryState out;
    out.u = s.u + (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    out.t = t + dt;
    out.step = s.step + 1;
    out.int_a_uu = s.int_a_uu + (dt / 6) * (s1.a_uu + 2 * s2.a_uu + 2 * s3.a_uu + s4.a_uu);
    out.int_f_dot_u =
        s.int_f_dot_u +
        (dt / 6) * (s1.f_dot_u + 2 * s2.f_dot_u + 2 * s3.f_dot_u + s4.f_dot_u);
    return out;
}

TrajectoryState advance_ifrk4(const TrajectoryState& s, const Stage& s1, Real dt,
                              const ForcingSampler& f, Real nu, bool nonlinear) {
    const Real t = s.t;
    const RealVector e_half = decay_table(s.u, nu, dt / 2);
    const RealVector e_full = decay_table(s.u, nu, dt);

    SpectralField ua = s.u + (dt / 2) * s1.nonlinear;
    scale_modes(ua, e_half);
    const Stage s2 = eval_stage(ua, f.sample(t + dt / 2), nonlinear);

    SpectralField ub = s.u;
    scale_modes(ub, e_half);
    ub += (dt / 2) * s2.nonlinear;
    const Stage s3 = eval_stage(ub, f.sample(t + dt / 2), nonlinear);

    SpectralField uc = s.u;
    scale_modes(uc, e_full);
    SpectralField n3 = s3.nonlinear;
    scale_modes(n3, e_half);
    uc += dt * n3;
    const Stage s4 = eval_stage(uc, f.sample(t + dt), nonlinear);

    SpectralField n1 = s1.nonlinear;
    scale_modes(n1, e_full);
    SpectralField n23 = s2.nonlinear + s3.nonlinear;
    scale_modes(n23, e_half);

    TrajectoryState out;
    out.u = s.u;
    scale_modes(out.u, e_full);
    out.u += (dt / 6) * (n1 + 2.0 * n23 + s4.nonlinear);
    out.t = t + dt;
    out.step = s.step + 1;
    out.int_a_uu = s.int_a_uu + (dt / 6) * (s1.a_uu + 2 * s2.a_uu + 2 * s3.a_uu + s4.a_uu);
    out.int_f_dot_u =
        s.int_f_dot_u +
        (dt / 6) * (s1.f_dot_u + 2 * s2.f_dot_u + 2 * s3.f_dot_u + s4.f_dot_u);
    return out;
}

LedgerRow make_row(const TrajectoryState& s, const Stage& at_state, Real correction) {
    LedgerRow r;
    r.step = s.step;
    r.t = s.t;
    r.energy = 0.5 * l2_norm_sq(s.u);
    const Real vol = s.u.box_l() * s.u.box_l() * s.u.box_l();
    const Eigen::Index zero = s.u.flat_index(WaveVector{0, 0, 0});
    Real e0 = 0.0;
    for (int c = 0; c < 3; ++c) e0 += std::norm(s.u.coeffs()(zero, c));
    r.energy_const = 0.5 * vol * e0;
    r.a_uu = at_state.a_uu;
    r.f_dot_u = at_state.f_dot_u;
    r.int_a_uu = s.int_a_uu;
    r.int_f_dot_u = s.int_f_dot_u;
    r.uprime_l2 = l2_norm(s.last_rhs);
    r.uprime_dual = sobolev_norm(s.last_rhs, -1.5);
    r.uprime_h1 = sobolev_norm(s.last_rhs, 1.0);
    r.f_dual1 = at_state.f_dual1;
    r.sup_u = lp_norm(s.u, std::numeric_limits<Real>::infinity(),
                      dealiased_grid(s.u.cutoff()));
    r.h1 = sobolev_norm(s.u, 1.0);
    r.h2 = sobolev_norm(s.u, 2.0);
    r.h3 = sobolev_norm(s.u, 3.0);
    r.div_residual = relative_divergence(s.u);
    r.leray_correction = correction;
    return r;
}

}  // namespace

ForcingSampler::ForcingSampler(const FieldSpec& spec, int cutoff, Real box_l) {
    if (spec.family == "from_file") {
        if (spec.files.empty())
            throw ConfigError("from_file forcing: at least one file required");
        if (spec.files.size() > 1 && !(spec.cadence > 0))
            throw ConfigError("from_file forcing: cadence must be > 0 for a series");
        for (const std::string& path : spec.files) {
            Checkpoint cp = read_checkpoint(path);
            if (cp.field.box_l() != box_l)
                throw ConfigError("from_file forcing: box size mismatch in " + path);
            if (!cp.field.is_vector())
                throw ConfigError("from_file forcing: vector field required in " + path);
            snapshots_.push_back(cp.field.cutoff() == cutoff
                                     ? std::move(cp.field)
                                     : resample(cp.field, cutoff));
        }
        cadence_ = spec.cadence;
    } else {
        if (!is_periodic_family(spec.family))
            throw ConfigError("forcing family '" + spec.family +
                              "' is not periodic; runs require periodic forcing");
        snapshots_.push_back(realize_field(spec, cutoff, box_l));
    }
    interp_ = snapshots_.front();
}

const SpectralField& ForcingSampler::sample(Real t) const {
    if (snapshots_.size() == 1) return snapshots_.front();
    const Real pos = t / cadence_;
    if (pos <= 0) return snapshots_.front();
    const size_t last = snapshots_.size() - 1;
    if (pos >= static_cast<Real>(last)) return snapshots_.back();
    const auto i = static_cast<size_t>(pos);
    const Real w = pos - static_cast<Real>(i);
    interp_ = snapshots_[i];
    interp_ *= (1.0 - w);
    SpectralField hi = snapshots_[i + 1];
    hi *= w;
    interp_ += hi;
    return interp_;
}

InitReport initial_state(const SpectralField& u0, int cutoff) {
    if (!u0.is_vector()) throw std::invalid_argument("initial_state: vector field required");
    InitReport rep;
    const SpectralField boxed = u0.cutoff() == cutoff ? u0 : resample(u0, cutoff);
    const SpectralField projected = leray_project(boxed);
    rep.dropped_energy = l2_norm_sq(u0) - l2_norm_sq(boxed);
    rep.gradient_energy = l2_norm_sq(boxed) - l2_norm_sq(projected);
    rep.state.u = projected;
    rep.state.t = 0.0;
    rep.state.step = 0;
    return rep;
}

TrajectoryState step_rk4(const TrajectoryState& s, Real dt, const ForcingSampler& f,
                         Real nu, bool nonlinear) {
    if (!(dt > 0)) throw std::invalid_argument("step_rk4: dt must be > 0");
    return advance_rk4(s, eval_stage(s.u, f.sample(s.t), nonlinear), dt, f, nu, nonlinear);
}

TrajectoryState step_ifrk4(const TrajectoryState& s, Real dt, const ForcingSampler& f,
                           Real nu, bool nonlinear) {
    if (!(dt > 0)) throw std::invalid_argument("step_ifrk4: dt must be > 0");
    return advance_ifrk4(s, eval_stage(s.u, f.sample(s.t), nonlinear), dt, f, nu,
                         nonlinear);
}

RunResult run(const RunConfig& config, const std::vector<StepMonitor>& monitors) {
    RunResult result;
    const SpectralField u0 = realize_field(config.ic, config.cutoff, config.box_l);
    InitReport init = initial_state(u0, config.cutoff);
    result.dropped_energy = init.dropped_energy;
    result.gradient_energy = init.gradient_energy;
    TrajectoryState state = std::move(init.state);

    const ForcingSampler forcing(config.forcing, config.cutoff, config.box_l);
    const long n = config.n_steps();
    if (n == 0) {
        result.final_state = std::move(state);
        return result;
    }

    // Evaluate, log, and keep the stage for reuse as the next first stage.
    const auto log_state = [&](TrajectoryState& s, Real correction) {
        Stage at = eval_stage(s.u, forcing.sample(s.t), config.nonlinear);
        s.last_rhs = with_viscous(at, s.u, config.viscosity);
        result.ledger.rows.push_back(make_row(s, at, correction));
        for (const StepMonitor& m : monitors) m(s);
        return at;
    };

    Stage at_state = log_state(state, 0.0);
    const Real dx = config.box_l / dealiased_grid(config.cutoff);

    for (long i = 0; i < n; ++i) {
        // Advective CFL guard, evaluated at the current accepted state.
        const Real sup_u = result.ledger.rows.back().sup_u;
        if (sup_u > 0 && config.dt > config.tolerances.cfl_advective * dx / sup_u) {
            result.status = RunResult::Status::guard_violation;
            result.diagnostic =
                "advective CFL guard violated at t = " + format_double(state.t) +
                ": dt > cfl_advective * dx / sup|u|";
            break;
        }
        TrajectoryState next;
        try {
            next = config.scheme == Scheme::rk4
                       ? advance_rk4(state, at_state, config.dt, forcing,
                                     config.viscosity, config.nonlinear)
                       : advance_ifrk4(state, at_state, config.dt, forcing,
                                       config.viscosity, config.nonlinear);
        } catch (const std::exception& e) {
            // Blowing up can overflow inside a stage transform before any
            // coefficient reaches infinity; either way the run is unstable.
            result.status = RunResult::Status::nonfinite;
            result.diagnostic = "step " + std::to_string(state.step + 1) +
                                " failed (instability): " + e.what();
            break;
        }
        // Fixed-step bookkeeping: t derived from the step index, not summed.
        next.t = config.dt * static_cast<Real>(next.step);

        if (!next.u.coeffs().allFinite()) {
            result.status = RunResult::Status::nonfinite;
            result.diagnostic = "non-finite coefficient after step " +
                                std::to_string(next.step) +
                                " (t = " + format_double(next.t) + ")";
            break;
        }
        // Re-impose solenoidality; the correction must stay at roundoff level.
        const Real norm_before = l2_norm(next.u);
        const SpectralField projected = leray_project(next.u);
        const Real correction =
            norm_before > 0 ? l2_norm(next.u - projected) / norm_before : 0.0;
        next.u = projected;
        if (correction > config.tolerances.solenoidal_rel) {
            result.status = RunResult::Status::guard_violation;
            result.diagnostic =
                "solenoidal guard violated at step " + std::to_string(next.step) +
                ": relative correction " + format_double(correction) + " exceeds " +
                format_double(config.tolerances.solenoidal_rel);
            break;
        }
        state = std::move(next);
        at_state = log_state(state, correction);
    }

    result.final_state = std::move(state);
    result.ledger.validate();
    return result;
}

}  // namespace torusflow
