#include "torusflow/monitors.hpp"

#include <cmath>

namespace torusflow {

namespace {

// A-posteriori trapezoid error estimate: |err| <= dt^2/12 * int |g''|,
// with int |g''| ~ sum |second difference| / dt.
Real trapezoid_allowance(const EnergyLedger& ledger,
                         const std::function<Real(const LedgerRow&)>& column) {
    if (ledger.size() < 3) return 0.0;
    Real acc = 0.0;
    for (size_t i = 1; i + 1 < ledger.size(); ++i) {
        acc += std::abs(column(ledger.rows[i + 1]) - 2.0 * column(ledger.rows[i]) +
                        column(ledger.rows[i - 1]));
    }
    const Real dt = ledger.rows[1].t - ledger.rows[0].t;
    return dt * acc / 12.0;
}

}  // namespace

bool EnergyIdentityReport::pass(Real rel_tol) const {
    return max_residual <= rel_tol * std::max(max_energy, Real(0)) ||
           (max_energy == 0.0 && max_residual == 0.0);
}

EnergyIdentityReport check_energy_identity(const EnergyLedger& ledger, Real nu) {
    EnergyIdentityReport rep;
    if (ledger.empty()) return rep;
    const Real e0 = ledger.rows.front().energy;
    for (const LedgerRow& r : ledger.rows) {
        const Real res = (r.energy - e0) + nu * r.int_a_uu - r.int_f_dot_u;
        rep.residuals.push_back(res);
        rep.max_residual = std::max(rep.max_residual, std::abs(res));
        rep.max_energy = std::max(rep.max_energy, r.energy);
    }
    rep.normalized = rep.max_energy > 0 ? rep.max_residual / rep.max_energy : 0.0;
    return rep;
}

EstimateICertificate check_estimate_I(const EnergyLedger& ledger, Real nu, Real box_l) {
    EstimateICertificate cert;
    cert.c5_sq = 1.0 + std::pow(box_l / (2.0 * pi), 2);
    cert.derivation =
        "Energy bound with explicit constants. Pairing (f,u) splits into the\n"
        "k=0 and k!=0 parts: (f,u1) <= ||f||_{V'1} |u1| (the k=0 dual weight\n"
        "is 1), and (f,u2) <= c5 ||f||_{V'1} sqrt(a(u,u)) with\n"
        "c5^2 = 1 + (l/2pi)^2 (smallest nonzero |kappa| is 2pi/l). Young:\n"
        "2(f,u) <= ||f||^2 + |u1|^2 + (c5^2/nu)||f||^2 + nu a(u,u). With\n"
        "y = |u|^2 and g = (1 + c5^2/nu)||f||^2 the identity\n"
        "d/dt y + 2 nu a(u,u) = 2(f,u) gives d/dt y + nu a <= g + y, hence\n"
        "(i) y(t) <= e^t (y(0) + int e^{-s} g ds)   [Gronwall]\n"
        "(ii) y(t) + nu int a <= y(0) + int g + int y\n"
        "(iii) same as (i) for the constant modes alone with g = ||f||^2.\n"
        "All norms are the Fourier-multiplier realizations; the V'-pairing\n"
        "of the constant modes is the L^2 pairing of the k=0 coefficients.\n"
        "Time integrals are trapezoid sums on the ledger rows; the margin\n"
        "tolerance includes an a-posteriori O(dt^2) quadrature allowance.";
    if (ledger.size() < 2) {
        cert.pass = true;
        return cert;
    }

    const auto y_col = [](const LedgerRow& r) { return 2.0 * r.energy; };
    const auto y1_col = [](const LedgerRow& r) { return 2.0 * r.energy_const; };
    const auto d_col = [](const LedgerRow& r) { return r.a_uu; };
    const Real gf = 1.0 + cert.c5_sq / nu;
    const auto g_col = [gf](const LedgerRow& r) { return gf * r.f_dual1 * r.f_dual1; };
    const auto f2_col = [](const LedgerRow& r) { return r.f_dual1 * r.f_dual1; };
    const auto eg_col = [&](const LedgerRow& r) { return std::exp(-r.t) * g_col(r); };
    const auto ef2_col = [&](const LedgerRow& r) { return std::exp(-r.t) * f2_col(r); };

    const std::vector<Real> int_d = ledger.cumulative_trapezoid(d_col);
    const std::vector<Real> int_g = ledger.cumulative_trapezoid(g_col);
    const std::vector<Real> int_y = ledger.cumulative_trapezoid(y_col);
    const std::vector<Real> int_eg = ledger.cumulative_trapezoid(eg_col);
    const std::vector<Real> int_ef2 = ledger.cumulative_trapezoid(ef2_col);

    const Real y0 = y_col(ledger.rows.front());
    const Real y10 = y1_col(ledger.rows.front());

    Real m_i = std::numeric_limits<Real>::infinity();
    Real m_ii = m_i, m_iii = m_i;
    cert.sup_y_bound = 0.0;
    cert.dissipation_bound = 0.0;
    for (size_t i = 0; i < ledger.size(); ++i) {
        const LedgerRow& r = ledger.rows[i];
        const Real b_i = std::exp(r.t) * (y0 + int_eg[i]);
        const Real lhs_ii = y_col(r) + nu * int_d[i];
        const Real rhs_ii = y0 + int_g[i] + int_y[i];
        const Real b_iii = std::exp(r.t) * (y10 + int_ef2[i]);
        m_i = std::min(m_i, b_i - y_col(r));
        m_ii = std::min(m_ii, rhs_ii - lhs_ii);
        m_iii = std::min(m_iii, b_iii - y1_col(r));
        cert.sup_y_bound = std::max(cert.sup_y_bound, b_i);
        cert.dissipation_bound = std::max(cert.dissipation_bound, rhs_ii);
    }
    cert.margin_gronwall = m_i;
    cert.margin_integrated = m_ii;
    cert.margin_const_modes = m_iii;
    cert.quad_allowance = trapezoid_allowance(ledger, g_col) +
                          trapezoid_allowance(ledger, y_col) +
                          nu * trapezoid_allowance(ledger, d_col);
    cert.pass = m_i >= -cert.quad_allowance && m_ii >= -cert.quad_allowance &&
                m_iii >= -cert.quad_allowance;
    return cert;
}

EstimateIIReport check_estimate_II(const EnergyLedger& ledger) {
    EstimateIIReport rep;
    if (ledger.empty()) {
        rep.finite = true;
        return rep;
    }
    const auto col = [](const LedgerRow& r) { return r.uprime_dual * r.uprime_dual; };
    rep.integral_dual_sq = ledger.cumulative_trapezoid(col).back();
    rep.finite = std::isfinite(rep.integral_dual_sq);
    return rep;
}

GronwallReport twin_run_gronwall(const RunConfig& config, const FieldSpec& perturbation,
                                 std::optional<Real> c_override) {
    GronwallReport rep;
    rep.derivation =
        "Separation of twin trajectories under identical forcing. With\n"
        "w = u - u*: d/dt |w|^2/2 + nu a(w,w) = -b(w,u,w) and\n"
        "|b(w,u,w)| = |b(w,w,u)| <= sup|u| |w| sqrt(a(w,w))\n"
        "<= nu a(w,w) + (1/(4 nu)) sup|u|^2 |w|^2, so\n"
        "|w(t)|^2 <= |w(0)|^2 exp(c int_0^t sup|u|^2 ds) with c = 1/(2 nu).\n"
        "sup|u| is the collocation max on the dealiased grid (the artifact's\n"
        "L^inf realization); the time integral is a trapezoid sum.";
    rep.c_used = c_override.value_or(1.0 / (2.0 * config.viscosity));

    // Base and perturbed runs share the forcing; the perturbed initial state
    // is P(truncate(u0 + delta)), so w(0) is measured, not prescribed.
    const SpectralField u0 = realize_field(config.ic, config.cutoff, config.box_l);
    const SpectralField delta =
        realize_field(perturbation, config.cutoff, config.box_l);

    std::vector<SpectralField> base_states;
    std::vector<SpectralField> twin_states;
    const auto collect = [](std::vector<SpectralField>& into) {
        return [&into](const TrajectoryState& s) { into.push_back(s.u); };
    };

    const RunResult base = run(config, {collect(base_states)});
    if (base.status != RunResult::Status::ok)
        throw std::runtime_error("twin_run_gronwall: base run failed: " +
                                 base.diagnostic);

    // The twin trajectory starts from P(truncate(u0 + delta)) and is stepped
    // directly with the same scheme and forcing.
    {
        InitReport init = initial_state(u0 + delta, config.cutoff);
        TrajectoryState state = std::move(init.state);
        const ForcingSampler forcing(config.forcing, config.cutoff, config.box_l);
        twin_states.push_back(state.u);
        for (long i = 0; i < config.n_steps(); ++i) {
            state = config.scheme == Scheme::rk4
                        ? step_rk4(state, config.dt, forcing, config.viscosity,
                                   config.nonlinear)
                        : step_ifrk4(state, config.dt, forcing, config.viscosity,
                                     config.nonlinear);
            state.t = config.dt * static_cast<Real>(state.step);
            if (!state.u.coeffs().allFinite())
                throw std::runtime_error("twin_run_gronwall: perturbed run diverged");
            state.u = leray_project(state.u);
            twin_states.push_back(state.u);
        }
    }

    if (base_states.size() != twin_states.size())
        throw std::runtime_error("twin_run_gronwall: trajectory length mismatch");

    const auto phi = [](const LedgerRow& r) { return r.sup_u * r.sup_u; };
    const std::vector<Real> int_phi = base.ledger.cumulative_trapezoid(phi);

    rep.w0_sq = l2_norm_sq(twin_states.front() - base_states.front());
    rep.min_margin = std::numeric_limits<Real>::infinity();
    rep.c_measured = 0.0;
    for (size_t i = 0; i < base_states.size(); ++i) {
        const Real wsq = l2_norm_sq(twin_states[i] - base_states[i]);
        const Real b = rep.w0_sq * std::exp(rep.c_used * int_phi[i]);
        rep.times.push_back(base.ledger.rows[i].t);
        rep.w_sq.push_back(wsq);
        rep.bound.push_back(b);
        rep.min_margin = std::min(rep.min_margin, b - wsq);
        if (i > 0 && int_phi[i] > 0 && wsq > 0 && rep.w0_sq > 0)
            rep.c_measured =
                std::max(rep.c_measured, std::log(wsq / rep.w0_sq) / int_phi[i]);
    }
    rep.pass =
        rep.min_margin >= -config.tolerances.gronwall_margin_rel * rep.w0_sq;
    rep.measured_within_derived = rep.c_measured <= rep.c_used;
    return rep;
}

ConvergenceTable convergence_study(const RunConfig& config,
                                   const std::vector<int>& cutoffs) {
    if (cutoffs.size() < 2)
        throw std::invalid_argument("convergence_study: need at least two cutoffs");
    ConvergenceTable table;

    std::vector<SpectralField> prev_states;
    int prev_cutoff = -1;
    for (int k : cutoffs) {
        std::vector<SpectralField> states;
        RunConfig cfg = config;
        cfg.cutoff = k;
        cfg.validate();
        const RunResult res =
            run(cfg, {[&states](const TrajectoryState& s) { states.push_back(s.u); }});
        if (res.status != RunResult::Status::ok)
            throw std::runtime_error("convergence_study: run at cutoff " +
                                     std::to_string(k) + " failed: " + res.diagnostic);
        if (!prev_states.empty()) {
            if (prev_states.size() != states.size())
                throw std::runtime_error("convergence_study: snapshot count mismatch");
            ConvergencePair pair;
            pair.k_coarse = prev_cutoff;
            pair.k_fine = k;
            for (size_t i = 0; i < states.size(); ++i) {
                const Real d = l2_norm(states[i] - resample(prev_states[i], k));
                pair.sup_diff = std::max(pair.sup_diff, d);
                if (i + 1 == states.size()) pair.final_diff = d;
            }
            table.pairs.push_back(pair);
        }
        prev_states = std::move(states);
        prev_cutoff = k;
    }
    table.monotone = true;
    for (size_t i = 0; i + 1 < table.pairs.size(); ++i) {
        const Real a = table.pairs[i].sup_diff;
        const Real b = table.pairs[i + 1].sup_diff;
        table.ratios.push_back(b > 0 ? a / b : std::numeric_limits<Real>::infinity());
        if (!(b < a)) table.monotone = false;
    }
    return table;
}

RegularityReport regularity_monitor(const EnergyLedger& ledger, Real nu,
                                    const std::vector<Real>& final_shell_energy,
                                    Real margin_rel_tol) {
    RegularityReport rep;
    rep.c3 = 1.0 / (2.0 * nu);
    if (ledger.empty()) {
        rep.pass = true;
        return rep;
    }
    const auto phi = [](const LedgerRow& r) { return r.sup_u * r.sup_u; };
    const std::vector<Real> int_phi = ledger.cumulative_trapezoid(phi);
    const Real up0_sq = std::pow(ledger.rows.front().uprime_l2, 2);
    rep.int_uprime_h1_sq = ledger.cumulative_trapezoid([](const LedgerRow& r) {
        return r.uprime_h1 * r.uprime_h1;
    }).back();

    rep.envelope_margin = std::numeric_limits<Real>::infinity();
    for (size_t i = 0; i < ledger.size(); ++i) {
        const LedgerRow& r = ledger.rows[i];
        rep.sup_uprime = std::max(rep.sup_uprime, r.uprime_l2);
        rep.sup_h2 = std::max(rep.sup_h2, r.h2);
        rep.sup_h3 = std::max(rep.sup_h3, r.h3);
        const Real envelope = up0_sq * std::exp(rep.c3 * int_phi[i]);
        rep.envelope_margin =
            std::min(rep.envelope_margin, envelope - r.uprime_l2 * r.uprime_l2);
    }

    // Spectral tail decay: least-squares slope of log shell energy over the
    // populated upper half of the spectrum.
    std::vector<std::pair<Real, Real>> pts;
    for (size_t s = final_shell_energy.size() / 2; s < final_shell_energy.size(); ++s)
        if (final_shell_energy[s] > 1e-280)
            pts.emplace_back(static_cast<Real>(s), std::log(final_shell_energy[s]));
    if (pts.size() >= 2) {
        Real sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const Real n = static_cast<Real>(pts.size());
        rep.decay_rate = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
    }

    rep.pass = rep.envelope_margin >= -margin_rel_tol * std::max(up0_sq, Real(0));
    return rep;
}

}  // namespace torusflow
