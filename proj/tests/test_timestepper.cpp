#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "torusflow/monitors.hpp"
#include "torusflow/timestepper.hpp"

using namespace torusflow;

namespace {
constexpr Real two_pi = 2.0 * pi;

RunConfig taylor_green_config(Real dt, Real horizon, int cutoff, Scheme scheme) {
    RunConfig c;
    c.box_l = two_pi;
    c.viscosity = 1.0;
    c.dt = dt;
    c.horizon = horizon;
    c.cutoff = cutoff;
    c.scheme = scheme;
    c.ic.family = "taylor_green";
    c.forcing.family = "zero";
    c.validate();
    return c;
}

// Exact Taylor-Green L2 error, max over the logged trajectory.
Real tg_max_rel_error(const RunConfig& cfg) {
    const SpectralField u0 = realize_field(cfg.ic, cfg.cutoff, cfg.box_l);
    Real worst = 0.0;
    const auto monitor = [&](const TrajectoryState& s) {
        const SpectralField exact = std::exp(-2.0 * cfg.viscosity * s.t) * u0;
        worst = std::max(worst, l2_norm(s.u - exact) / l2_norm(exact));
    };
    const RunResult res = run(cfg, {monitor});
    REQUIRE(res.status == RunResult::Status::ok);
    return worst;
}
}  // namespace

TEST_CASE("zero data stays identically zero under both schemes") {
    for (Scheme scheme : {Scheme::rk4, Scheme::ifrk4}) {
        RunConfig c;
        c.box_l = two_pi;
        c.dt = 1e-2;
        c.horizon = 0.1;
        c.cutoff = 2;
        c.scheme = scheme;
        c.ic.family = "zero";
        c.forcing.family = "zero";
        c.validate();
        const RunResult res = run(c);
        CHECK(res.status == RunResult::Status::ok);
        CHECK(res.final_state.u.coeffs().cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("linear regime: single-mode viscous decay") {
    // One step on u' = -nu A u with the nonlinearity disabled.
    const Real nu = 0.8;
    const Real dt = 0.05;
    SpectralField u0(2, 3, two_pi);
    u0.set_coeff({1, 1, 0}, 2, Complex(0.4, -0.2));
    u0.set_coeff({-1, -1, 0}, 2, Complex(0.4, 0.2));
    const Real ksq = 2.0;  // |kappa|^2 for (1,1,0) at l = 2 pi

    TrajectoryState s;
    s.u = u0;
    FieldSpec zero;
    const ForcingSampler f(zero, 2, two_pi);

    SUBCASE("rk4 relative error below (dt nu |kappa|^2)^5") {
        const TrajectoryState next = step_rk4(s, dt, f, nu, false);
        const Real exact = std::exp(-nu * ksq * dt);
        const Real got = std::abs(next.u.coeff({1, 1, 0}, 2)) / std::abs(u0.coeff({1, 1, 0}, 2));
        CHECK(std::abs(got - exact) / exact <= std::pow(dt * nu * ksq, 5));
    }
    SUBCASE("ifrk4 is exact to machine precision") {
        const TrajectoryState next = step_ifrk4(s, dt, f, nu, false);
        const Complex exact = u0.coeff({1, 1, 0}, 2) * std::exp(-nu * ksq * dt);
        CHECK(std::abs(next.u.coeff({1, 1, 0}, 2) - exact) <= 1e-16);
    }
}

TEST_CASE("Taylor-Green decay: 500 steps of dt = 1e-3 within 1e-10") {
    for (Scheme scheme : {Scheme::rk4, Scheme::ifrk4}) {
        const RunConfig cfg = taylor_green_config(1e-3, 0.5, 4, scheme);
        CHECK(tg_max_rel_error(cfg) <= 1e-10);
    }
}

TEST_CASE("rk4 order: halving dt cuts the Taylor-Green error by ~16") {
    const Real e1 = tg_max_rel_error(taylor_green_config(0.02, 0.5, 2, Scheme::rk4));
    const Real e2 = tg_max_rel_error(taylor_green_config(0.01, 0.5, 2, Scheme::rk4));
    const Real ratio = e1 / e2;
    CHECK(ratio >= 16.0 * 0.8);
    CHECK(ratio <= 16.0 * 1.2);
}

TEST_CASE("schemes agree to O(dt^4) on a nonlinear run") {
    RunConfig c;
    c.box_l = two_pi;
    c.viscosity = 0.1;
    c.dt = 1e-3;
    c.horizon = 0.1;
    c.cutoff = 3;
    c.ic.family = "random_band";
    c.ic.amplitude = 0.5;
    c.ic.k_min = 1;
    c.ic.k_max = 3;
    c.ic.seed = 9;
    c.forcing.family = "zero";
    c.scheme = Scheme::rk4;
    c.validate();
    const RunResult a = run(c);
    c.scheme = Scheme::ifrk4;
    const RunResult b = run(c);
    REQUIRE(a.status == RunResult::Status::ok);
    REQUIRE(b.status == RunResult::Status::ok);
    CHECK(l2_norm(a.final_state.u - b.final_state.u) <= 1e-10 * l2_norm(a.final_state.u));
}

TEST_CASE("initial_state: projection and Parseval bookkeeping") {
    const SpectralField sol = oracle::random_solenoidal(3, 3, two_pi);
    SUBCASE("solenoidal band-limited data is unchanged") {
        const InitReport rep = initial_state(sol, 3);
        CHECK((rep.state.u.coeffs() - sol.coeffs()).cwiseAbs().maxCoeff() <=
              1e-14 * sol.coeffs().cwiseAbs().maxCoeff());
        CHECK(rep.dropped_energy <= 1e-12 * l2_norm_sq(sol));
    }
    SUBCASE("gradient parts are removed and measured") {
        const SpectralField grad = gradient(oracle::random_field(4, 3, two_pi, 1));
        const SpectralField mixed = sol + grad;
        const InitReport rep = initial_state(mixed, 3);
        CHECK(l2_norm(rep.state.u) <= l2_norm(mixed) * (1 + 1e-13));
        CHECK(rep.gradient_energy ==
              doctest::Approx(l2_norm_sq(mixed) - l2_norm_sq(sol)).epsilon(1e-10));
    }
    SUBCASE("truncation energy equals the out-of-band Parseval mass") {
        const SpectralField wide = oracle::random_solenoidal(5, 4, two_pi);
        const InitReport rep = initial_state(wide, 2);
        CHECK(rep.dropped_energy ==
              doctest::Approx(l2_norm_sq(wide) - l2_norm_sq(resample(wide, 2)))
                  .epsilon(1e-12));
    }
}

TEST_CASE("run: T = 0 returns the initial state with an empty ledger") {
    RunConfig c;
    c.box_l = two_pi;
    c.horizon = 0.0;
    c.dt = 1e-2;
    c.cutoff = 2;
    c.ic.family = "taylor_green";
    c.forcing.family = "zero";
    c.validate();
    const RunResult res = run(c);
    CHECK(res.status == RunResult::Status::ok);
    CHECK(res.ledger.empty());
    CHECK(res.final_state.t == 0.0);
    const SpectralField u0 = realize_field(c.ic, 2, two_pi);
    CHECK((res.final_state.u.coeffs() - u0.coeffs()).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("run: deterministic replay produces byte-identical ledgers") {
    RunConfig c;
    c.box_l = two_pi;
    c.viscosity = 0.2;
    c.dt = 2e-3;
    c.horizon = 0.05;
    c.cutoff = 3;
    c.ic.family = "random_band";
    c.ic.seed = 77;
    c.ic.k_max = 3;
    c.ic.amplitude = 0.4;
    c.forcing.family = "random_band";
    c.forcing.seed = 78;
    c.forcing.k_max = 2;
    c.forcing.amplitude = 0.1;
    c.validate();
    const RunResult a = run(c);
    const RunResult b = run(c);
    REQUIRE(a.status == RunResult::Status::ok);
    CHECK(a.ledger.to_csv(config_hash(c)) == b.ledger.to_csv(config_hash(c)));
}

TEST_CASE("run: unforced energy is nonincreasing") {
    RunConfig c;
    c.box_l = two_pi;
    c.viscosity = 0.05;
    c.dt = 2e-3;
    c.horizon = 0.2;
    c.cutoff = 3;
    c.scheme = Scheme::ifrk4;
    c.ic.family = "random_band";
    c.ic.seed = 15;
    c.ic.k_max = 3;
    c.ic.amplitude = 0.6;
    c.forcing.family = "zero";
    c.validate();
    const RunResult res = run(c);
    REQUIRE(res.status == RunResult::Status::ok);
    for (size_t i = 1; i < res.ledger.size(); ++i)
        CHECK(res.ledger.rows[i].energy <=
              res.ledger.rows[i - 1].energy * (1 + 1e-12));
}

TEST_CASE("run: k = 0 coefficients are frozen when the forcing mean vanishes") {
    RunConfig c;
    c.box_l = two_pi;
    c.viscosity = 0.1;
    c.dt = 1e-3;
    c.horizon = 0.1;
    c.cutoff = 3;
    c.ic.family = "constant_mode";
    c.ic.vector = Vec3(0.2, -0.1, 0.05);
    c.forcing.family = "random_band";  // k >= 1 only: zero-mean forcing
    c.forcing.seed = 4;
    c.forcing.k_max = 2;
    c.forcing.amplitude = 0.3;
    c.validate();
    const SpectralField u0 = realize_field(c.ic, c.cutoff, c.box_l);
    const Vec3c mean0 = u0.coeff3({0, 0, 0});
    const RunResult res = run(c);
    REQUIRE(res.status == RunResult::Status::ok);
    const Vec3c mean_t = res.final_state.u.coeff3({0, 0, 0});
    CHECK((mean_t - mean0).cwiseAbs().maxCoeff() <= 1e-13 * mean0.cwiseAbs().maxCoeff());
}

TEST_CASE("cutoff 0: the constant-mode system integrates the forcing exactly") {
    // At K = 0 the stiffness and advection vanish identically, so
    // u(t) = u0 + t * f(0); RK4 reproduces a linear-in-t solution exactly.
    RunConfig c;
    c.box_l = 2.0;
    c.viscosity = 1.0;
    c.dt = 0.01;
    c.horizon = 0.5;
    c.cutoff = 0;
    c.scheme = Scheme::rk4;
    c.tolerances.cfl_advective = 1e9;  // dx/|u| is meaningless with one mode
    c.ic.family = "constant_mode";
    c.ic.vector = Vec3(0.1, -0.2, 0.3);
    c.forcing.family = "constant_mode";
    c.forcing.vector = Vec3(1.0, 2.0, -1.0);
    c.validate();
    const RunResult res = run(c);
    REQUIRE(res.status == RunResult::Status::ok);
    const Vec3c got = res.final_state.u.coeff3({0, 0, 0});
    const Vec3 expect = c.ic.vector + c.horizon * c.forcing.vector;
    for (int i = 0; i < 3; ++i)
        CHECK(got(i).real() == doctest::Approx(expect(i)).epsilon(1e-14));
    // Energy identity holds on the pure k = 0 system too.
    const EnergyIdentityReport rep = check_energy_identity(res.ledger, c.viscosity);
    CHECK(rep.normalized <= 1e-12);
}

TEST_CASE("solenoidality is preserved at every accepted step") {
    RunConfig c;
    c.box_l = two_pi;
    c.viscosity = 0.1;
    c.dt = 1e-3;
    c.horizon = 0.05;
    c.cutoff = 3;
    c.ic.family = "abc_flow";
    c.ic.amplitude = 0.5;
    c.forcing.family = "zero";
    c.validate();
    const RunResult res = run(c);
    REQUIRE(res.status == RunResult::Status::ok);
    for (const LedgerRow& r : res.ledger.rows) {
        CHECK(r.div_residual <= c.tolerances.solenoidal_rel);
        CHECK(r.leray_correction <= c.tolerances.solenoidal_rel);
    }
}

TEST_CASE("viscous CFL guard rejects unstable rk4 configs at validation") {
    RunConfig c;
    c.box_l = two_pi;
    c.viscosity = 1.0;
    c.dt = 0.05;  // dt nu kappa_max^2 = 0.05 * 3 * 16 = 2.4 < 2.5 passes at K=4...
    c.cutoff = 8;  // ...but 9.6 at K = 8 must be rejected
    c.scheme = Scheme::rk4;
    c.ic.family = "zero";
    c.forcing.family = "zero";
    CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("viscous CFL guard"),
                         ConfigError);
    c.scheme = Scheme::ifrk4;  // integrating factor lifts the restriction
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("advective CFL guard aborts the run with a named diagnostic") {
    RunConfig c;
    c.box_l = two_pi;
    c.viscosity = 0.01;
    c.dt = 0.5;
    c.horizon = 1.0;
    c.cutoff = 3;
    c.scheme = Scheme::ifrk4;
    c.ic.family = "constant_mode";
    c.ic.vector = Vec3(5.0, 0.0, 0.0);  // dx/|u| = (2pi/11)/5 ~ 0.11 << dt
    c.forcing.family = "zero";
    c.validate();
    const RunResult res = run(c);
    CHECK(res.status == RunResult::Status::guard_violation);
    CHECK(res.diagnostic.find("advective CFL") != std::string::npos);
    CHECK(res.ledger.size() == 1);  // the initial row was still flushed
}

TEST_CASE("instability is reported as NonFinite with a partial ledger") {
    RunConfig c;
    c.box_l = two_pi;
    c.viscosity = 1.0;
    c.dt = 0.5;  // z = dt nu kappa_max^2 = 6: far outside rk4 stability
    c.horizon = 200.0;
    c.cutoff = 2;
    c.scheme = Scheme::rk4;
    c.tolerances.cfl_viscous = 100.0;   // deliberately disarm the guards
    c.tolerances.cfl_advective = 1e12;
    c.tolerances.solenoidal_rel = 1e12;
    c.ic.family = "random_band";
    c.ic.seed = 2;
    c.ic.k_max = 2;
    c.ic.amplitude = 1e-2;
    c.forcing.family = "zero";
    c.validate();
    const RunResult res = run(c);
    CHECK(res.status == RunResult::Status::nonfinite);
    CHECK(res.ledger.size() >= 1);
    CHECK(res.ledger.size() < static_cast<size_t>(c.n_steps()) + 1);
}
