#pragma once

#include <optional>
#include <string>
#include <vector>

#include "torusflow/timestepper.hpp"

namespace torusflow {

/// Residual of the discrete energy identity
///   E(t) - E(0) + nu * int a(u,u) - int (f,u) = 0
/// evaluated with the stepper-accumulated companion integrals, so the
/// residual carries only the scheme's O(dt^4) error.
struct EnergyIdentityReport {
    std::vector<Real> residuals;  // one per ledger row
    Real max_residual = 0.0;
    Real max_energy = 0.0;
    Real normalized = 0.0;  // max_residual / max_energy (0 for a zero run)
    bool pass(Real rel_tol) const;
};

EnergyIdentityReport check_energy_identity(const EnergyLedger& ledger, Real nu);

/// A-priori energy certificate with explicit constants. Writes out and
/// checks, with y = |u|^2, D = a(u,u), g = (1 + c5^2/nu) ||f||_{V'1}^2,
/// c5^2 = 1 + (l/2pi)^2:
///   (i)   y(t) <= e^t (y(0) + int e^{-s} g ds)          [Gronwall closure]
///   (ii)  y(t) + nu int D <= y(0) + int g + int y       [integrated bound]
///   (iii) y1(t) <= e^t (y1(0) + int e^{-s} ||f||^2 ds)  [constant modes]
/// Dual pairings split k = 0 from k != 0: the constant modes pair in L^2
/// with constant 1, the rest through sqrt(D) with the explicit c5. Margins
/// are RHS - LHS minima over recorded times; time integrals are trapezoid
/// with an a-posteriori O(dt^2) allowance added to the tolerance.
struct EstimateICertificate {
    Real c5_sq = 0.0;
    Real margin_gronwall = 0.0;
    Real margin_integrated = 0.0;
    Real margin_const_modes = 0.0;
    Real sup_y_bound = 0.0;       // certified ceiling for sup |u|^2
    Real dissipation_bound = 0.0; // certified ceiling for nu int a(u,u)
    Real quad_allowance = 0.0;
    bool pass = false;
    std::string derivation;
};

EstimateICertificate check_estimate_I(const EnergyLedger& ledger, Real nu, Real box_l);

/// int_0^T ||u'||_{V'}^2 dt with the s = -3/2 multiplier norm (trapezoid).
struct EstimateIIReport {
    Real integral_dual_sq = 0.0;
    bool finite = false;
};

EstimateIIReport check_estimate_II(const EnergyLedger& ledger);

/// Twin-run separation bound. For w = u - u* under identical forcing,
///   |w(t)|^2 <= |w(0)|^2 exp(c int_0^t sup|u|^2 ds),  c = 1/(2 nu),
/// derived from |b(w,w,u)| <= sup|u| |w| sqrt(a(w,w)) and Young absorption
/// of the dissipation. c_measured is the smallest constant that certifies
/// the observed separation.
struct GronwallReport {
    std::vector<Real> times;
    std::vector<Real> w_sq;       // |w(t)|^2
    std::vector<Real> bound;      // B(t)
    Real w0_sq = 0.0;
    Real c_used = 0.0;
    Real c_measured = 0.0;
    Real min_margin = 0.0;  // min over t of B(t) - |w(t)|^2
    bool pass = false;               // derived-constant mode
    bool measured_within_derived = false;  // measure mode: c_measured <= c_used
    std::string derivation;
};

GronwallReport twin_run_gronwall(const RunConfig& config, const FieldSpec& perturbation,
                                 std::optional<Real> c_override = std::nullopt);

/// Mesh-refinement shadow of the Galerkin limit: the same data run at each
/// cutoff, successive trajectories compared in L^inf(0,T; L^2).
struct ConvergencePair {
    int k_coarse = 0;
    int k_fine = 0;
    Real sup_diff = 0.0;    // sup over logged times of ||u_K - u_2K||_L2
    Real final_diff = 0.0;  // at t = T
};

struct ConvergenceTable {
    std::vector<ConvergencePair> pairs;
    std::vector<Real> ratios;  // sup_diff[i] / sup_diff[i+1]
    bool monotone = false;
};

ConvergenceTable convergence_study(const RunConfig& config,
                                   const std::vector<int>& cutoffs);

/// Smoothness diagnostics over a completed run: sup |u'|, sup H^s norms,
/// the Gronwall envelope |u'(0)|^2 exp(c3 int sup|u|^2) for static forcing
/// (c3 = 1/(2 nu)), and the exponential decay rate of the energy spectrum
/// tail (least-squares fit of log shell energy vs shell index).
struct RegularityReport {
    Real sup_uprime = 0.0;
    Real int_uprime_h1_sq = 0.0;  // integral of ||u'||_H1^2 (u' in V, quantitatively)
    Real sup_h2 = 0.0;
    Real sup_h3 = 0.0;
    Real c3 = 0.0;
    Real envelope_margin = 0.0;  // min over t of envelope - |u'|^2
    Real decay_rate = 0.0;       // per-shell log-energy slope (>= 0: decaying)
    bool pass = false;
};

RegularityReport regularity_monitor(const EnergyLedger& ledger, Real nu,
                                    const std::vector<Real>& final_shell_energy,
                                    Real margin_rel_tol);

}  // namespace torusflow
