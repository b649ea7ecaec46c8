#pragma once

#include <functional>
#include <string>
#include <vector>

#include "torusflow/types.hpp"

namespace torusflow {

/// One accepted state of a run. Instantaneous quantities are evaluated at
/// the state itself; int_a_uu and int_f_dot_u are companion integrals of
/// a(u,u) and (f,u) accumulated with the stepper's own stage weights, so the
/// energy-identity residual carries only the scheme's O(dt^4) error rather
/// than an O(dt^2) quadrature term.
struct LedgerRow {
    long step = 0;
    Real t = 0;
    Real energy = 0;            // E = |u|^2 / 2
    Real energy_const = 0;      // k = 0 part of E
    Real a_uu = 0;              // a(u,u)
    Real f_dot_u = 0;           // (f, u)
    Real int_a_uu = 0;          // integral of a(u,u) over [0,t]
    Real int_f_dot_u = 0;       // integral of (f,u) over [0,t]
    Real uprime_l2 = 0;         // |u'|
    Real uprime_dual = 0;       // ||u'|| with the s = -3/2 multiplier
    Real uprime_h1 = 0;         // ||u'||_H1
    Real f_dual1 = 0;           // ||f|| with the s = -1 multiplier
    Real sup_u = 0;             // ||u||_Linf
    Real h1 = 0;                // ||u||_H1
    Real h2 = 0;                // ||u||_H2
    Real h3 = 0;                // ||u||_H3
    Real div_residual = 0;      // relative divergence after the step
    Real leray_correction = 0;  // relative size of the re-projection guard
};

struct EnergyLedger {
    static constexpr const char* schema = "torusflow-ledger-v1";

    std::vector<LedgerRow> rows;

    bool empty() const { return rows.empty(); }
    size_t size() const { return rows.size(); }

    /// All entries finite, t strictly increasing; throws otherwise.
    void validate() const;

    /// Cumulative trapezoid integral of a column over the recorded times.
    std::vector<Real> cumulative_trapezoid(
        const std::function<Real(const LedgerRow&)>& column) const;

    /// Deterministic CSV (shortest round-trip decimals). Header lines carry
    /// the schema version, the resolved-config hash, and (when given) the
    /// resolved config itself as one compact JSON line.
    std::string to_csv(const std::string& config_hash,
                       const std::string& config_compact = "") const;
};

/// Shortest decimal form that parses back to the same double.
std::string format_double(Real x);

}  // namespace torusflow
