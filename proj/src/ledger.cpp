#include "torusflow/ledger.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace torusflow {

std::string format_double(Real x) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void EnergyLedger::validate() const {
    Real prev_t = -std::numeric_limits<Real>::infinity();
    for (const LedgerRow& r : rows) {
        for (Real v : {r.t, r.energy, r.energy_const, r.a_uu, r.f_dot_u, r.int_a_uu,
                       r.int_f_dot_u, r.uprime_l2, r.uprime_dual, r.uprime_h1, r.f_dual1, r.sup_u,
                       r.h1, r.h2, r.h3, r.div_residual, r.leray_correction})
            if (!std::isfinite(v)) throw std::runtime_error("ledger: non-finite entry");
        if (!(r.t > prev_t)) throw std::runtime_error("ledger: t not strictly increasing");
        prev_t = r.t;
    }
}

std::vector<Real> EnergyLedger::cumulative_trapezoid(
    const std::function<Real(const LedgerRow&)>& column) const {
    std::vector<Real> out(rows.size(), 0.0);
    for (size_t i = 1; i < rows.size(); ++i) {
        const Real dt = rows[i].t - rows[i - 1].t;
        out[i] = out[i - 1] + 0.5 * dt * (column(rows[i]) + column(rows[i - 1]));
    }
    return out;
}

std::string EnergyLedger::to_csv(const std::string& config_hash,
                                 const std::string& config_compact) const {
    std::string out;
    out += "# schema ";
    out += schema;
    out += "\n# config_hash ";
    out += config_hash;
    out += "\n";
    if (!config_compact.empty()) {
        out += "# config ";
        out += config_compact;
        out += "\n";
    }
    out +=
        "step,t,energy,energy_const,a_uu,f_dot_u,int_a_uu,int_f_dot_u,"
        "uprime_l2,uprime_dual,uprime_h1,f_dual1,sup_u,h1,h2,h3,div_residual,"
        "leray_correction\n";
    for (const LedgerRow& r : rows) {
        out += std::to_string(r.step);
        for (Real v : {r.t, r.energy, r.energy_const, r.a_uu, r.f_dot_u, r.int_a_uu,
                       r.int_f_dot_u, r.uprime_l2, r.uprime_dual, r.uprime_h1, r.f_dual1, r.sup_u,
                       r.h1, r.h2, r.h3, r.div_residual, r.leray_correction}) {
            out += ',';
            out += format_double(v);
        }
        out += '\n';
    }
    return out;
}

}  // namespace torusflow
