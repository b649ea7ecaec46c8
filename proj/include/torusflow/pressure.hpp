#pragma once

#include <string>
#include <vector>

#include "torusflow/fields.hpp"
#include "torusflow/galerkin.hpp"

namespace torusflow {

/// Scalar pressure with the prescribed mean: integral over the box is q0
/// exactly (the k = 0 coefficient is q0 / l^3).
struct PressureField {
    SpectralField p;  // scalar, cutoff 2K for a velocity of cutoff K
    Real q0 = 0.0;
};

/// Recover p from the momentum balance by the spectral Poisson solve
///   -|kappa|^2 p(k) = i kappa . (f - (u.grad)u)(k),   k != 0,
/// (time derivative and Laplacian are divergence-free and drop out). The
/// convective term is evaluated alias-free up to cutoff 2K, so the pressure
/// carries cutoff 2K. No time differencing is involved.
PressureField recover_pressure(const SpectralField& u, const SpectralField& f, Real nu,
                               Real q0);

struct PressureResiduals {
    /// || |kappa|^2 p + i kappa.(f - g_raw) || relative: the Poisson identity.
    Real poisson_rel = 0.0;
    /// || grad p - (f - u' + nu Lap u - (u.grad)u) || over modes inside the
    /// velocity cutoff (identically balanced by construction), relative.
    Real gradient_rel = 0.0;
    /// Solenoidal content of f - (u.grad)u beyond the velocity cutoff: the
    /// part the Galerkin dynamics cannot balance (diagnostic, not an error).
    Real unresolved_rel = 0.0;
};

PressureResiduals pressure_residuals(const PressureField& pf, const SpectralField& u,
                                     const SpectralField& f, Real nu);

/// Periodicity/compatibility conditions on the data: face jumps of
/// f_i(.,0) + d^2 u0_i / dx_k^2 for k != i, and the double jumps of f_i
/// across pairs of faces at each requested time. Trigonometric-polynomial
/// data gives zero jumps; nonzero values flag non-periodic inputs.
struct CompatibilityReport {
    struct Condition {
        std::string name;
        Real max_jump = 0.0;
    };
    std::vector<Condition> conditions;
    Real max_jump = 0.0;
    Real tolerance = 0.0;  // compat_jump_rel * sup|f| (absolute)
    bool pass = false;
};

CompatibilityReport check_compatibility(const FieldSpec& forcing,
                                        const SpectralField& u0,
                                        const std::vector<Real>& times,
                                        Real jump_rel_tol);

}  // namespace torusflow
