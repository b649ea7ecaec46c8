#pragma once

#include "torusflow/operators.hpp"

namespace torusflow {

/// a(u,v) = sum_ij integral du_j/dx_i dv_j/dx_i = l^3 sum_k |kappa|^2 u.conj(v).
/// Symmetric, positive semidefinite; the k = 0 modes contribute nothing.
Real grad_inner(const SpectralField& u, const SpectralField& v);

/// The stiffness operator behind a(.,.): coeff'(k) = |kappa|^2 coeff(k)
/// (spectral -Laplacian; diagonal, commutes with the Leray projection).
SpectralField neg_laplacian(const SpectralField& u);

/// b(u,v,w) = sum_ik integral u_k (d_k v_i) w_i, evaluated pseudo-spectrally:
/// v differentiated spectrally, the triple product formed pointwise on the
/// quadrature grid. With dealias set the grid is padded so the quadrature is
/// exact (the result equals the truncated-convolution value).
Real advection_form(const SpectralField& u, const SpectralField& v,
                    const SpectralField& w, bool dealias = true);

/// (u.grad)u transformed back to the requested cutoff, unprojected. The grid
/// is chosen so coefficients up to out_cutoff are alias-free when dealias is
/// set (n >= u.K + out_cutoff + 1).
SpectralField advection_term_raw(const SpectralField& u, int out_cutoff,
                                 bool dealias = true);

/// g(u) = Leray projection of (u.grad)u at the cutoff of u. Satisfies
/// (g(u), v) = b(u,u,v) for band-limited solenoidal v, and (g(u), u) = 0.
SpectralField advection_term(const SpectralField& u, bool dealias = true);

/// Right-hand side of the Galerkin system:
///   u' = -nu * (-Laplacian u) - g(u) + P(truncate(f)).
/// The forcing may carry any cutoff; it is re-boxed and Leray-projected here.
/// Output is solenoidal for solenoidal u. nonlinear = false drops g(u)
/// (heat-equation regime for diagnostics).
SpectralField galerkin_rhs(const SpectralField& u, const SpectralField& f, Real nu,
                           bool nonlinear = true);

}  // namespace torusflow
