#pragma once

#include <vector>

#include "torusflow/spectral_field.hpp"
#include "torusflow/transform.hpp"

namespace torusflow {

/// Spectral partial derivative along axis 1..3: coeff'(k) = i*kappa_axis*coeff(k).
SpectralField derivative(const SpectralField& f, int axis);

/// Scalar divergence of a vector field.
SpectralField divergence(const SpectralField& f);

/// Vector gradient of a scalar field.
SpectralField gradient(const SpectralField& s);

/// L^2-orthogonal projection onto divergence-free fields: for k != 0 the
/// component parallel to kappa is removed; the k = 0 mode is unchanged.
SpectralField leray_project(const SpectralField& f);

/// (F, G) = l^3 * sum_k sum_d F(k,d) * conj(G(k,d)), real part.
Real l2_inner(const SpectralField& f, const SpectralField& g);
Real l2_norm_sq(const SpectralField& f);
Real l2_norm(const SpectralField& f);

/// Fourier-multiplier Sobolev norm sqrt(l^3 * sum (1+|kappa|^2)^s |coeff|^2).
/// s = 0 recovers the L^2 norm; negative s gives dual norms.
Real sobolev_norm(const SpectralField& f, Real s);

/// Quadrature L^p norm on the n^3 grid; p = infinity takes the max of the
/// pointwise Euclidean magnitude over nodes.
Real lp_norm(const SpectralField& f, Real p, int n);
Real lp_norm(const SpectralField& f, Real p);
Real sup_norm(const SpectralField& f);

/// max_k |kappa . coeff(k)|, the absolute divergence residual.
Real max_divergence(const SpectralField& f);
/// Divergence residual scaled by kappa_max * max_k |coeff(k)| (0 for zero field).
Real relative_divergence(const SpectralField& f);

/// Re-box a field to a different cutoff: high modes dropped, missing modes zero.
SpectralField resample(const SpectralField& f, int cutoff);

/// Energy per integer shell: out[s] = l^3 * sum_{round(|k|) == s} |coeff(k)|^2.
std::vector<Real> shell_energy(const SpectralField& f);

}  // namespace torusflow
