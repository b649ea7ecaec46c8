#pragma once

#include "torusflow/spectral_field.hpp"

namespace torusflow {

/// Point values of a real field on the uniform N^3 collocation grid
/// x_j = j*l/N, j = 0..N-1 per axis. Layout matches SpectralField:
/// flat index (j1*N + j2)*N + j3, one column per component.
struct PhysicalGrid {
    int n = 0;
    Real box_l = 1.0;
    ValueArray values;

    int components() const { return static_cast<int>(values.cols()); }
    Eigen::Index node_count() const { return values.rows(); }

    Eigen::Index flat_index(int j1, int j2, int j3) const {
        return (static_cast<Eigen::Index>(j1) * n + j2) * n + j3;
    }
    Vec3 node(int j1, int j2, int j3) const {
        const Real h = box_l / n;
        return Vec3(h * j1, h * j2, h * j3);
    }
    Real cell_volume() const {
        const Real h = box_l / n;
        return h * h * h;
    }
};

/// Default quadrature grid for plain evaluation and Lp norms: 2(K+1).
int default_grid(int cutoff);

/// Grid for products of two cutoff-K fields (3/2-size padding, the 2/3-rule
/// equivalent): quadrature of anything band-limited to 3K is exact.
int dealiased_grid(int cutoff);

/// Evaluate on the N^3 grid by partial summation (exact trigonometric
/// interpolation). Requires n >= 2K+1; the imaginary residue of the
/// synthesis must stay below 1e-12 of the field scale (Hermitian input),
/// otherwise throws.
PhysicalGrid to_physical(const SpectralField& f, int n);
PhysicalGrid to_physical(const SpectralField& f);

/// Forward discrete transform truncated to |k_i| <= cutoff. Exact inverse
/// of to_physical on band-limited data when n >= 2*cutoff+1 (required).
SpectralField from_physical(const PhysicalGrid& g, int cutoff);

/// Direct evaluation of the mode sum at one point (real part; used for
/// face sampling in the compatibility checker).
RealVector eval_at(const SpectralField& f, const Vec3& x);

}  // namespace torusflow
