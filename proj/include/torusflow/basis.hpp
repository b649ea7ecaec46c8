#pragma once

#include <vector>

#include "torusflow/spectral_field.hpp"

namespace torusflow {

/// One solenoidal eigenmode of the H^{3/2} spectral problem on the torus.
/// k = 0 carries a coordinate unit vector (the three constant modes,
/// eigenvalue 1); k != 0 carries a real unit polarization orthogonal to
/// kappa, and the mode is the Hermitian pair {k, -k} taken together.
struct BasisMode {
    int index = 0;  // 1-based position in eigenvalue order
    WaveVector k;
    Vec3 polarization = Vec3::Zero();
    Real eigenvalue = 1.0;
};

struct GalerkinBasis {
    int cutoff = 0;
    Real box_l = 1.0;
    std::vector<BasisMode> modes;

    int size() const { return static_cast<int>(modes.size()); }
};

/// Enumerate all solenoidal modes with |k_i| <= cutoff, ordered by eigenvalue
/// (1+|kappa|^2)^{3/2} ascending, ties broken lexicographically by
/// (k1,k2,k3, polarization id). Modes 1..3 are the constant modes. Count is
/// 3 + 2 * (number of Hermitian representatives).
GalerkinBasis build_basis(int cutoff, Real box_l);

/// The j-th mode (1-based) as a unit-L^2-norm spectral field.
SpectralField mode_field(const GalerkinBasis& basis, int j);

/// L^2-orthogonal projection onto the span of modes 1..m. The complex
/// amplitude along each Hermitian-paired mode is retained, so the image is
/// the full real span of the prefix.
SpectralField basis_project(const SpectralField& f, const GalerkinBasis& basis, int m);

}  // namespace torusflow
