#include "torusflow/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace torusflow {

namespace {

// Two real unit polarizations orthogonal to kappa, built from the smallest
// coordinate axis not parallel to k (cross-product Gram-Schmidt).
std::array<Vec3, 2> polarization_pair(const WaveVector& k, Real box_l) {
    const Vec3 khat = k.kappa(box_l).normalized();
    int axis = 0;
    for (; axis < 3; ++axis) {
        Vec3 e = Vec3::Zero();
        e(axis) = 1.0;
        if (khat.cross(e).norm() > 1e-12) break;
    }
    Vec3 e = Vec3::Zero();
    e(axis) = 1.0;
    const Vec3 p1 = khat.cross(e).normalized();
    const Vec3 p2 = khat.cross(p1);
    return {p1, p2};
}

}  // namespace

GalerkinBasis build_basis(int cutoff, Real box_l) {
    if (cutoff < 0) throw std::invalid_argument("build_basis: cutoff must be >= 0");
    if (!(box_l > 0)) throw std::invalid_argument("build_basis: box_l must be > 0");

    struct Entry {
        WaveVector k;
        int pol_id;
        Vec3 pol;
        Real eigenvalue;
    };
    std::vector<Entry> entries;

    for (int axis = 0; axis < 3; ++axis) {
        Vec3 e = Vec3::Zero();
        e(axis) = 1.0;
        entries.push_back({WaveVector{0, 0, 0}, axis, e, 1.0});
    }
    for (int k1 = -cutoff; k1 <= cutoff; ++k1)
        for (int k2 = -cutoff; k2 <= cutoff; ++k2)
            for (int k3 = -cutoff; k3 <= cutoff; ++k3) {
                const WaveVector k{k1, k2, k3};
                if (!k.is_hermitian_representative()) continue;
                const Real lambda = std::pow(1.0 + k.kappa_sq(box_l), 1.5);
                const auto pols = polarization_pair(k, box_l);
                entries.push_back({k, 0, pols[0], lambda});
                entries.push_back({k, 1, pols[1], lambda});
            }

    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.eigenvalue != b.eigenvalue) return a.eigenvalue < b.eigenvalue;
        if (!(a.k == b.k)) return a.k < b.k;
        return a.pol_id < b.pol_id;
    });

    GalerkinBasis basis;
    basis.cutoff = cutoff;
    basis.box_l = box_l;
    basis.modes.reserve(entries.size());
    int index = 1;
    for (const Entry& e : entries)
        basis.modes.push_back({index++, e.k, e.pol, e.eigenvalue});
    return basis;
}

SpectralField mode_field(const GalerkinBasis& basis, int j) {
    if (j < 1 || j > basis.size())
        throw std::invalid_argument("mode_field: index out of range");
    const BasisMode& mode = basis.modes[static_cast<size_t>(j - 1)];
    SpectralField f(basis.cutoff, 3, basis.box_l);
    const Real vol = basis.box_l * basis.box_l * basis.box_l;
    if (mode.k.is_zero()) {
        // Constant mode: coefficient e_j / sqrt(l^3) gives unit L^2 norm.
        const Real c = 1.0 / std::sqrt(vol);
        f.set_coeff3(mode.k, (c * mode.polarization).cast<Complex>());
    } else {
        // Hermitian pair carries the L^2 mass twice: 2 |c|^2 l^3 = 1.
        const Real c = 1.0 / std::sqrt(2.0 * vol);
        f.set_coeff3(mode.k, (c * mode.polarization).cast<Complex>());
        f.set_coeff3(-mode.k, (c * mode.polarization).cast<Complex>());
    }
    return f;
}

SpectralField basis_project(const SpectralField& f, const GalerkinBasis& basis, int m) {
    if (!f.is_vector()) throw std::invalid_argument("basis_project: vector field required");
    if (m < 0 || m > basis.size())
        throw std::invalid_argument("basis_project: prefix length exceeds basis size");
    if (f.cutoff() != basis.cutoff || f.box_l() != basis.box_l)
        throw std::invalid_argument("basis_project: field/basis mismatch");

    SpectralField out(f.cutoff(), 3, f.box_l());
    for (int j = 0; j < m; ++j) {
        const BasisMode& mode = basis.modes[static_cast<size_t>(j)];
        const Vec3c pol = mode.polarization.cast<Complex>();
        const Eigen::Index i = f.flat_index(mode.k);
        Complex amp = 0.0;
        for (int c = 0; c < 3; ++c) amp += std::conj(pol(c)) * f.coeffs()(i, c);
        for (int c = 0; c < 3; ++c) out.coeffs()(i, c) += amp * pol(c);
        if (!mode.k.is_zero()) {
            const Eigen::Index ineg = f.flat_index(-mode.k);
            for (int c = 0; c < 3; ++c)
                out.coeffs()(ineg, c) += std::conj(amp * pol(c));
        }
    }
    return out;
}

}  // namespace torusflow
