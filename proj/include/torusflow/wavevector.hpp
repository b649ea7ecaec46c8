#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "torusflow/types.hpp"

namespace torusflow {

/// Integer Fourier index on the periodic cube. The scaled frequency
/// kappa = 2*pi*k/l is derived on demand and never cached, so it cannot
/// go stale when a field is re-boxed.
struct WaveVector {
    int k1 = 0;
    int k2 = 0;
    int k3 = 0;

    Vec3 kappa(Real box_l) const {
        const Real c = 2.0 * pi / box_l;
        return Vec3(c * k1, c * k2, c * k3);
    }

    Real kappa_sq(Real box_l) const {
        const Real c = 2.0 * pi / box_l;
        return c * c * static_cast<Real>(sq());
    }

    int sq() const { return k1 * k1 + k2 * k2 + k3 * k3; }

    int inf_norm() const {
        return std::max({std::abs(k1), std::abs(k2), std::abs(k3)});
    }

    bool is_zero() const { return k1 == 0 && k2 == 0 && k3 == 0; }

    WaveVector operator-() const { return {-k1, -k2, -k3}; }

    friend bool operator==(const WaveVector&, const WaveVector&) = default;

    /// Lexicographic order on (k1,k2,k3); used for deterministic mode
    /// enumeration and basis tie-breaking.
    friend bool operator<(const WaveVector& a, const WaveVector& b) {
        if (a.k1 != b.k1) return a.k1 < b.k1;
        if (a.k2 != b.k2) return a.k2 < b.k2;
        return a.k3 < b.k3;
    }

    /// True for the canonical representative of the Hermitian pair {k,-k}:
    /// the first nonzero component is positive. k = 0 is not a representative.
    bool is_hermitian_representative() const {
        if (k1 != 0) return k1 > 0;
        if (k2 != 0) return k2 > 0;
        return k3 > 0;
    }
};

}  // namespace torusflow
