#include "torusflow/spectral_field.hpp"

namespace torusflow {

Real SpectralField::hermitian_defect() const {
    Real worst = 0.0;
    for (Eigen::Index i = 0; i < mode_count(); ++i) {
        const WaveVector k = wavevector(i);
        const Eigen::Index j = flat_index(-k);
        for (int c = 0; c < components(); ++c)
            worst = std::max(worst, std::abs(coeffs_(i, c) - std::conj(coeffs_(j, c))));
    }
    return worst;
}

void SpectralField::symmetrize() {
    for (Eigen::Index i = 0; i < mode_count(); ++i) {
        const WaveVector k = wavevector(i);
        if (k.is_zero()) {
            for (int c = 0; c < components(); ++c)
                coeffs_(i, c) = Complex(coeffs_(i, c).real(), 0.0);
            continue;
        }
        if (!k.is_hermitian_representative()) continue;
        const Eigen::Index j = flat_index(-k);
        for (int c = 0; c < components(); ++c) {
            const Complex avg = Real(0.5) * (coeffs_(i, c) + std::conj(coeffs_(j, c)));
            coeffs_(i, c) = avg;
            coeffs_(j, c) = std::conj(avg);
        }
    }
}

RealVector mode_kappa_sq(int cutoff, Real box_l) {
    const Eigen::Index m = 2 * static_cast<Eigen::Index>(cutoff) + 1;
    const Real c = 2.0 * pi / box_l;
    RealVector out(m * m * m);
    Eigen::Index flat = 0;
    for (Eigen::Index i1 = 0; i1 < m; ++i1) {
        const Real a = c * static_cast<Real>(i1 - cutoff);
        for (Eigen::Index i2 = 0; i2 < m; ++i2) {
            const Real b = c * static_cast<Real>(i2 - cutoff);
            for (Eigen::Index i3 = 0; i3 < m; ++i3, ++flat) {
                const Real d = c * static_cast<Real>(i3 - cutoff);
                out(flat) = a * a + b * b + d * d;
            }
        }
    }
    return out;
}

}  // namespace torusflow
