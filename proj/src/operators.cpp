#include "torusflow/operators.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace torusflow {

namespace {

// i*kappa_axis as a flat multiplier vector in field layout order.
ComplexVector axis_multiplier(int cutoff, Real box_l, int axis) {
    const Eigen::Index m = 2 * static_cast<Eigen::Index>(cutoff) + 1;
    const Real c = 2.0 * pi / box_l;
    ComplexVector out(m * m * m);
    Eigen::Index flat = 0;
    for (Eigen::Index i1 = 0; i1 < m; ++i1)
        for (Eigen::Index i2 = 0; i2 < m; ++i2)
            for (Eigen::Index i3 = 0; i3 < m; ++i3, ++flat) {
                const Eigen::Index i = axis == 1 ? i1 : (axis == 2 ? i2 : i3);
                out(flat) = Complex(0.0, c * static_cast<Real>(i - cutoff));
            }
    return out;
}

}  // namespace

SpectralField derivative(const SpectralField& f, int axis) {
    if (axis < 1 || axis > 3) throw std::invalid_argument("derivative: axis must be 1..3");
    SpectralField out = f;
    const ComplexVector mult = axis_multiplier(f.cutoff(), f.box_l(), axis);
    for (int c = 0; c < f.components(); ++c)
        out.coeffs().col(c).array() *= mult.array();
    return out;
}

SpectralField divergence(const SpectralField& f) {
    if (!f.is_vector()) throw std::invalid_argument("divergence: vector field required");
    SpectralField out(f.cutoff(), 1, f.box_l());
    for (int axis = 1; axis <= 3; ++axis) {
        const ComplexVector mult = axis_multiplier(f.cutoff(), f.box_l(), axis);
        out.coeffs().col(0).array() += mult.array() * f.coeffs().col(axis - 1).array();
    }
    return out;
}

SpectralField gradient(const SpectralField& s) {
    if (s.is_vector()) throw std::invalid_argument("gradient: scalar field required");
    SpectralField out(s.cutoff(), 3, s.box_l());
    for (int axis = 1; axis <= 3; ++axis) {
        const ComplexVector mult = axis_multiplier(s.cutoff(), s.box_l(), axis);
        out.coeffs().col(axis - 1).array() = mult.array() * s.coeffs().col(0).array();
    }
    return out;
}

SpectralField leray_project(const SpectralField& f) {
    if (!f.is_vector()) throw std::invalid_argument("leray_project: vector field required");
    SpectralField out = f;
    for (Eigen::Index i = 0; i < f.mode_count(); ++i) {
        const WaveVector k = f.wavevector(i);
        if (k.is_zero()) continue;
        const Vec3 kappa = k.kappa(f.box_l());
        const Complex dot = kappa(0) * f.coeffs()(i, 0) + kappa(1) * f.coeffs()(i, 1) +
                            kappa(2) * f.coeffs()(i, 2);
        const Complex scale = dot / kappa.squaredNorm();
        out.coeffs()(i, 0) -= kappa(0) * scale;
        out.coeffs()(i, 1) -= kappa(1) * scale;
        out.coeffs()(i, 2) -= kappa(2) * scale;
    }
    return out;
}

Real l2_inner(const SpectralField& f, const SpectralField& g) {
    if (!f.same_shape(g)) throw std::invalid_argument("l2_inner: shape mismatch");
    const Real vol = f.box_l() * f.box_l() * f.box_l();
    const Complex s = (f.coeffs().array() * g.coeffs().array().conjugate()).sum();
    return vol * s.real();
}

Real l2_norm_sq(const SpectralField& f) {
    const Real vol = f.box_l() * f.box_l() * f.box_l();
    return vol * f.coeffs().array().abs2().sum();
}

Real l2_norm(const SpectralField& f) { return std::sqrt(l2_norm_sq(f)); }

Real sobolev_norm(const SpectralField& f, Real s) {
    const Real vol = f.box_l() * f.box_l() * f.box_l();
    const RealVector ksq = mode_kappa_sq(f.cutoff(), f.box_l());
    Real acc = 0.0;
    for (int c = 0; c < f.components(); ++c)
        acc += (f.coeffs().col(c).array().abs2() * (1.0 + ksq.array()).pow(s)).sum();
    return std::sqrt(vol * acc);
}

Real lp_norm(const SpectralField& f, Real p, int n) {
    const PhysicalGrid g = to_physical(f, n);
    const RealVector mag = g.values.rowwise().norm();
    if (std::isinf(p)) return mag.maxCoeff();
    if (!(p > 0)) throw std::invalid_argument("lp_norm: p must be positive or inf");
    const Real sum = mag.array().pow(p).sum() * g.cell_volume();
    return std::pow(sum, 1.0 / p);
}

Real lp_norm(const SpectralField& f, Real p) {
    return lp_norm(f, p, default_grid(f.cutoff()));
}

Real sup_norm(const SpectralField& f) {
    return lp_norm(f, std::numeric_limits<Real>::infinity());
}

Real max_divergence(const SpectralField& f) {
    if (!f.is_vector()) throw std::invalid_argument("max_divergence: vector field required");
    Real worst = 0.0;
    for (Eigen::Index i = 0; i < f.mode_count(); ++i) {
        const WaveVector k = f.wavevector(i);
        if (k.is_zero()) continue;
        const Vec3 kappa = k.kappa(f.box_l());
        const Complex dot = kappa(0) * f.coeffs()(i, 0) + kappa(1) * f.coeffs()(i, 1) +
                            kappa(2) * f.coeffs()(i, 2);
        worst = std::max(worst, std::abs(dot));
    }
    return worst;
}

Real relative_divergence(const SpectralField& f) {
    const Real peak = f.coeffs().array().abs().maxCoeff();
    if (peak == 0.0) return 0.0;
    const Real kappa_max =
        2.0 * pi / f.box_l() * f.cutoff() * std::sqrt(3.0);
    if (kappa_max == 0.0) return 0.0;
    return max_divergence(f) / (kappa_max * peak);
}

SpectralField resample(const SpectralField& f, int cutoff) {
    SpectralField out(cutoff, f.components(), f.box_l());
    const int common = std::min(cutoff, f.cutoff());
    for (int k1 = -common; k1 <= common; ++k1)
        for (int k2 = -common; k2 <= common; ++k2)
            for (int k3 = -common; k3 <= common; ++k3) {
                const WaveVector k{k1, k2, k3};
                const Eigen::Index src = f.flat_index(k);
                const Eigen::Index dst = out.flat_index(k);
                for (int c = 0; c < f.components(); ++c)
                    out.coeffs()(dst, c) = f.coeffs()(src, c);
            }
    return out;
}

std::vector<Real> shell_energy(const SpectralField& f) {
    const int max_shell = static_cast<int>(
        std::lround(std::sqrt(3.0) * f.cutoff()));
    std::vector<Real> shells(max_shell + 1, 0.0);
    const Real vol = f.box_l() * f.box_l() * f.box_l();
    for (Eigen::Index i = 0; i < f.mode_count(); ++i) {
        const int s = static_cast<int>(std::lround(std::sqrt(Real(f.wavevector(i).sq()))));
        Real e = 0.0;
        for (int c = 0; c < f.components(); ++c) e += std::norm(f.coeffs()(i, c));
        shells[static_cast<size_t>(s)] += vol * e;
    }
    return shells;
}

}  // namespace torusflow
