#include "torusflow/transform.hpp"

#include <array>
#include <stdexcept>

namespace torusflow {

namespace {

// Synthesis matrix E(j, i) = exp(2*pi*I * k_i * j / n), k_i = i - K.
CoeffArray synthesis_matrix(int n, int cutoff) {
    const int m = 2 * cutoff + 1;
    CoeffArray e(n, m);
    for (int i = 0; i < m; ++i) {
        const int k = i - cutoff;
        for (int j = 0; j < n; ++j) {
            // Reduce the phase exactly in integers to keep nodes coherent.
            const long kj = static_cast<long>(k) * j % n;
            const Real phase = 2.0 * pi * static_cast<Real>(kj) / n;
            e(j, i) = Complex(std::cos(phase), std::sin(phase));
        }
    }
    return e;
}

// Contract one axis after another: fastest axis first (single GEMM), then
// the slowest (single GEMM), then the middle one (one GEMM per outer slab).
// In: (m1, m2, m3) cube with axis-3 fastest. Out: (n, n, n), axis-3 fastest.
ComplexVector apply_three_axes(const ComplexVector& in, int m, int n,
                               const CoeffArray& e) {
    using Eigen::Map;
    ComplexVector s1(static_cast<Eigen::Index>(m) * m * n);
    // axis 3 (fastest): (n x m) * (m x m^2)
    Map<CoeffArray>(s1.data(), n, static_cast<Eigen::Index>(m) * m).noalias() =
        e * Map<const CoeffArray>(in.data(), m, static_cast<Eigen::Index>(m) * m);
    // axis 1 (slowest): view rows = (i2, x3), cols = i1
    ComplexVector s2(static_cast<Eigen::Index>(m) * n * n);
    Map<CoeffArray>(s2.data(), static_cast<Eigen::Index>(m) * n, n).noalias() =
        Map<const CoeffArray>(s1.data(), static_cast<Eigen::Index>(m) * n, m) *
        e.transpose();
    // axis 2 (middle): per-x1 slabs of (n x m) * (m x n)
    ComplexVector out(static_cast<Eigen::Index>(n) * n * n);
    for (int x1 = 0; x1 < n; ++x1) {
        Map<CoeffArray>(out.data() + static_cast<Eigen::Index>(x1) * n * n, n, n)
            .noalias() =
            Map<const CoeffArray>(s2.data() + static_cast<Eigen::Index>(x1) * m * n,
                                  n, m) *
            e.transpose();
    }
    return out;
}

// Adjoint direction: (n, n, n) grid down to the (m, m, m) cube.
ComplexVector apply_three_axes_adjoint(const ComplexVector& in, int n, int m,
                                       const CoeffArray& f) {
    using Eigen::Map;
    ComplexVector s1(static_cast<Eigen::Index>(n) * n * m);
    Map<CoeffArray>(s1.data(), m, static_cast<Eigen::Index>(n) * n).noalias() =
        f * Map<const CoeffArray>(in.data(), n, static_cast<Eigen::Index>(n) * n);
    ComplexVector s2(static_cast<Eigen::Index>(n) * m * m);
    Map<CoeffArray>(s2.data(), static_cast<Eigen::Index>(n) * m, m).noalias() =
        Map<const CoeffArray>(s1.data(), static_cast<Eigen::Index>(n) * m, n) *
        f.transpose();
    ComplexVector out(static_cast<Eigen::Index>(m) * m * m);
    for (int i1 = 0; i1 < m; ++i1) {
        Map<CoeffArray>(out.data() + static_cast<Eigen::Index>(i1) * m * m, m, m)
            .noalias() =
            Map<const CoeffArray>(s2.data() + static_cast<Eigen::Index>(i1) * n * m,
                                  m, n) *
            f.transpose();
    }
    return out;
}

}  // namespace

int default_grid(int cutoff) { return 2 * (cutoff + 1); }

int dealiased_grid(int cutoff) { return 3 * cutoff + 2; }

PhysicalGrid to_physical(const SpectralField& f, int n) {
    if (f.empty()) throw std::invalid_argument("to_physical: empty field");
    const int m = static_cast<int>(f.modes_per_axis());
    if (n < m)
        throw std::invalid_argument(
            "to_physical: grid must have at least 2K+1 points per axis");
    const CoeffArray e = synthesis_matrix(n, f.cutoff());

    PhysicalGrid g;
    g.n = n;
    g.box_l = f.box_l();
    g.values.resize(static_cast<Eigen::Index>(n) * n * n, f.components());

    Real max_abs = 0.0;
    Real max_imag = 0.0;
    for (int c = 0; c < f.components(); ++c) {
        const ComplexVector vals = apply_three_axes(f.coeffs().col(c), m, n, e);
        g.values.col(c) = vals.real();
        max_abs = std::max(max_abs, vals.real().cwiseAbs().maxCoeff());
        max_imag = std::max(max_imag, vals.imag().cwiseAbs().maxCoeff());
    }
    if (max_imag > 1e-12 * max_abs && max_imag > 1e-300)
        throw std::runtime_error(
            "to_physical: imaginary residue exceeds 1e-12 of field scale "
            "(input violates Hermitian symmetry)");
    return g;
}

PhysicalGrid to_physical(const SpectralField& f) {
    return to_physical(f, default_grid(f.cutoff()));
}

SpectralField from_physical(const PhysicalGrid& g, int cutoff) {
    const int m = 2 * cutoff + 1;
    if (g.n < m)
        throw std::invalid_argument(
            "from_physical: grid must have at least 2K+1 points per axis");
    // Analysis matrix F = E^H / n.
    const CoeffArray f_mat = synthesis_matrix(g.n, cutoff).adjoint() / Real(g.n);

    SpectralField out(cutoff, g.components(), g.box_l);
    for (int c = 0; c < g.components(); ++c) {
        const ComplexVector vals = g.values.col(c).cast<Complex>();
        out.coeffs().col(c) = apply_three_axes_adjoint(vals, g.n, m, f_mat);
    }
    return out;
}

RealVector eval_at(const SpectralField& f, const Vec3& x) {
    const int k = f.cutoff();
    const Real c = 2.0 * pi / f.box_l();
    // Per-axis phase tables keep this O(M^3) with three cheap tables.
    const int m = 2 * k + 1;
    std::array<ComplexVector, 3> table;
    for (int a = 0; a < 3; ++a) {
        table[a].resize(m);
        for (int i = 0; i < m; ++i) {
            const Real phase = c * (i - k) * x(a);
            table[a](i) = Complex(std::cos(phase), std::sin(phase));
        }
    }
    Eigen::Matrix<Complex, Eigen::Dynamic, 1> acc =
        Eigen::Matrix<Complex, Eigen::Dynamic, 1>::Zero(f.components());
    Eigen::Index flat = 0;
    for (int i1 = 0; i1 < m; ++i1)
        for (int i2 = 0; i2 < m; ++i2) {
            const Complex p12 = table[0](i1) * table[1](i2);
            for (int i3 = 0; i3 < m; ++i3, ++flat) {
                const Complex p = p12 * table[2](i3);
                for (int d = 0; d < f.components(); ++d)
                    acc(d) += f.coeffs()(flat, d) * p;
            }
        }
    return acc.real();
}

}  // namespace torusflow
