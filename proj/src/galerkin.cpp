#include "torusflow/galerkin.hpp"

#include <stdexcept>

namespace torusflow {

namespace {

// Pointwise (u.grad)u on an n^3 grid: 3 synthesis passes for u, 9 for the
// derivative components (the i*kappa factor folds into the spectral side).
PhysicalGrid convective_product(const SpectralField& u, int n) {
    const PhysicalGrid ug = to_physical(u, n);
    PhysicalGrid out;
    out.n = n;
    out.box_l = u.box_l();
    out.values = ValueArray::Zero(ug.node_count(), 3);
    for (int j = 1; j <= 3; ++j) {
        const PhysicalGrid dj = to_physical(derivative(u, j), n);
        for (int i = 0; i < 3; ++i)
            out.values.col(i).array() +=
                ug.values.col(j - 1).array() * dj.values.col(i).array();
    }
    return out;
}

}  // namespace

Real grad_inner(const SpectralField& u, const SpectralField& v) {
    if (!u.same_shape(v)) throw std::invalid_argument("grad_inner: shape mismatch");
    const Real vol = u.box_l() * u.box_l() * u.box_l();
    const RealVector ksq = mode_kappa_sq(u.cutoff(), u.box_l());
    Complex acc = 0.0;
    for (int c = 0; c < u.components(); ++c)
        acc += (u.coeffs().col(c).array() * v.coeffs().col(c).array().conjugate() *
                ksq.array().cast<Complex>())
                   .sum();
    return vol * acc.real();
}

SpectralField neg_laplacian(const SpectralField& u) {
    SpectralField out = u;
    const RealVector ksq = mode_kappa_sq(u.cutoff(), u.box_l());
    for (int c = 0; c < u.components(); ++c)
        out.coeffs().col(c).array() *= ksq.array().cast<Complex>();
    return out;
}

Real advection_form(const SpectralField& u, const SpectralField& v,
                    const SpectralField& w, bool dealias) {
    if (!u.same_shape(v) || !u.same_shape(w))
        throw std::invalid_argument("advection_form: shape mismatch");
    if (!u.is_vector()) throw std::invalid_argument("advection_form: vector fields required");
    const int n = dealias ? dealiased_grid(u.cutoff()) : default_grid(u.cutoff());

    const PhysicalGrid ug = to_physical(u, n);
    const PhysicalGrid wg = to_physical(w, n);
    RealVector integrand = RealVector::Zero(ug.node_count());
    for (int j = 1; j <= 3; ++j) {
        const PhysicalGrid dj = to_physical(derivative(v, j), n);
        for (int i = 0; i < 3; ++i)
            integrand.array() += ug.values.col(j - 1).array() *
                                 dj.values.col(i).array() * wg.values.col(i).array();
    }
    return integrand.sum() * ug.cell_volume();
}

SpectralField advection_term_raw(const SpectralField& u, int out_cutoff, bool dealias) {
    if (!u.is_vector())
        throw std::invalid_argument("advection_term_raw: vector field required");
    // The product has content 2K, so coefficients up to out_cutoff are
    // alias-free once n >= 2K + out_cutoff + 1.
    const int exact = 2 * u.cutoff() + out_cutoff + 1;
    const int n = dealias ? std::max({exact + (exact % 2), default_grid(u.cutoff()),
                                      default_grid(out_cutoff)})
                          : std::max(default_grid(u.cutoff()), 2 * out_cutoff + 1);
    return from_physical(convective_product(u, n), out_cutoff);
}

SpectralField advection_term(const SpectralField& u, bool dealias) {
    return leray_project(advection_term_raw(u, u.cutoff(), dealias));
}

SpectralField galerkin_rhs(const SpectralField& u, const SpectralField& f, Real nu,
                           bool nonlinear) {
    SpectralField rhs = neg_laplacian(u);
    rhs *= -nu;
    if (nonlinear) rhs -= advection_term(u);
    if (!f.empty()) {
        const SpectralField f_boxed =
            f.cutoff() == u.cutoff() ? f : resample(f, u.cutoff());
        rhs += leray_project(f_boxed);
    }
    return rhs;
}

}  // namespace torusflow
