#pragma once

#include <stdexcept>

#include "torusflow/types.hpp"
#include "torusflow/wavevector.hpp"

namespace torusflow {

/// Fourier coefficients of a real scalar or 3-vector field on the periodic
/// cube [0,l]^3, holding every mode with |k_i| <= K.
///
/// The full Hermitian-redundant (2K+1)^3 cube is stored (coeff(-k) =
/// conj(coeff(k)) is validated where it matters, not exploited for packing).
/// Layout: flat index ((k1+K)*M + (k2+K))*M + (k3+K) with M = 2K+1, one
/// column per component.
class SpectralField {
public:
    SpectralField() = default;

    SpectralField(int cutoff, int components, Real box_l)
        : cutoff_(cutoff), box_l_(box_l) {
        if (cutoff < 0) throw std::invalid_argument("SpectralField: cutoff must be >= 0");
        if (components != 1 && components != 3)
            throw std::invalid_argument("SpectralField: components must be 1 or 3");
        if (!(box_l > 0)) throw std::invalid_argument("SpectralField: box_l must be > 0");
        const Eigen::Index m = modes_per_axis();
        coeffs_ = CoeffArray::Zero(m * m * m, components);
    }

    static SpectralField zero_scalar(int cutoff, Real box_l) {
        return SpectralField(cutoff, 1, box_l);
    }
    static SpectralField zero_vector(int cutoff, Real box_l) {
        return SpectralField(cutoff, 3, box_l);
    }

    int cutoff() const { return cutoff_; }
    Real box_l() const { return box_l_; }
    int components() const { return static_cast<int>(coeffs_.cols()); }
    bool is_vector() const { return components() == 3; }
    Eigen::Index modes_per_axis() const { return 2 * static_cast<Eigen::Index>(cutoff_) + 1; }
    Eigen::Index mode_count() const { return coeffs_.rows(); }
    bool empty() const { return coeffs_.size() == 0; }

    CoeffArray& coeffs() { return coeffs_; }
    const CoeffArray& coeffs() const { return coeffs_; }

    bool contains(const WaveVector& k) const { return k.inf_norm() <= cutoff_; }

    Eigen::Index flat_index(const WaveVector& k) const {
        const Eigen::Index m = modes_per_axis();
        return (static_cast<Eigen::Index>(k.k1 + cutoff_) * m + (k.k2 + cutoff_)) * m +
               (k.k3 + cutoff_);
    }

    WaveVector wavevector(Eigen::Index flat) const {
        const Eigen::Index m = modes_per_axis();
        const int i3 = static_cast<int>(flat % m);
        const int i2 = static_cast<int>((flat / m) % m);
        const int i1 = static_cast<int>(flat / (m * m));
        return WaveVector{i1 - cutoff_, i2 - cutoff_, i3 - cutoff_};
    }

    Complex coeff(const WaveVector& k, int component = 0) const {
        return coeffs_(flat_index(k), component);
    }
    void set_coeff(const WaveVector& k, int component, Complex value) {
        coeffs_(flat_index(k), component) = value;
    }
    Vec3c coeff3(const WaveVector& k) const {
        const Eigen::Index i = flat_index(k);
        return Vec3c(coeffs_(i, 0), coeffs_(i, 1), coeffs_(i, 2));
    }
    void set_coeff3(const WaveVector& k, const Vec3c& value) {
        const Eigen::Index i = flat_index(k);
        coeffs_(i, 0) = value(0);
        coeffs_(i, 1) = value(1);
        coeffs_(i, 2) = value(2);
    }

    /// max over the cube of |coeff(k) - conj(coeff(-k))|.
    Real hermitian_defect() const;

    /// Re-impose coeff(-k) = conj(coeff(k)) by averaging Hermitian pairs;
    /// the k = 0 imaginary part is dropped.
    void symmetrize();

    bool same_shape(const SpectralField& o) const {
        return cutoff_ == o.cutoff_ && box_l_ == o.box_l_ &&
               components() == o.components();
    }

    SpectralField& operator+=(const SpectralField& o) {
        require_same_shape(o);
        coeffs_ += o.coeffs_;
        return *this;
    }
    SpectralField& operator-=(const SpectralField& o) {
        require_same_shape(o);
        coeffs_ -= o.coeffs_;
        return *this;
    }
    SpectralField& operator*=(Real a) {
        coeffs_ *= a;
        return *this;
    }

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(Real a, SpectralField f) { return f *= a; }
    friend SpectralField operator*(SpectralField f, Real a) { return f *= a; }

private:
    void require_same_shape(const SpectralField& o) const {
        if (!same_shape(o))
            throw std::invalid_argument("SpectralField: shape mismatch (cutoff/box/components)");
    }

    int cutoff_ = 0;
    Real box_l_ = 1.0;
    CoeffArray coeffs_;
};

/// |kappa|^2 for every flat index, in field layout order.
RealVector mode_kappa_sq(int cutoff, Real box_l);

}  // namespace torusflow
