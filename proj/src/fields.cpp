#include "torusflow/fields.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "torusflow/operators.hpp"
#include "torusflow/transform.hpp"

namespace torusflow {

namespace {

const std::set<std::string> kFamilies = {
    "zero",        "constant_mode", "taylor_green", "abc_flow",
    "random_band", "aperiodic_linear", "from_file"};

Vec3 taylor_green_value(const FieldSpec& s, const Vec3& x, Real box_l) {
    const Real q = 2.0 * pi * s.k0 / box_l;
    return s.amplitude * Vec3(std::sin(q * x(0)) * std::cos(q * x(1)),
                              -std::cos(q * x(0)) * std::sin(q * x(1)), 0.0);
}

Vec3 abc_value(const FieldSpec& s, const Vec3& x, Real box_l) {
    const Real q = 2.0 * pi * s.k0 / box_l;
    return s.amplitude *
           Vec3(s.abc_a * std::sin(q * x(2)) + s.abc_c * std::cos(q * x(1)),
                s.abc_b * std::sin(q * x(0)) + s.abc_a * std::cos(q * x(2)),
                s.abc_c * std::sin(q * x(1)) + s.abc_b * std::cos(q * x(0)));
}

// Sample the analytic family on a grid fine enough that truncation to
// `cutoff` is alias-free (content bound + cutoff + 1 points).
SpectralField realize_from_samples(const FieldSpec& spec, int cutoff, Real box_l,
                                   int content_bound) {
    const int need = content_bound + cutoff + 1;
    const int n = std::max(need + (need % 2), default_grid(cutoff));
    PhysicalGrid g;
    g.n = n;
    g.box_l = box_l;
    g.values.resize(static_cast<Eigen::Index>(n) * n * n, 3);
    for (int j1 = 0; j1 < n; ++j1)
        for (int j2 = 0; j2 < n; ++j2)
            for (int j3 = 0; j3 < n; ++j3) {
                const Vec3 v = eval_field(spec, g.node(j1, j2, j3), box_l);
                g.values.row(g.flat_index(j1, j2, j3)) = v.transpose();
            }
    return from_physical(g, cutoff);
}

SpectralField random_band_field(const FieldSpec& spec, int cutoff, Real box_l) {
    if (spec.k_min < 1 || spec.k_max < spec.k_min)
        throw std::invalid_argument("random_band: need 1 <= k_min <= k_max");
    SpectralField f(cutoff, 3, box_l);
    NormalStream rng(spec.seed);
    // Walk representatives in flat order so the draw sequence is fixed by
    // (seed, k_max) alone; modes beyond the cutoff still consume draws, which
    // keeps a K-truncated field consistent with its higher-cutoff version.
    const int kw = spec.k_max;
    for (int k1 = -kw; k1 <= kw; ++k1)
        for (int k2 = -kw; k2 <= kw; ++k2)
            for (int k3 = -kw; k3 <= kw; ++k3) {
                const WaveVector k{k1, k2, k3};
                if (!k.is_hermitian_representative()) continue;
                const Real mag = std::sqrt(static_cast<Real>(k.sq()));
                if (mag < spec.k_min || mag > spec.k_max) continue;
                Vec3c draw;
                for (int c = 0; c < 3; ++c) draw(c) = Complex(rng.next(), rng.next());
                if (!f.contains(k)) continue;
                const Vec3 kappa = k.kappa(box_l);
                const Complex dot =
                    kappa(0) * draw(0) + kappa(1) * draw(1) + kappa(2) * draw(2);
                const Vec3c sol = draw - (dot / kappa.squaredNorm()) * kappa.cast<Complex>();
                const Vec3c scaled = std::pow(mag, spec.slope) * sol;
                f.set_coeff3(k, scaled);
                f.set_coeff3(-k, scaled.conjugate());
            }
    const Real norm = l2_norm(f);
    if (norm > 0.0) f *= spec.amplitude / norm;
    return f;
}

}  // namespace

Real NormalStream::uniform01() {
    // 53-bit mantissa in (0, 1].
    return (static_cast<Real>(engine_() >> 11) + 1.0) * 0x1p-53;
}

Real NormalStream::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const Real u1 = uniform01();
    const Real u2 = uniform01();
    const Real r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * pi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * pi * u2);
}

bool is_known_family(const std::string& family) { return kFamilies.count(family) > 0; }

bool is_periodic_family(const std::string& family) {
    return family != "aperiodic_linear";
}

SpectralField realize_field(const FieldSpec& spec, int cutoff, Real box_l) {
    if (!is_known_family(spec.family))
        throw std::invalid_argument("unknown field family: " + spec.family);
    if (spec.family == "zero") return SpectralField::zero_vector(cutoff, box_l);
    if (spec.family == "constant_mode") {
        SpectralField f(cutoff, 3, box_l);
        f.set_coeff3(WaveVector{0, 0, 0}, (spec.amplitude * spec.vector).cast<Complex>());
        return f;
    }
    if (spec.family == "taylor_green" || spec.family == "abc_flow")
        return realize_from_samples(spec, cutoff, box_l, spec.k0);
    if (spec.family == "random_band") return random_band_field(spec, cutoff, box_l);
    throw std::invalid_argument("field family '" + spec.family +
                                "' has no spectral realization");
}

Vec3 eval_field(const FieldSpec& spec, const Vec3& x, Real box_l) {
    if (spec.family == "zero") return Vec3::Zero();
    if (spec.family == "constant_mode") return spec.amplitude * spec.vector;
    if (spec.family == "taylor_green") return taylor_green_value(spec, x, box_l);
    if (spec.family == "abc_flow") return abc_value(spec, x, box_l);
    if (spec.family == "random_band") {
        const SpectralField f = random_band_field(spec, spec.k_max, box_l);
        const RealVector v = eval_at(f, x);
        return Vec3(v(0), v(1), v(2));
    }
    if (spec.family == "aperiodic_linear")
        return spec.amplitude / box_l *
               Vec3(spec.vector(0) * x(1), spec.vector(1) * x(2), spec.vector(2) * x(0));
    throw std::invalid_argument("field family '" + spec.family +
                                "' has no pointwise form");
}

}  // namespace torusflow
