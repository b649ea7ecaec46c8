#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "torusflow/spectral_field.hpp"

namespace torusflow {

/// A named analytic field family for initial conditions and forcing.
///
///   zero             u = 0
///   constant_mode    u(x) = amplitude * vector (the k = 0 mode)
///   taylor_green     u = amplitude * (sin(q x1) cos(q x2),
///                                     -cos(q x1) sin(q x2), 0), q = 2 pi k0 / l
///   abc_flow         u = amplitude * (A sin(q x3) + C cos(q x2),
///                                     B sin(q x1) + A cos(q x3),
///                                     C sin(q x2) + B cos(q x1))
///   random_band      solenoidal Gaussian modes with k_min <= |k| <= k_max,
///                    amplitude scaled by |k|^slope, then normalized so the
///                    L^2 norm equals `amplitude`; fully determined by seed
///   aperiodic_linear f_i(x) = amplitude * vector_i * x_{sigma(i)} / l with
///                    sigma = (2,3,1); deliberately non-periodic, accepted
///                    only by the compatibility checker
///   from_file        checkpoint snapshots at fixed cadence, linearly
///                    interpolated in time (forcing only)
struct FieldSpec {
    std::string family = "zero";
    Real amplitude = 1.0;
    int k0 = 1;                       // taylor_green / abc_flow
    Vec3 vector = Vec3::Zero();       // constant_mode / aperiodic_linear
    Real abc_a = 1.0, abc_b = 1.0, abc_c = 1.0;
    std::uint64_t seed = 0;           // random_band
    int k_min = 1, k_max = 2;
    Real slope = 0.0;
    std::vector<std::string> files;   // from_file
    Real cadence = 0.0;
};

bool is_known_family(const std::string& family);

/// True when the family is a trigonometric polynomial (periodic by
/// construction); false for aperiodic_linear.
bool is_periodic_family(const std::string& family);

/// Spectral realization at the given cutoff. Content beyond the cutoff is
/// truncated without aliasing. Throws for aperiodic_linear and from_file.
SpectralField realize_field(const FieldSpec& spec, int cutoff, Real box_l);

/// Pointwise value at x (time-independent families). For periodic families
/// this is the exact mode sum of the full (untruncated) field; for
/// aperiodic_linear it includes the non-periodic part.
Vec3 eval_field(const FieldSpec& spec, const Vec3& x, Real box_l);

/// Deterministic standard normal stream (64-bit Mersenne Twister +
/// Box-Muller); used instead of std::normal_distribution, whose output is
/// implementation-defined.
class NormalStream {
public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
    Real next();

private:
    Real uniform01();
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    Real spare_ = 0.0;
};

}  // namespace torusflow
