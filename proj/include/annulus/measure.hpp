#pragma once

// Positive measures on the unit circle (Dirac atoms plus a uniform part) and
// the functions they generate through the Villat and Schwarz kernels.

#include <vector>

#include "annulus/common.hpp"
#include "annulus/kernel.hpp"

namespace annulus {

struct Atom {
    double angle;  ///< radians, stored in [0, 2 pi)
    double mass;
};

class CircleMeasure {
public:
    CircleMeasure() = default;
    /// Normalizes angles, drops zero-mass atoms and merges atoms closer than
    /// 1e-12 rad. Throws std::invalid_argument on negative or non-finite masses.
    CircleMeasure(std::vector<Atom> atoms, double uniform_mass);

    static CircleMeasure dirac(double angle, double mass = 1.0);
    static CircleMeasure uniform(double mass = 1.0);

    const std::vector<Atom>& atoms() const { return atoms_; }
    double uniform_mass() const { return uniform_; }
    double total_mass() const;
    bool empty() const { return atoms_.empty() && uniform_ == 0.0; }

    /// Push-forward under conjugation xi -> conj(xi).
    CircleMeasure reflected() const;
    CircleMeasure scaled(double factor) const;

private:
    std::vector<Atom> atoms_;
    double uniform_ = 0.0;
};

bool approx_equal(const CircleMeasure& a, const CircleMeasure& b, double tol);

/// p[r, mu1, mu2]: the pair of measures driving a member of the class V_r.
class ParametricPSpec {
public:
    /// Throws NormalizationError unless mu1(T) + mu2(T) = 1 within 1e-12,
    /// DomainError if r is not in (0,1).
    ParametricPSpec(AnnulusParam r, CircleMeasure mu1, CircleMeasure mu2);

    AnnulusParam r() const { return r_; }
    const CircleMeasure& mu1() const { return mu1_; }
    const CircleMeasure& mu2() const { return mu2_; }

private:
    AnnulusParam r_;
    CircleMeasure mu1_;
    CircleMeasure mu2_;
};

inline constexpr double kNormalizationTol = 1e-12;

/// p(z) = int K_r(z/xi) dmu1 + int [1 - K_r(r xi / z)] dmu2.
/// The uniform part of mu1 contributes its mass; that of mu2 contributes 0.
Complex p_eval(const ParametricPSpec& spec, Complex z, const KernelEvalConfig& cfg = {});

/// Free Laurent coefficient of p, which equals mu1(T).
double p_free_term(const ParametricPSpec& spec);

/// Spec of z -> 1 - p(r/z): measures swapped and reflected.
ParametricPSpec p_conjugate(const ParametricPSpec& spec);

struct PBoundsReport {
    double abs_p;
    double neg_re_p;
    double modulus_bound;
    double re_bound;
    bool modulus_ok;
    bool re_ok;

    bool ok() const { return modulus_ok && re_ok; }
};

/// Evaluates |p(z)| and -Re p(z) against the a priori class bounds.
PBoundsReport p_bounds_check(const ParametricPSpec& spec, Complex z, const KernelEvalConfig& cfg = {});

/// Caratheodory function q(z) = int (xi + z)/(xi - z) dmu for a probability
/// measure mu, so q(0) = 1 and Re q >= 0 on the disk.
Complex caratheodory_p_eval(const CircleMeasure& mu, Complex z);

}  // namespace annulus
