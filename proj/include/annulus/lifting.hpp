#pragma once

// Strip coverings of the annuli and the lift of an evolution family to the
// strip 0 < Re zeta < 1.

#include <vector>

#include "annulus/ode.hpp"

namespace annulus {

/// W_t(zeta) = exp(zeta log r(t)). Requires 0 < Re zeta < 1 and r(t) > 0.
Complex covering_W(double t, const DomainSystem& ds, Complex zeta);

/// Q(w, omega) = (i/omega) log((1 + omega w)/(1 - omega w)), principal log;
/// Q(w, 0) = 2 i w. Throws DomainError when omega*w sits on the cut.
Complex map_Q(Complex w, double omega);

/// Inverse of map_Q: R(zeta, omega) = -(i/omega) tan(zeta omega / 2);
/// R(zeta, 0) = -i zeta / 2.
Complex map_R(Complex zeta, double omega);

/// F(z) = log(i (1 + z)/(1 - z)) / (pi i), maps the unit disk onto the strip
/// with F(0) = 1/2.
Complex disk_to_strip_F(Complex z);

struct LiftResult {
    Complex psi;       ///< Psi_{s,t}(zeta)
    Complex phi;       ///< phi_{s,t}(W_s(zeta))
    double residual;   ///< |W_t(psi) - phi|
    int refinements;   ///< extra samples inserted by argument tracking
};

/// Lifts u -> phi_{s,u}(W_s(zeta)) through the logarithm, tracking the
/// argument continuously from the branch zeta log r(s), and divides by
/// log r(t). Throws LiftingFailure if some step still turns by >= pi after
/// refinement, Unsupported for degenerate systems.
LiftResult lift_to_strip(const EvolutionFamily& family, double s, double t, Complex zeta);

/// |W_t(Psi_{s,t}(zeta)) - phi_{s,t}(W_s(zeta))|; zero when t == s.
double lift_commutation_check(const EvolutionFamily& family, double s, double t, Complex zeta);

}  // namespace annulus
