#pragma once

// Komatu-Lebedev slit evolution on A = {m < |zeta| < M} and its reduction to
// a canonical field on the annuli of radius r(t) = e^{-t} m / M.

#include <memory>
#include <vector>

#include "annulus/ode.hpp"

namespace annulus {

/// kappa1, kappa2 are given by their angles: kappa_j(t) = exp(i kappa_j(t)).
struct LebedevSpec {
    double m = 0.5;
    double M = 2.0;
    Driver lambda;
    Driver kappa1;
    Driver kappa2;

    /// Throws DomainError unless 0 < m < 1 < M.
    void validate() const;
    double r(double t) const;
    std::vector<double> breakpoints() const;
    /// Right-hand side of the m_t equation, dm/dt.
    double mt_rhs(double t, double mt, const KernelEvalConfig& cfg = {}) const;
};

/// Accepted steps of m_t with cubic Hermite interpolation in between, using
/// the equation's right-hand side as derivative data.
class MtPath {
public:
    MtPath(std::vector<double> t, std::vector<double> m, std::vector<double> dm_right, std::vector<double> dm_left,
           std::vector<double> r);

    /// Interpolated m_t; throws DomainError outside [0, horizon].
    double operator()(double t) const;
    double horizon() const { return t_.back(); }
    const std::vector<double>& times() const { return t_; }
    const std::vector<double>& values() const { return m_; }
    /// min over accepted steps of min(m_t - r(t), 1 - m_t).
    double min_band_margin() const;

private:
    std::vector<double> t_, m_, dr_, dl_, r_;
};

/// Adaptive run of the m_t equation from m_0 = m. h_max is capped at 0.01
/// to keep the Hermite interpolant far below the integration tolerance.
/// Throws RangeViolation if lambda leaves [0,1] or m_t leaves (r(t), 1),
/// StepFailure if the step size collapses.
MtPath integrate_mt(const LebedevSpec& spec, double t_end, const IntegratorConfig& cfg = {});

/// f(zeta, t) from f(zeta, 0) = zeta on a computed m_t path. Requires
/// m < |zeta| < M; the run stops with blew_up_at_boundary if f comes within
/// the guard of m_t or of m_t / r(t) (the images of the boundary circles).
Trajectory integrate_slit(const LebedevSpec& spec, const MtPath& path, Complex zeta, double t_end,
                          const IntegratorConfig& cfg = {}, std::span<const double> stop_times = {});

/// Canonical field w [iC(t) - p(w,t)] over r(t) = e^{-t} m/M for the change
/// of variables w = r(t) f / m_t, z = zeta / M.
FieldSpec to_canonical_field(const LebedevSpec& spec, std::shared_ptr<const MtPath> path);

/// f(zeta, t) recovered as m_t phi_{0,t}(zeta / M) / r(t).
Complex lebedev_from_family(const LebedevSpec& spec, const MtPath& path, const EvolutionFamily& family, Complex zeta,
                            double t);

struct MonitorRow {
    double t_from;
    double t_to;
    double increment;  ///< sup over the seeds of |f(zeta, t_to) - f(zeta, t_from)|
};

/// Cauchy increments of f(., T_k) along an increasing horizon ladder. No
/// verdict is attached.
std::vector<MonitorRow> long_time_monitor(const LebedevSpec& spec, const std::vector<Complex>& zetas,
                                          const std::vector<double>& horizons, const IntegratorConfig& cfg = {});

}  // namespace annulus
