#pragma once

// Integration of w' = G(w,t), w(s) = z and the evolution family phi_{s,t}
// it generates.

#include <cstddef>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "annulus/field.hpp"

namespace annulus {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double h_init = 1e-3;
    double h_min = 1e-12;
    double h_max = 0.05;
    /// Minimum distance kept from |w| = 1 and |w| = r(t).
    double boundary_guard = 1e-9;
    KernelEvalConfig kernel{};

    void validate() const;
    /// Same config with both tolerances divided by `factor`.
    IntegratorConfig tightened(double factor) const;
};

enum class TrajectoryStatus { complete, blew_up_at_boundary, step_failure };

const char* to_string(TrajectoryStatus s);

struct TrajectorySample {
    double t;
    Complex w;
};

struct Trajectory {
    double s = 0.0;
    Complex z0{};
    std::vector<TrajectorySample> samples;
    TrajectoryStatus status = TrajectoryStatus::complete;
    /// Last time reached; equals t_end when complete.
    double validity_end = 0.0;
    std::string message;

    Complex endpoint() const { return samples.back().w; }
    bool complete() const { return status == TrajectoryStatus::complete; }
};

/// Adaptive integration from (s, z) up to t_end. Jump times of the field and
/// `stop_times` are forced step boundaries and appear as samples.
/// Throws DomainError if (z, s) is not in the domain or t_end < s.
Trajectory integrate(const FieldSpec& spec, double s, Complex z, double t_end, const IntegratorConfig& cfg = {},
                     std::span<const double> stop_times = {});

/// Anything that can evaluate phi_{s,t}.
class EvolutionFamily {
public:
    virtual ~EvolutionFamily() = default;

    virtual Complex evolve(double s, double t, Complex z) const = 0;
    virtual Trajectory trajectory(double s, Complex z, double t_end, std::span<const double> stop_times = {}) const = 0;
    virtual const DomainSystem& domain() const = 0;
    /// Generating field, when the family comes from one.
    virtual const FieldSpec* field() const { return nullptr; }
};

/// phi_{s,t}(z) = w(t) for the solution of w' = G(w,t), w(s) = z.
/// Endpoints are memoized on exact (s, t, z) keys.
class EvolutionMap : public EvolutionFamily {
public:
    EvolutionMap(FieldSpec spec, IntegratorConfig cfg = {}, bool memoize = true);

    /// Throws BoundaryExit or StepFailure when the trajectory is not complete.
    Complex evolve(double s, double t, Complex z) const override;
    Trajectory trajectory(double s, Complex z, double t_end, std::span<const double> stop_times = {}) const override;
    const DomainSystem& domain() const override { return spec_.domain(); }
    const FieldSpec* field() const override { return &spec_; }

    const FieldSpec& spec() const { return spec_; }
    const IntegratorConfig& config() const { return cfg_; }
    std::size_t memo_size() const;

private:
    FieldSpec spec_;
    IntegratorConfig cfg_;
    bool memoize_;
    mutable std::mutex memo_mutex_;
    mutable std::map<std::tuple<double, double, double, double>, Complex> memo_;
};

/// Convenience wrapper for EvolutionMap::evolve.
Complex evolve(const EvolutionFamily& map, double s, double t, Complex z);

/// Per-point failure of a batch evaluation.
struct GridFailure {
    std::size_t index;
    std::string message;
};

class GridEvaluationError : public std::runtime_error {
public:
    explicit GridEvaluationError(std::vector<GridFailure> failures);
    const std::vector<GridFailure>& failures() const { return failures_; }

private:
    std::vector<GridFailure> failures_;
};

/// Elementwise evolve, order preserving. Points may run on several threads
/// (capped by ANNULUS_LOEWNER_THREADS). Throws GridEvaluationError listing
/// every failed index.
std::vector<Complex> evolve_grid(const EvolutionFamily& map, double s, double t, std::span<const Complex> grid);

/// Worker count for batch evaluation: hardware concurrency, capped by the
/// ANNULUS_LOEWNER_THREADS environment variable.
unsigned worker_count();

/// Analytic envelope for |w(t)| along a trajectory.
struct ContainmentCertificate {
    std::vector<double> t;
    std::vector<double> modulus;
    std::vector<double> upper;  ///< rho*(t) = 1 - (1 - rho(s)) exp(a (r(t) - r(s)))
    std::vector<double> lower;  ///< same bound applied to r(t)/|w(t)|
    bool violated = false;
    double max_violation = 0.0;
    TrajectoryStatus status = TrajectoryStatus::complete;
};

/// Integrates from (s, z) and compares |w| with the envelope implied by the
/// a priori bound on -Re p. Non-degenerate specs only.
ContainmentCertificate containment_certificate(const FieldSpec& spec, double s, Complex z, double t_end,
                                               const IntegratorConfig& cfg = {});

}  // namespace annulus
