#pragma once

// Property checks on computed evolution families.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "annulus/ode.hpp"

namespace annulus {

struct Check {
    std::string name;
    bool pass;
    double residual;
    double tol;
    std::string detail;
};

struct VerificationReport {
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<Check> checks;

    bool all_pass() const;
    const Check* find(const std::string& name) const;
    void add(Check c) { checks.push_back(std::move(c)); }
    /// Appends the checks of `other`, then orders everything by name.
    void merge(const VerificationReport& other);
};

/// Random draws used by the axiom checks.
struct ProbePlan {
    double t0 = 0.0;
    double horizon = 1.0;
    int points = 20;
    int triples = 20;
    int partition = 32;
    std::uint64_t seed = 0;
    double ef2_tol = 1e-6;
};

/// EF1 (exact identity), EF2 (composition residual) and the EF3 surrogate:
/// the variation of t -> phi_{s,t}(z) over each partition piece must not
/// exceed the integral of the field majorant along the trajectory band.
/// EF3 is skipped (reported as passing with a note) if the family has no field.
VerificationReport check_ef_axioms(const EvolutionFamily& family, const ProbePlan& plan);

/// EF2 residuals on the same draws at `base` and at base.tightened(10);
/// passes if the residual shrinks by `min_ratio`, or both are already at
/// the round-off floor.
VerificationReport check_ef2_convergence(const FieldSpec& spec, const IntegratorConfig& base, const ProbePlan& plan,
                                         double min_ratio = 4.0);

/// Winding number about 0 of phi_{s,t} applied to |z| = loop_radius.
/// Doubles the sample count (up to 65536) while a step turns by >= pi/2.
VerificationReport check_index_preservation(const EvolutionFamily& family, double s, double t, double loop_radius,
                                            int n_samples = 256);

/// Minimum pairwise separation of the evolved grid must exceed 1e-9.
VerificationReport check_injectivity(const EvolutionFamily& family, double s, double t,
                                     const std::vector<Complex>& grid);

/// sup over accepted steps in [0, horizon] of |phi_{0,t}(z_j) - z_j|,
/// z_j = r_star e^{2 pi i j / N}.
double fixed_point_drift(const EvolutionFamily& family, int N, double r_star, double horizon);

/// Drift check at `tol`, plus the negative control (alpha shifted by +0.05)
/// which must drift by more than `control_min`.
VerificationReport check_fixed_points(int N, double r0, double r_star, double horizon,
                                      const IntegratorConfig& cfg = {}, double tol = 1e-6,
                                      double control_min = 1e-3);

/// |phi~_{s,t}(z) - r(t)/phi_{s,t}(r(s)/z)| with phi~ generated by the
/// conjugate field; 0 when t == s.
double inversion_symmetry_residual(const EvolutionMap& map, double s, double t, Complex z);

VerificationReport check_inversion_symmetry(const EvolutionMap& map, const ProbePlan& plan, double tol = 1e-6);

/// On a degenerate system: |phi_{s,t}(z)| <= |z| and decreasing along
/// |z| = 1e-2, 1e-3, 1e-4.
VerificationReport check_degenerate_extension(const EvolutionFamily& family, double s, double t);

/// Lift commutation at `probes` strip points.
VerificationReport check_lift_commutation(const EvolutionFamily& family, double s, double t, int probes = 20,
                                          double tol = 1e-6);

/// Containment: no boundary termination and no envelope violation.
VerificationReport check_containment(const FieldSpec& spec, const ProbePlan& plan, const IntegratorConfig& cfg = {});

/// Fixed-point parameters for verify_spec: drift of the family under test at
/// z_j = r_star e^{2 pi i j / N}, plus the alpha-perturbed control.
struct FixedPointPlan {
    int N;
    double r0;
    double r_star;
};

/// Runs every check that applies to the field.
VerificationReport verify_spec(const FieldSpec& spec, const ProbePlan& plan, const IntegratorConfig& cfg = {},
                               std::optional<FixedPointPlan> fixed_points = std::nullopt);

/// Family whose values are shifted by `offset` whenever t > s. Used as a
/// negative control: EF2 must fail on it.
class FaultInjectedFamily : public EvolutionFamily {
public:
    FaultInjectedFamily(const EvolutionFamily& base, Complex offset) : base_(base), offset_(offset) {}

    Complex evolve(double s, double t, Complex z) const override;
    Trajectory trajectory(double s, Complex z, double t_end, std::span<const double> stop_times = {}) const override;
    const DomainSystem& domain() const override { return base_.domain(); }
    const FieldSpec* field() const override { return base_.field(); }

private:
    const EvolutionFamily& base_;
    Complex offset_;
};

}  // namespace annulus
