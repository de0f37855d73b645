#pragma once

// Semicomplete vector fields G(w,t) = w [iC(t) + r'(t)/r(t) p(w,t)] over a
// non-degenerate system and G(w,t) = w [iC(t) - alpha(t) q(w,t)] over the
// punctured disk.

#include <functional>
#include <string>
#include <vector>

#include "annulus/domain.hpp"
#include "annulus/drivers.hpp"
#include "annulus/kernel.hpp"
#include "annulus/measure.hpp"

namespace annulus {

struct MeasurePair {
    CircleMeasure mu1;
    CircleMeasure mu2;
};

using MeasurePath = std::function<MeasurePair(double t)>;
using HerglotzPath = std::function<CircleMeasure(double t)>;

class FieldSpec {
public:
    /// Requires a non-degenerate system. `measure_jumps` lists the times
    /// where the measure path is discontinuous.
    static FieldSpec non_degenerate(DomainSystem ds, Driver C, MeasurePath measures,
                                    std::vector<double> measure_jumps = {});
    /// Requires a degenerate system; q(t) must be a probability measure.
    static FieldSpec degenerate(DomainSystem ds, Driver C, Driver alpha, HerglotzPath q,
                                std::vector<double> q_jumps = {});

    const DomainSystem& domain() const { return ds_; }
    bool is_degenerate() const { return degenerate_; }
    const Driver& C() const { return C_; }
    const Driver& alpha() const { return alpha_; }

    MeasurePair measures(double t) const;
    /// p[r(t), mu1^t, mu2^t]. Throws NormalizationError on a bad path.
    ParametricPSpec p_spec(double t) const;
    /// Herglotz measure of q(., t). Throws NormalizationError on a bad path.
    CircleMeasure q_measure(double t) const;

    /// Sorted times where any driver or the radius path may jump.
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    std::string label = "field";

private:
    FieldSpec(DomainSystem ds, Driver C) : ds_(std::move(ds)), C_(std::move(C)) {}

    DomainSystem ds_;
    Driver C_;
    bool degenerate_ = false;
    MeasurePath measures_;
    Driver alpha_;
    HerglotzPath q_;
    std::vector<double> breakpoints_;
};

Complex field_eval(const FieldSpec& spec, Complex w, double t, const KernelEvalConfig& cfg = {});

/// Field of the family r(t) / phi_{s,t}(r(s)/z). Throws Unsupported for
/// degenerate specs.
FieldSpec field_conjugate(const FieldSpec& spec);

/// Compact box {inner <= |z| <= outer} x [0, T].
struct FieldBox {
    double inner;
    double outer;
    double T;
};

/// Majorant of |G| over the box, sup over a time grid of
/// |C(t)| + |r'(t)|/r(T) (1 + (4/delta)/(1 - r(0))) with delta the distance
/// of the band to the boundary of every D_t. Throws DomainError if the band
/// is not strictly inside D_t for all t in [0,T].
double whvf_bound(const FieldSpec& spec, const FieldBox& box);

/// Pointwise majorant of |G(z,t)| over z with dist(|z|, {r(t),1}) >= margin.
double whvf_majorant(const FieldSpec& spec, double t, double margin);

// Builders for the standard families.

/// Static annulus of radius r and G = iC(t) w.
FieldSpec rotation_field(double r, Driver C);

/// N fixed points z_j = r_star e^{2 pi i j / N} on r(t) = r0 e^{-t}; the
/// weight alpha(t) solves p_t(z_j) = 0. `alpha_offset` shifts alpha away
/// from that solution (negative controls).
FieldSpec fixed_point_field(int N, double r0, double r_star, double alpha_offset = 0.0, Driver C = {});

/// Weight alpha(t) making p vanish at the N fixed points for radius r.
double fixed_point_alpha(int N, double r, double r_star, const KernelEvalConfig& cfg = {});

/// Two-atom path mu1 = (1 - lambda) delta_{theta1}, mu2 = lambda delta_{theta2}.
MeasurePath blend_measures(Driver lambda, Driver theta1, Driver theta2);

/// Degenerate system with G = w [iC(t) - alpha(t) q(w,t)].
FieldSpec degenerate_field(Driver C, Driver alpha, HerglotzPath q, std::vector<double> q_jumps = {});

}  // namespace annulus
