#include "annulus/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace annulus {

namespace {

constexpr int kBoundTimeGrid = 4096;

std::vector<double> collect_breakpoints(const DomainSystem& ds, std::initializer_list<const std::vector<double>*> more) {
    std::vector<double> out = ds.path().breakpoints();
    for (const auto* l : more) out.insert(out.end(), l->begin(), l->end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    std::erase_if(out, [](double t) { return !(t > 0.0); });
    return out;
}

// Grid of [0,T] plus every breakpoint inside it.
std::vector<double> bound_times(const FieldSpec& spec, double T) {
    std::vector<double> ts;
    ts.reserve(kBoundTimeGrid + 1 + spec.breakpoints().size());
    for (int k = 0; k <= kBoundTimeGrid; ++k) ts.push_back(T * k / kBoundTimeGrid);
    for (double b : spec.breakpoints())
        if (b < T) ts.push_back(b);
    return ts;
}

}  // namespace

FieldSpec FieldSpec::non_degenerate(DomainSystem ds, Driver C, MeasurePath measures,
                                    std::vector<double> measure_jumps) {
    if (ds.classification() != Classification::non_degenerate)
        throw Unsupported(std::string("FieldSpec::non_degenerate: domain system is ") + to_string(ds.classification()));
    FieldSpec f(std::move(ds), std::move(C));
    f.measures_ = std::move(measures);
    f.breakpoints_ = collect_breakpoints(f.ds_, {&f.C_.jumps(), &measure_jumps});
    return f;
}

FieldSpec FieldSpec::degenerate(DomainSystem ds, Driver C, Driver alpha, HerglotzPath q,
                                std::vector<double> q_jumps) {
    if (ds.classification() != Classification::degenerate)
        throw Unsupported(std::string("FieldSpec::degenerate: domain system is ") + to_string(ds.classification()));
    FieldSpec f(std::move(ds), std::move(C));
    f.degenerate_ = true;
    f.alpha_ = std::move(alpha);
    f.q_ = std::move(q);
    f.breakpoints_ = collect_breakpoints(f.ds_, {&f.C_.jumps(), &f.alpha_.jumps(), &q_jumps});
    return f;
}

MeasurePair FieldSpec::measures(double t) const {
    if (degenerate_) throw Unsupported("measures: degenerate spec has no V_r measure path");
    return measures_(t);
}

ParametricPSpec FieldSpec::p_spec(double t) const {
    auto m = measures(t);
    return ParametricPSpec(AnnulusParam(ds_.r(t)), std::move(m.mu1), std::move(m.mu2));
}

CircleMeasure FieldSpec::q_measure(double t) const {
    if (!degenerate_) throw Unsupported("q_measure: only degenerate specs carry a Caratheodory path");
    CircleMeasure q = q_(t);
    if (std::abs(q.total_mass() - 1.0) > kNormalizationTol)
        throw NormalizationError("q_measure: Caratheodory measure must have total mass 1 at t=" + std::to_string(t));
    return q;
}

Complex field_eval(const FieldSpec& spec, Complex w, double t, const KernelEvalConfig& cfg) {
    if (!contains(spec.domain(), w, t)) throw DomainError("field_eval: (w,t) outside the domain system");
    const Complex iC(0.0, spec.C()(t));
    if (spec.is_degenerate()) {
        const double a = spec.alpha()(t);
        if (a < 0.0) throw std::invalid_argument("field_eval: alpha(t) must be >= 0");
        return w * (iC - a * caratheodory_p_eval(spec.q_measure(t), w));
    }
    const ParametricPSpec p = spec.p_spec(t);
    const double rate = spec.domain().log_rate(t);
    if (rate == 0.0) return w * iC;
    return w * (iC + rate * p_eval(p, w, cfg));
}

FieldSpec field_conjugate(const FieldSpec& spec) {
    if (spec.is_degenerate()) throw Unsupported("field_conjugate: defined for non-degenerate systems only");
    MeasurePath swapped = [spec](double t) {
        MeasurePair m = spec.measures(t);
        return MeasurePair{m.mu2.reflected(), m.mu1.reflected()};
    };
    // C jumps and measure jumps are already merged into the breakpoints.
    FieldSpec out = FieldSpec::non_degenerate(spec.domain(), spec.C().scaled(-1.0), std::move(swapped),
                                              spec.breakpoints());
    out.label = spec.label + "~";
    return out;
}

double whvf_bound(const FieldSpec& spec, const FieldBox& box) {
    const auto& ds = spec.domain();
    if (!(box.T >= 0.0)) throw DomainError("whvf_bound: T must be >= 0");
    const double r0 = ds.r(0.0);
    if (!(box.inner > r0 && box.inner <= box.outer && box.outer < 1.0))
        throw DomainError("whvf_bound: band must satisfy r(0) < inner <= outer < 1");
    const double delta = std::min(box.inner - r0, 1.0 - box.outer);

    double sup = 0.0;
    if (spec.is_degenerate()) {
        const double q_max = (1.0 + box.outer) / (1.0 - box.outer);
        for (double t : bound_times(spec, box.T)) sup = std::max(sup, std::abs(spec.C()(t)) + spec.alpha()(t) * q_max);
        return sup;
    }
    const double rT = ds.r(box.T);
    const double p_max = 1.0 + (4.0 / delta) / (1.0 - r0);
    for (double t : bound_times(spec, box.T))
        sup = std::max(sup, std::abs(spec.C()(t)) + std::abs(ds.dr(t)) / rT * p_max);
    return sup;
}

double whvf_majorant(const FieldSpec& spec, double t, double margin) {
    if (!(margin > 0.0)) throw DomainError("whvf_majorant: margin must be > 0");
    const double c = std::abs(spec.C()(t));
    if (spec.is_degenerate()) {
        const double outer = 1.0 - margin;
        return c + spec.alpha()(t) * (1.0 + outer) / (1.0 - outer);
    }
    const double rt = spec.domain().r(t);
    return c + std::abs(spec.domain().log_rate(t)) * (1.0 + 4.0 / (margin * (1.0 - rt)));
}

FieldSpec rotation_field(double r, Driver C) {
    auto ds = validate(RadiusPath::constant(r), 1.0, 4);
    MeasurePath uniform = [](double) { return MeasurePair{CircleMeasure::uniform(1.0), CircleMeasure{}}; };
    FieldSpec f = FieldSpec::non_degenerate(std::move(ds), std::move(C), std::move(uniform));
    f.label = "rotation";
    return f;
}

double fixed_point_alpha(int N, double r, double r_star, const KernelEvalConfig& cfg) {
    const double R = std::pow(r, N);
    const double R_star = std::pow(r_star, N);
    const AnnulusParam RP(R);
    const double k_inner = villat_kernel(RP, R / R_star, cfg).real();
    const double k_outer = villat_kernel(RP, R_star, cfg).real();
    return (k_inner - 1.0) / (k_outer + k_inner - 1.0);
}

FieldSpec fixed_point_field(int N, double r0, double r_star, double alpha_offset, Driver C) {
    if (N < 1) throw std::invalid_argument("fixed_point_field: N must be >= 1");
    if (!(r0 > 0.0 && r0 < r_star && r_star < 1.0))
        throw DomainError("fixed_point_field: need 0 < r0 < r_star < 1");
    auto ds = validate(RadiusPath::exponential(r0, 1.0), 1.0, 4);
    std::vector<Atom> roots;
    for (int j = 0; j < N; ++j) roots.push_back({kTwoPi * j / N, 1.0 / N});
    const CircleMeasure mu(roots, 0.0);
    const RadiusPath path = ds.path();
    MeasurePath measures = [=](double t) {
        const double a = fixed_point_alpha(N, path.r(t), r_star) + alpha_offset;
        if (a < 0.0 || a > 1.0) throw NormalizationError("fixed_point_field: perturbed weight leaves [0,1]");
        return MeasurePair{mu.scaled(a), mu.scaled(1.0 - a)};
    };
    FieldSpec f = FieldSpec::non_degenerate(std::move(ds), std::move(C), std::move(measures));
    f.label = "fixed_points_N" + std::to_string(N);
    return f;
}

MeasurePath blend_measures(Driver lambda, Driver theta1, Driver theta2) {
    return [=](double t) {
        const double l = lambda(t);
        if (l < 0.0 || l > 1.0) throw NormalizationError("blend_measures: lambda(t) must lie in [0,1]");
        return MeasurePair{CircleMeasure::dirac(theta1(t), 1.0 - l), CircleMeasure::dirac(theta2(t), l)};
    };
}

FieldSpec degenerate_field(Driver C, Driver alpha, HerglotzPath q, std::vector<double> q_jumps) {
    auto ds = validate(RadiusPath::constant(0.0), 1.0, 4);
    FieldSpec f = FieldSpec::degenerate(std::move(ds), std::move(C), std::move(alpha), std::move(q), std::move(q_jumps));
    f.label = "degenerate";
    return f;
}

}  // namespace annulus
