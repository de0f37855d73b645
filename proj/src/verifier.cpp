#include "annulus/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "annulus/lifting.hpp"

namespace annulus {

namespace {

constexpr double kRoundoffFloor = 1e-13;

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << x;
    return os.str();
}

struct Draws {
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> unit{0.0, 1.0};

    explicit Draws(std::uint64_t seed) : rng(seed) {}

    double u() { return unit(rng); }

    // Point of D_s kept 5% of the band width away from both circles.
    Complex point(const DomainSystem& ds, double s) {
        const double r = ds.r(s);
        const double m = r + (1.0 - r) * (0.05 + 0.9 * u());
        return std::polar(m, kTwoPi * u());
    }
};

struct Triple {
    double s, u, t;
    Complex z;
};

std::vector<Triple> draw_triples(const DomainSystem& ds, const ProbePlan& plan) {
    Draws d(plan.seed);
    std::vector<Triple> out;
    for (int i = 0; i < plan.triples; ++i) {
        double a[3] = {plan.t0 + plan.horizon * d.u(), plan.t0 + plan.horizon * d.u(), plan.t0 + plan.horizon * d.u()};
        std::sort(a, a + 3);
        out.push_back({a[0], a[1], a[2], d.point(ds, a[0])});
    }
    return out;
}

double ef2_residual(const EvolutionFamily& family, const std::vector<Triple>& triples) {
    double worst = 0.0;
    for (const auto& tr : triples) {
        const Complex direct = family.evolve(tr.s, tr.t, tr.z);
        const Complex composed = family.evolve(tr.u, tr.t, family.evolve(tr.s, tr.u, tr.z));
        worst = std::max(worst, std::abs(direct - composed));
    }
    return worst;
}

double band_margin(const DomainSystem& ds, double t, Complex w) {
    const double m = std::abs(w);
    return std::min(m - ds.r(t), 1.0 - m);
}

// Largest ratio variation / integrated majorant over the pieces of one run.
double ef3_ratio(const EvolutionFamily& family, const FieldSpec& spec, double s, Complex z, double T, int pieces) {
    std::vector<double> stops;
    for (int k = 1; k < pieces; ++k) stops.push_back(s + (T - s) * k / pieces);
    const Trajectory tr = family.trajectory(s, z, T, stops);
    if (!tr.complete()) return std::numeric_limits<double>::infinity();

    const DomainSystem& ds = family.domain();
    double worst = 0.0;
    std::size_t i = 0;
    for (int k = 0; k < pieces; ++k) {
        const double a = k == 0 ? s : stops[k - 1];
        const double b = k + 1 == pieces ? T : stops[k];
        while (i + 1 < tr.samples.size() && tr.samples[i].t < a) ++i;
        std::size_t j = i;
        double margin = band_margin(ds, a, tr.samples[i].w);
        while (j + 1 < tr.samples.size() && tr.samples[j].t < b) {
            ++j;
            margin = std::min(margin, band_margin(ds, tr.samples[j].t, tr.samples[j].w));
        }
        double k_max = 0.0;
        for (std::size_t m = i; m <= j; ++m) {
            const double tm = std::clamp(tr.samples[m].t, a, std::nextafter(b, a));
            k_max = std::max(k_max, whvf_majorant(spec, tm, 0.5 * margin));
        }
        const double variation = std::abs(tr.samples[j].w - tr.samples[i].w);
        const double bound = k_max * (b - a);
        worst = std::max(worst, bound > 0.0 ? variation / bound : (variation > 0.0 ? 1e300 : 0.0));
        i = j;
    }
    return worst;
}

}  // namespace

bool VerificationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

const Check* VerificationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

void VerificationReport::merge(const VerificationReport& other) {
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
    std::stable_sort(checks.begin(), checks.end(), [](const Check& a, const Check& b) { return a.name < b.name; });
}

VerificationReport check_ef_axioms(const EvolutionFamily& family, const ProbePlan& plan) {
    VerificationReport rep;
    rep.seed = plan.seed;
    const DomainSystem& ds = family.domain();
    Draws d(plan.seed ^ 0x5bd1e995u);

    double ef1 = 0.0;
    for (int i = 0; i < plan.points; ++i) {
        const double s = plan.t0 + plan.horizon * d.u();
        const Complex z = d.point(ds, s);
        ef1 = std::max(ef1, std::abs(family.evolve(s, s, z) - z));
    }
    rep.add({"ef1_identity", ef1 == 0.0, ef1, 0.0, ""});

    const double ef2 = ef2_residual(family, draw_triples(ds, plan));
    rep.add({"ef2_composition", ef2 < plan.ef2_tol, ef2, plan.ef2_tol, std::to_string(plan.triples) + " triples"});

    const FieldSpec* spec = family.field();
    if (!spec) {
        rep.add({"ef3_majorant", true, 0.0, 1.0, "skipped: family has no generating field"});
        return rep;
    }
    double ef3 = 0.0;
    const int runs = std::max(1, std::min(plan.points, 5));
    const double T = plan.t0 + plan.horizon;
    for (int i = 0; i < runs; ++i) {
        const double s = plan.t0 + 0.5 * plan.horizon * d.u();
        ef3 = std::max(ef3, ef3_ratio(family, *spec, s, d.point(ds, s), T, plan.partition));
    }
    rep.add({"ef3_majorant", ef3 <= 1.0, ef3, 1.0, "variation / integrated majorant"});
    return rep;
}

VerificationReport check_ef2_convergence(const FieldSpec& spec, const IntegratorConfig& base, const ProbePlan& plan,
                                         double min_ratio) {
    VerificationReport rep;
    rep.seed = plan.seed;
    const auto triples = draw_triples(spec.domain(), plan);
    const double coarse = ef2_residual(EvolutionMap(spec, base), triples);
    const double fine = ef2_residual(EvolutionMap(spec, base.tightened(10.0)), triples);
    const double shrink = coarse > 0.0 ? fine / coarse : 0.0;
    const bool floor = coarse < kRoundoffFloor;
    rep.add({"ef2_convergence", floor || shrink <= 1.0 / min_ratio, shrink, 1.0 / min_ratio,
             "residual " + fmt(coarse) + " -> " + fmt(fine) + (floor ? " (round-off floor)" : "")});
    return rep;
}

VerificationReport check_index_preservation(const EvolutionFamily& family, double s, double t, double loop_radius,
                                            int n_samples) {
    VerificationReport rep;
    constexpr int kCap = 65536;
    int n = std::max(n_samples, 3);
    while (true) {
        std::vector<Complex> loop(n);
        for (int k = 0; k < n; ++k) loop[k] = std::polar(loop_radius, kTwoPi * k / n);
        const auto image = evolve_grid(family, s, t, loop);
        double total = 0.0, jump = 0.0;
        for (int k = 0; k < n; ++k) {
            const double da = std::arg(image[(k + 1) % n] / image[k]);
            total += da;
            jump = std::max(jump, std::abs(da));
        }
        if (jump >= 0.5 * kPi && n < kCap) {
            n *= 2;
            continue;
        }
        const double winding = total / kTwoPi;
        const double res = std::abs(winding - 1.0);
        const bool coarse = jump >= 0.5 * kPi;
        rep.add({"index_preservation", !coarse && res < 1e-6, res, 1e-6,
                 std::to_string(n) + " samples" + (coarse ? ", sampling too coarse" : "")});
        return rep;
    }
}

VerificationReport check_injectivity(const EvolutionFamily& family, double s, double t,
                                     const std::vector<Complex>& grid) {
    VerificationReport rep;
    const auto image = evolve_grid(family, s, t, grid);
    double sep = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < image.size(); ++i)
        for (std::size_t j = i + 1; j < image.size(); ++j) sep = std::min(sep, std::abs(image[i] - image[j]));
    rep.add({"injectivity", sep > 1e-9, sep, 1e-9, "minimum separation must exceed tol"});
    return rep;
}

double fixed_point_drift(const EvolutionFamily& family, int N, double r_star, double horizon) {
    double drift = 0.0;
    for (int j = 0; j < N; ++j) {
        const Complex zj = std::polar(r_star, kTwoPi * j / N);
        const Trajectory tr = family.trajectory(0.0, zj, horizon);
        if (!tr.complete()) return std::numeric_limits<double>::infinity();
        for (const auto& smp : tr.samples) drift = std::max(drift, std::abs(smp.w - zj));
    }
    return drift;
}

VerificationReport check_fixed_points(int N, double r0, double r_star, double horizon, const IntegratorConfig& cfg,
                                      double tol, double control_min) {
    VerificationReport rep;
    const double drift = fixed_point_drift(EvolutionMap(fixed_point_field(N, r0, r_star), cfg), N, r_star, horizon);
    rep.add({"fixed_points", drift < tol, drift, tol, "N=" + std::to_string(N)});
    const double control =
        fixed_point_drift(EvolutionMap(fixed_point_field(N, r0, r_star, 0.05), cfg), N, r_star, horizon);
    rep.add({"fixed_points_negative_control", control > control_min, control, control_min,
             "alpha + 0.05 must drift by more than tol"});
    return rep;
}

namespace {

double inversion_residual(const EvolutionMap& map, const EvolutionMap& conj, double s, double t, Complex z) {
    if (t == s) return 0.0;
    const DomainSystem& ds = map.domain();
    const Complex lhs = conj.evolve(s, t, z);
    const Complex rhs = ds.r(t) / map.evolve(s, t, ds.r(s) / z);
    return std::abs(lhs - rhs);
}

}  // namespace

double inversion_symmetry_residual(const EvolutionMap& map, double s, double t, Complex z) {
    if (t == s) return 0.0;
    const EvolutionMap conj(field_conjugate(map.spec()), map.config());
    return inversion_residual(map, conj, s, t, z);
}

VerificationReport check_inversion_symmetry(const EvolutionMap& map, const ProbePlan& plan, double tol) {
    VerificationReport rep;
    rep.seed = plan.seed;
    const EvolutionMap conj(field_conjugate(map.spec()), map.config());
    Draws d(plan.seed ^ 0x9e3779b9u);
    double worst = 0.0;
    for (int i = 0; i < plan.points; ++i) {
        double a = plan.t0 + plan.horizon * d.u(), b = plan.t0 + plan.horizon * d.u();
        if (a > b) std::swap(a, b);
        worst = std::max(worst, inversion_residual(map, conj, a, b, d.point(map.domain(), a)));
    }
    rep.add({"inversion_symmetry", worst < tol, worst, tol, ""});
    return rep;
}

VerificationReport check_degenerate_extension(const EvolutionFamily& family, double s, double t) {
    VerificationReport rep;
    if (family.domain().classification() != Classification::degenerate)
        throw Unsupported("check_degenerate_extension: system is not degenerate");
    double excess = 0.0;
    bool monotone = true;
    for (double angle : {0.0, 2.1, 4.4}) {
        double prev = std::numeric_limits<double>::infinity();
        for (double m : {1e-2, 1e-3, 1e-4}) {
            const double v = std::abs(family.evolve(s, t, std::polar(m, angle)));
            excess = std::max(excess, v / m - 1.0);
            monotone = monotone && v < prev;
            prev = v;
        }
    }
    // |phi(z)| <= |z| holds exactly for the flow; allow integration error
    const double tol = 1e-8;
    rep.add({"degenerate_extension", monotone && excess <= tol, std::max(excess, 0.0), tol,
             monotone ? "|phi(z)|/|z| <= 1 along |z| -> 0" : "not decreasing as |z| -> 0"});
    return rep;
}

VerificationReport check_lift_commutation(const EvolutionFamily& family, double s, double t, int probes, double tol) {
    VerificationReport rep;
    double worst = 0.0;
    for (int k = 0; k < probes; ++k) {
        const Complex zeta(0.05 + 0.9 * ((k * 7) % probes + 0.5) / probes, -3.0 + 6.0 * k / std::max(probes - 1, 1));
        worst = std::max(worst, lift_commutation_check(family, s, t, zeta));
    }
    rep.add({"lift_commutation", worst < tol, worst, tol, std::to_string(probes) + " strip probes"});
    return rep;
}

VerificationReport check_containment(const FieldSpec& spec, const ProbePlan& plan, const IntegratorConfig& cfg) {
    VerificationReport rep;
    rep.seed = plan.seed;
    Draws d(plan.seed ^ 0x2545f491u);
    const double T = plan.t0 + plan.horizon;
    int exits = 0, violated = 0;
    double violation = 0.0;
    for (int i = 0; i < plan.points; ++i) {
        const double s = plan.t0 + 0.5 * plan.horizon * d.u();
        const Complex z = d.point(spec.domain(), s);
        if (spec.is_degenerate()) {
            if (!integrate(spec, s, z, T, cfg).complete()) ++exits;
            continue;
        }
        const auto cert = containment_certificate(spec, s, z, T, cfg);
        if (cert.status != TrajectoryStatus::complete) ++exits;
        violation = std::max(violation, cert.max_violation);
        if (cert.violated) ++violated;
    }
    rep.add({"containment_boundary_exits", exits == 0, static_cast<double>(exits), 0.0,
             std::to_string(plan.points) + " trajectories"});
    const double slack = 1e-9 + 100.0 * cfg.rel_tol;
    if (!spec.is_degenerate())
        rep.add({"containment_envelope", violated == 0, violation, slack, "largest excess over the envelope"});
    return rep;
}

VerificationReport verify_spec(const FieldSpec& spec, const ProbePlan& plan, const IntegratorConfig& cfg,
                               std::optional<FixedPointPlan> fixed_points) {
    VerificationReport rep;
    rep.scenario = spec.label;
    rep.seed = plan.seed;
    const EvolutionMap map(spec, cfg);
    const DomainSystem& ds = spec.domain();
    const double s = plan.t0, t = plan.t0 + plan.horizon;

    rep.merge(check_ef_axioms(map, plan));
    const double r = ds.r(s);
    rep.merge(check_index_preservation(map, s, t, 0.5 * (1.0 + r)));
    std::vector<Complex> grid;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) grid.push_back(std::polar(r + (1.0 - r) * (0.05 + 0.09 * i), kTwoPi * j / 10.0));
    rep.merge(check_injectivity(map, s, t, grid));
    rep.merge(check_containment(spec, plan, cfg));
    if (spec.is_degenerate()) {
        rep.merge(check_degenerate_extension(map, s, t));
    } else {
        rep.merge(check_inversion_symmetry(map, plan));
        rep.merge(check_lift_commutation(map, s, t));
    }
    if (fixed_points) {
        // drift is measured on the family under test; the control uses the reference field
        constexpr double tol = 1e-6;
        const auto ref = check_fixed_points(fixed_points->N, fixed_points->r0, fixed_points->r_star, t, cfg, tol);
        VerificationReport fp;
        const double drift = fixed_point_drift(map, fixed_points->N, fixed_points->r_star, t);
        fp.add({"fixed_points", drift < tol, drift, tol, "N=" + std::to_string(fixed_points->N)});
        fp.add(*ref.find("fixed_points_negative_control"));
        rep.merge(fp);
    }
    return rep;
}

Complex FaultInjectedFamily::evolve(double s, double t, Complex z) const {
    const Complex w = base_.evolve(s, t, z);
    return t > s ? w + offset_ : w;
}

Trajectory FaultInjectedFamily::trajectory(double s, Complex z, double t_end, std::span<const double> stop_times) const {
    Trajectory tr = base_.trajectory(s, z, t_end, stop_times);
    for (auto& smp : tr.samples)
        if (smp.t > s) smp.w += offset_;
    return tr;
}

}  // namespace annulus
