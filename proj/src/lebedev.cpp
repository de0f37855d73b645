#include "annulus/lebedev.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "annulus/dopri.hpp"

namespace annulus {

namespace {

constexpr double kMtStepCap = 0.01;

Complex unit(double angle) { return std::polar(1.0, angle); }

detail::StepControl control(const IntegratorConfig& cfg, double h_cap) {
    const double h_max = std::min(cfg.h_max, h_cap);
    return {cfg.rel_tol, cfg.abs_tol, std::min(cfg.h_init, h_max), std::min(cfg.h_min, h_max), h_max};
}

}  // namespace

void LebedevSpec::validate() const {
    if (!(m > 0.0 && m < 1.0 && M > 1.0 && std::isfinite(M)))
        throw DomainError("LebedevSpec: need 0 < m < 1 < M");
}

double LebedevSpec::r(double t) const { return std::exp(-t) * m / M; }

std::vector<double> LebedevSpec::breakpoints() const {
    return merge_jumps({&lambda.jumps(), &kappa1.jumps(), &kappa2.jumps()});
}

double LebedevSpec::mt_rhs(double t, double mt, const KernelEvalConfig& cfg) const {
    const AnnulusParam rt(r(t));
    const double lam = lambda(t);
    const double k1 = villat_kernel(rt, unit(kappa1(t)) * mt, cfg).real();
    const double k2 = villat_kernel(rt, unit(-kappa2(t)) * (rt.value() / mt), cfg).real();
    return mt * (-lam * k1 - (1.0 - lam) * (1.0 - k2));
}

MtPath::MtPath(std::vector<double> t, std::vector<double> m, std::vector<double> dm_right, std::vector<double> dm_left,
               std::vector<double> r)
    : t_(std::move(t)), m_(std::move(m)), dr_(std::move(dm_right)), dl_(std::move(dm_left)), r_(std::move(r)) {
    if (t_.empty() || m_.size() != t_.size() || dr_.size() != t_.size() || dl_.size() != t_.size() ||
        r_.size() != t_.size())
        throw std::invalid_argument("MtPath: inconsistent sample arrays");
}

double MtPath::operator()(double t) const {
    if (!(t >= t_.front() && t <= t_.back()))
        throw DomainError("MtPath: t=" + std::to_string(t) + " outside the computed horizon");
    auto it = std::upper_bound(t_.begin(), t_.end(), t);
    if (it == t_.end()) return m_.back();
    const std::size_t i = static_cast<std::size_t>(it - t_.begin()) - 1;
    const double h = t_[i + 1] - t_[i];
    const double u = (t - t_[i]) / h;
    const double u2 = u * u, u3 = u2 * u;
    return (2 * u3 - 3 * u2 + 1) * m_[i] + (u3 - 2 * u2 + u) * h * dr_[i] + (-2 * u3 + 3 * u2) * m_[i + 1] +
           (u3 - u2) * h * dl_[i + 1];
}

double MtPath::min_band_margin() const {
    double best = 1.0;
    for (std::size_t i = 0; i < t_.size(); ++i) best = std::min({best, m_[i] - r_[i], 1.0 - m_[i]});
    return best;
}

MtPath integrate_mt(const LebedevSpec& spec, double t_end, const IntegratorConfig& cfg) {
    spec.validate();
    cfg.validate();
    if (!(t_end >= 0.0)) throw DomainError("integrate_mt: t_end must be >= 0");

    auto rhs = [&](double t, double m) {
        const double lam = spec.lambda(t);
        if (!(lam >= 0.0 && lam <= 1.0))
            throw RangeViolation("lambda(" + std::to_string(t) + ") = " + std::to_string(lam) + " outside [0,1]");
        return spec.mt_rhs(t, m, cfg.kernel);
    };
    // r(t) < m_t < 1 is a theorem; leaving the band means a bug, not a boundary exit
    auto guard = [&](double t, double m) { return m > spec.r(t) && m < 1.0; };

    auto res = detail::dopri_integrate<double>(rhs, guard, 0.0, spec.m, t_end, spec.breakpoints(),
                                               control(cfg, kMtStepCap));
    if (res.outcome == detail::StepOutcome::guard_exit) throw RangeViolation("m_t left (r(t), 1): " + res.message);
    if (res.outcome == detail::StepOutcome::step_failure) throw StepFailure("integrate_mt: " + res.message);

    std::vector<double> r;
    r.reserve(res.t.size());
    for (double t : res.t) r.push_back(spec.r(t));
    return MtPath(std::move(res.t), std::move(res.y), std::move(res.dy_right), std::move(res.dy_left), std::move(r));
}

Trajectory integrate_slit(const LebedevSpec& spec, const MtPath& path, Complex zeta, double t_end,
                          const IntegratorConfig& cfg, std::span<const double> stop_times) {
    spec.validate();
    cfg.validate();
    if (!(std::abs(zeta) > spec.m && std::abs(zeta) < spec.M)) throw DomainError("integrate_slit: need m < |zeta| < M");
    if (!(t_end >= 0.0 && t_end <= path.horizon())) throw DomainError("integrate_slit: t_end outside the m_t path");

    auto rhs = [&](double t, Complex f) {
        const double mt = path(t);
        const AnnulusParam rt(spec.r(t));
        const double lam = spec.lambda(t);
        const Complex k1 = unit(spec.kappa1(t)) * mt;
        const Complex k2 = unit(-spec.kappa2(t)) * (rt.value() / mt);
        const Complex a = villat_kernel(rt, k1 / f, cfg.kernel) - villat_kernel(rt, k1, cfg.kernel);
        const Complex b = villat_kernel(rt, k2 * f, cfg.kernel) - villat_kernel(rt, k2, cfg.kernel);
        return f * (lam * a - (1.0 - lam) * b);
    };
    // the guard of the canonical variable w = r f / m_t
    const double eps = cfg.boundary_guard;
    auto guard = [&](double t, Complex f) {
        const double w = spec.r(t) * std::abs(f) / path(t);
        return w < 1.0 - eps && w > spec.r(t) + eps;
    };

    std::vector<double> stops = spec.breakpoints();
    stops.insert(stops.end(), stop_times.begin(), stop_times.end());
    auto res = detail::dopri_integrate<Complex>(rhs, guard, 0.0, zeta, t_end, std::move(stops), control(cfg, cfg.h_max));

    Trajectory tr;
    tr.s = 0.0;
    tr.z0 = zeta;
    for (std::size_t i = 0; i < res.t.size(); ++i) tr.samples.push_back({res.t[i], res.y[i]});
    tr.validity_end = res.t.back();
    tr.message = res.message;
    tr.status = res.outcome == detail::StepOutcome::complete     ? TrajectoryStatus::complete
                : res.outcome == detail::StepOutcome::guard_exit ? TrajectoryStatus::blew_up_at_boundary
                                                                 : TrajectoryStatus::step_failure;
    return tr;
}

FieldSpec to_canonical_field(const LebedevSpec& spec, std::shared_ptr<const MtPath> path) {
    spec.validate();
    if (!path) throw std::invalid_argument("to_canonical_field: missing m_t path");
    auto ds = validate(RadiusPath::exponential(spec.m / spec.M, 1.0), path->horizon() > 0.0 ? path->horizon() : 1.0);
    const auto jumps = spec.breakpoints();
    auto C = Driver::custom(
        [spec, path](double t) {
            const double mt = (*path)(t);
            const AnnulusParam rt(spec.r(t));
            const double lam = spec.lambda(t);
            const double a = villat_kernel(rt, unit(-spec.kappa2(t)) * (rt.value() / mt)).imag();
            const double b = villat_kernel(rt, unit(spec.kappa1(t)) * mt).imag();
            return (1.0 - lam) * a - lam * b;
        },
        jumps, "lebedev_C");
    // mu1 = (1 - lambda) delta at kappa2, mu2 = lambda delta at kappa1
    auto f = FieldSpec::non_degenerate(std::move(ds), std::move(C),
                                       blend_measures(spec.lambda, spec.kappa2, spec.kappa1), jumps);
    f.label = "lebedev";
    return f;
}

Complex lebedev_from_family(const LebedevSpec& spec, const MtPath& path, const EvolutionFamily& family, Complex zeta,
                            double t) {
    return path(t) * family.evolve(0.0, t, zeta / spec.M) / spec.r(t);
}

std::vector<MonitorRow> long_time_monitor(const LebedevSpec& spec, const std::vector<Complex>& zetas,
                                          const std::vector<double>& horizons, const IntegratorConfig& cfg) {
    if (horizons.empty()) return {};
    for (std::size_t k = 1; k < horizons.size(); ++k)
        if (!(horizons[k] > horizons[k - 1])) throw std::invalid_argument("long_time_monitor: horizons must increase");
    if (!(horizons.front() >= 0.0)) throw std::invalid_argument("long_time_monitor: horizons must be >= 0");

    const MtPath path = integrate_mt(spec, horizons.back(), cfg);
    std::vector<MonitorRow> rows;
    for (std::size_t k = 0; k + 1 < horizons.size(); ++k) rows.push_back({horizons[k], horizons[k + 1], 0.0});
    for (const Complex zeta : zetas) {
        const Trajectory tr = integrate_slit(spec, path, zeta, horizons.back(), cfg, horizons);
        if (!tr.complete()) throw BoundaryExit("long_time_monitor: " + tr.message);
        std::vector<Complex> at;
        for (double T : horizons) {
            auto it = std::find_if(tr.samples.begin(), tr.samples.end(), [&](const auto& s) { return s.t == T; });
            at.push_back(it != tr.samples.end() ? it->w : zeta);
        }
        for (std::size_t k = 0; k + 1 < at.size(); ++k)
            rows[k].increment = std::max(rows[k].increment, std::abs(at[k + 1] - at[k]));
    }
    return rows;
}

}  // namespace annulus
