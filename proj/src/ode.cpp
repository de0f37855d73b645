#include "annulus/ode.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "annulus/dopri.hpp"

namespace annulus {

void IntegratorConfig::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-3 && abs_tol > 0.0 && abs_tol <= 1e-3))
        throw std::invalid_argument("IntegratorConfig: tolerances must lie in (0, 1e-3]");
    if (!(h_min > 0.0 && h_min <= h_init && h_init <= h_max))
        throw std::invalid_argument("IntegratorConfig: need 0 < h_min <= h_init <= h_max");
    if (!(boundary_guard >= 0.0)) throw std::invalid_argument("IntegratorConfig: boundary_guard must be >= 0");
    kernel.validate();
}

IntegratorConfig IntegratorConfig::tightened(double factor) const {
    IntegratorConfig c = *this;
    c.rel_tol /= factor;
    c.abs_tol /= factor;
    return c;
}

const char* to_string(TrajectoryStatus s) {
    switch (s) {
        case TrajectoryStatus::complete: return "complete";
        case TrajectoryStatus::blew_up_at_boundary: return "blew_up_at_boundary";
        case TrajectoryStatus::step_failure: return "step_failure";
    }
    return "?";
}

Trajectory integrate(const FieldSpec& spec, double s, Complex z, double t_end, const IntegratorConfig& cfg,
                     std::span<const double> stop_times) {
    cfg.validate();
    if (!(t_end >= s)) throw DomainError("integrate: t_end must be >= s (forward time only)");
    if (!(s >= 0.0) || !contains(spec.domain(), z, s)) throw DomainError("integrate: start point outside D_s");

    const auto& ds = spec.domain();
    const double eps = cfg.boundary_guard;
    auto rhs = [&](double t, Complex w) { return field_eval(spec, w, t, cfg.kernel); };
    auto guard = [&](double t, Complex w) {
        const double m = std::abs(w);
        return m < 1.0 - eps && m > ds.r(t) + eps;
    };

    std::vector<double> stops = spec.breakpoints();
    stops.insert(stops.end(), stop_times.begin(), stop_times.end());
    const detail::StepControl ctl{cfg.rel_tol, cfg.abs_tol, cfg.h_init, cfg.h_min, cfg.h_max};
    auto res = detail::dopri_integrate<Complex>(rhs, guard, s, z, t_end, std::move(stops), ctl);

    Trajectory tr;
    tr.s = s;
    tr.z0 = z;
    tr.samples.reserve(res.t.size());
    for (std::size_t i = 0; i < res.t.size(); ++i) tr.samples.push_back({res.t[i], res.y[i]});
    tr.validity_end = res.t.back();
    tr.message = res.message;
    switch (res.outcome) {
        case detail::StepOutcome::complete: tr.status = TrajectoryStatus::complete; break;
        case detail::StepOutcome::guard_exit: tr.status = TrajectoryStatus::blew_up_at_boundary; break;
        case detail::StepOutcome::step_failure: tr.status = TrajectoryStatus::step_failure; break;
    }
    return tr;
}

EvolutionMap::EvolutionMap(FieldSpec spec, IntegratorConfig cfg, bool memoize)
    : spec_(std::move(spec)), cfg_(cfg), memoize_(memoize) {
    cfg_.validate();
}

Complex EvolutionMap::evolve(double s, double t, Complex z) const {
    if (t == s) {
        if (!contains(domain(), z, s)) throw DomainError("evolve: start point outside D_s");
        return z;
    }
    const auto key = std::make_tuple(s, t, z.real(), z.imag());
    if (memoize_) {
        std::lock_guard lock(memo_mutex_);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    const Trajectory tr = trajectory(s, z, t);
    if (tr.status == TrajectoryStatus::blew_up_at_boundary) throw BoundaryExit("evolve: " + tr.message);
    if (tr.status == TrajectoryStatus::step_failure) throw StepFailure("evolve: " + tr.message);
    const Complex w = tr.endpoint();
    if (memoize_) {
        std::lock_guard lock(memo_mutex_);
        memo_[key] = w;
    }
    return w;
}

Trajectory EvolutionMap::trajectory(double s, Complex z, double t_end, std::span<const double> stop_times) const {
    return integrate(spec_, s, z, t_end, cfg_, stop_times);
}

std::size_t EvolutionMap::memo_size() const {
    std::lock_guard lock(memo_mutex_);
    return memo_.size();
}

Complex evolve(const EvolutionFamily& map, double s, double t, Complex z) { return map.evolve(s, t, z); }

GridEvaluationError::GridEvaluationError(std::vector<GridFailure> failures)
    : std::runtime_error("evolve_grid: " + std::to_string(failures.size()) + " point(s) failed, first at index " +
                         std::to_string(failures.empty() ? 0 : failures.front().index) + ": " +
                         (failures.empty() ? std::string() : failures.front().message)),
      failures_(std::move(failures)) {}

unsigned worker_count() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("ANNULUS_LOEWNER_THREADS")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return n;
}

std::vector<Complex> evolve_grid(const EvolutionFamily& map, double s, double t, std::span<const Complex> grid) {
    std::vector<Complex> out(grid.size());
    std::vector<std::string> errors(grid.size());
    std::vector<char> failed(grid.size(), 0);

    auto work = [&](std::size_t begin, std::size_t stride) {
        for (std::size_t i = begin; i < grid.size(); i += stride) {
            try {
                out[i] = map.evolve(s, t, grid[i]);
            } catch (const std::exception& e) {
                failed[i] = 1;
                errors[i] = e.what();
            }
        }
    };

    const unsigned workers = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<std::size_t>(grid.size(), 1)));
    if (workers <= 1) {
        work(0, 1);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
    }

    std::vector<GridFailure> failures;
    for (std::size_t i = 0; i < grid.size(); ++i)
        if (failed[i]) failures.push_back({i, errors[i]});
    if (!failures.empty()) throw GridEvaluationError(std::move(failures));
    return out;
}

ContainmentCertificate containment_certificate(const FieldSpec& spec, double s, Complex z, double t_end,
                                               const IntegratorConfig& cfg) {
    if (spec.is_degenerate()) throw Unsupported("containment_certificate: non-degenerate specs only");
    const auto& ds = spec.domain();
    const Trajectory tr = integrate(spec, s, z, t_end, cfg);

    const double rs = ds.r(s);
    const double rho_s = std::abs(z);
    const double inv_s = rs / rho_s;
    const double a_up = 4.0 / ((rho_s - rs) * (1.0 - rs) * (1.0 - rs));
    const double a_low = 4.0 / ((inv_s - rs) * (1.0 - rs) * (1.0 - rs));
    const double slack = 1e-9 + 100.0 * cfg.rel_tol;

    ContainmentCertificate cert;
    cert.status = tr.status;
    for (const auto& smp : tr.samples) {
        const double rt = ds.r(smp.t);
        const double upper = 1.0 - (1.0 - rho_s) * std::exp(a_up * (rt - rs));
        const double inv_upper = 1.0 - (1.0 - inv_s) * std::exp(a_low * (rt - rs));
        const double lower = rt / inv_upper;
        const double m = std::abs(smp.w);
        cert.t.push_back(smp.t);
        cert.modulus.push_back(m);
        cert.upper.push_back(upper);
        cert.lower.push_back(lower);
        const double excess = std::max(m - upper, lower - m);
        cert.max_violation = std::max(cert.max_violation, excess);
        if (excess > slack) cert.violated = true;
    }
    return cert;
}

}  // namespace annulus
