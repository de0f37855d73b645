#include "annulus/lifting.hpp"

#include <cmath>
#include <string>

namespace annulus {

namespace {

constexpr double kPoleGuard = 1e-12;
constexpr int kMaxDepth = 40;

double log_radius(const DomainSystem& ds, double t) {
    if (ds.classification() == Classification::degenerate)
        throw Unsupported("strip lifting needs a non-degenerate system");
    const double r = ds.r(t);
    if (!(r > 0.0)) throw DomainError("strip lifting needs r(t) > 0 (t=" + std::to_string(t) + ")");
    return std::log(r);
}

struct Tracker {
    const EvolutionFamily& family;
    double total = 0.0;  // accumulated argument change
    int refinements = 0;

    // Adds the argument change of w along [a, b], bisecting while a single
    // step turns by pi/2 or more.
    void advance(double a, Complex wa, double b, Complex wb, int depth) {
        const double d = std::arg(wb / wa);
        if (std::abs(d) < 0.5 * kPi) {
            total += d;
            return;
        }
        if (depth >= kMaxDepth || !(b - a > 0.0) || std::nextafter(a, b) >= b) {
            if (std::abs(d) >= kPi)
                throw LiftingFailure("argument jump of " + std::to_string(d) + " near t=" + std::to_string(a));
            total += d;
            return;
        }
        const double mid = 0.5 * (a + b);
        const Complex wm = family.evolve(a, mid, wa);
        ++refinements;
        advance(a, wa, mid, wm, depth + 1);
        advance(mid, wm, b, wb, depth + 1);
    }
};

}  // namespace

Complex covering_W(double t, const DomainSystem& ds, Complex zeta) {
    if (!(zeta.real() > 0.0 && zeta.real() < 1.0)) throw DomainError("covering_W: zeta must satisfy 0 < Re zeta < 1");
    return std::exp(zeta * log_radius(ds, t));
}

Complex map_Q(Complex w, double omega) {
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw DomainError("map_Q: omega must be finite and >= 0");
    if (omega == 0.0) return Complex(0.0, 2.0) * w;
    const Complex x = omega * w;
    if (x.imag() == 0.0 && std::abs(x.real()) >= 1.0) throw DomainError("map_Q: omega*w on the branch cut");
    return Complex(0.0, 1.0 / omega) * std::log((1.0 + x) / (1.0 - x));
}

Complex map_R(Complex zeta, double omega) {
    if (!(omega >= 0.0) || !std::isfinite(omega)) throw DomainError("map_R: omega must be finite and >= 0");
    if (omega == 0.0) return Complex(0.0, -0.5) * zeta;
    const Complex half = 0.5 * omega * zeta;
    if (std::abs(std::cos(half)) < kPoleGuard) throw DomainError("map_R: zeta*omega at a pole");
    return Complex(0.0, -1.0 / omega) * std::tan(half);
}

Complex disk_to_strip_F(Complex z) {
    if (!(std::abs(z) < 1.0)) throw DomainError("disk_to_strip_F: |z| must be < 1");
    return std::log(Complex(0.0, 1.0) * (1.0 + z) / (1.0 - z)) / Complex(0.0, kPi);
}

LiftResult lift_to_strip(const EvolutionFamily& family, double s, double t, Complex zeta) {
    const DomainSystem& ds = family.domain();
    if (t < s) throw DomainError("lift_to_strip: need t >= s");
    const Complex z = covering_W(s, ds, zeta);
    if (t == s) return {zeta, z, 0.0, 0};

    const double log_rt = log_radius(ds, t);
    const Trajectory tr = family.trajectory(s, z, t);
    if (!tr.complete()) throw BoundaryExit("lift_to_strip: trajectory stopped at t=" + std::to_string(tr.validity_end));

    Tracker tracker{family};
    for (std::size_t i = 1; i < tr.samples.size(); ++i)
        tracker.advance(tr.samples[i - 1].t, tr.samples[i - 1].w, tr.samples[i].t, tr.samples[i].w, 0);

    const Complex w = tr.endpoint();
    const double arg0 = (zeta * log_radius(ds, s)).imag();
    const Complex log_w(std::log(std::abs(w)), arg0 + tracker.total);
    const Complex psi = log_w / log_rt;
    return {psi, w, std::abs(std::exp(psi * log_rt) - w), tracker.refinements};
}

double lift_commutation_check(const EvolutionFamily& family, double s, double t, Complex zeta) {
    const LiftResult lr = lift_to_strip(family, s, t, zeta);
    return std::abs(covering_W(t, family.domain(), lr.psi) - lr.phi);
}

}  // namespace annulus
