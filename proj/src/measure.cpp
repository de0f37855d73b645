#include "annulus/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace annulus {

namespace {

constexpr double kCoalesceGap = 1e-12;

double wrap_angle(double a) {
    double w = std::fmod(a, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    if (w >= kTwoPi) w = 0.0;
    return w;
}

}  // namespace

CircleMeasure::CircleMeasure(std::vector<Atom> atoms, double uniform_mass) : uniform_(uniform_mass) {
    if (!(std::isfinite(uniform_mass) && uniform_mass >= 0.0))
        throw std::invalid_argument("CircleMeasure: uniform mass must be finite and >= 0");
    for (auto& a : atoms) {
        if (!(std::isfinite(a.mass) && a.mass >= 0.0))
            throw std::invalid_argument("CircleMeasure: atom masses must be finite and >= 0");
        if (!std::isfinite(a.angle)) throw std::invalid_argument("CircleMeasure: non-finite atom angle");
        a.angle = wrap_angle(a.angle);
    }
    std::erase_if(atoms, [](const Atom& a) { return a.mass == 0.0; });
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.angle < b.angle; });

    for (const auto& a : atoms) {
        if (!atoms_.empty() && a.angle - atoms_.back().angle < kCoalesceGap) {
            atoms_.back().mass += a.mass;
        } else {
            atoms_.push_back(a);
        }
    }
    // wrap-around neighbours near 0 and 2 pi
    if (atoms_.size() > 1 && atoms_.front().angle + kTwoPi - atoms_.back().angle < kCoalesceGap) {
        atoms_.front().mass += atoms_.back().mass;
        atoms_.pop_back();
    }
}

CircleMeasure CircleMeasure::dirac(double angle, double mass) { return CircleMeasure({{angle, mass}}, 0.0); }

CircleMeasure CircleMeasure::uniform(double mass) { return CircleMeasure({}, mass); }

double CircleMeasure::total_mass() const {
    double m = uniform_;
    for (const auto& a : atoms_) m += a.mass;
    return m;
}

CircleMeasure CircleMeasure::reflected() const {
    std::vector<Atom> out;
    out.reserve(atoms_.size());
    for (const auto& a : atoms_) out.push_back({a.angle == 0.0 ? 0.0 : kTwoPi - a.angle, a.mass});
    return CircleMeasure(std::move(out), uniform_);
}

CircleMeasure CircleMeasure::scaled(double factor) const {
    if (!(factor >= 0.0)) throw std::invalid_argument("CircleMeasure::scaled: factor must be >= 0");
    std::vector<Atom> out = atoms_;
    for (auto& a : out) a.mass *= factor;
    return CircleMeasure(std::move(out), uniform_ * factor);
}

bool approx_equal(const CircleMeasure& a, const CircleMeasure& b, double tol) {
    if (a.atoms().size() != b.atoms().size()) return false;
    if (std::abs(a.uniform_mass() - b.uniform_mass()) > tol) return false;
    for (std::size_t i = 0; i < a.atoms().size(); ++i) {
        const auto& x = a.atoms()[i];
        const auto& y = b.atoms()[i];
        double gap = std::abs(x.angle - y.angle);
        gap = std::min(gap, kTwoPi - gap);
        if (gap > tol || std::abs(x.mass - y.mass) > tol) return false;
    }
    return true;
}

ParametricPSpec::ParametricPSpec(AnnulusParam r, CircleMeasure mu1, CircleMeasure mu2)
    : r_(r), mu1_(std::move(mu1)), mu2_(std::move(mu2)) {
    if (r.degenerate()) throw DomainError("ParametricPSpec: the class V_r needs r > 0");
    const double total = mu1_.total_mass() + mu2_.total_mass();
    if (std::abs(total - 1.0) > kNormalizationTol)
        throw NormalizationError("ParametricPSpec: mu1(T) + mu2(T) = " + std::to_string(total) + ", expected 1");
}

Complex p_eval(const ParametricPSpec& spec, Complex z, const KernelEvalConfig& cfg) {
    const AnnulusParam r = spec.r();
    if (!r.contains(z)) throw DomainError("p_eval: z outside the annulus");
    Complex acc = spec.mu1().uniform_mass();
    for (const auto& a : spec.mu1().atoms()) {
        const Complex xi = std::polar(1.0, a.angle);
        acc += a.mass * villat_kernel(r, z / xi, cfg);
    }
    for (const auto& a : spec.mu2().atoms()) {
        const Complex xi = std::polar(1.0, a.angle);
        acc += a.mass * (1.0 - villat_kernel(r, r.value() * xi / z, cfg));
    }
    return acc;
}

double p_free_term(const ParametricPSpec& spec) { return spec.mu1().total_mass(); }

ParametricPSpec p_conjugate(const ParametricPSpec& spec) {
    return ParametricPSpec(spec.r(), spec.mu2().reflected(), spec.mu1().reflected());
}

PBoundsReport p_bounds_check(const ParametricPSpec& spec, Complex z, const KernelEvalConfig& cfg) {
    const AnnulusParam r = spec.r();
    if (!r.contains(z)) throw DomainError("p_bounds_check: z outside the annulus");
    const double rv = r.value();
    const double rho = std::abs(z);
    const Complex p = p_eval(spec, z, cfg);

    PBoundsReport rep{};
    rep.abs_p = std::abs(p);
    rep.neg_re_p = -p.real();
    rep.modulus_bound = spec.mu1().total_mass() + 2.0 / (1.0 - rv) * (rho / (1.0 - rho) + rv / (rho - rv));
    rep.re_bound = (villat_kernel(r, rv / rho, cfg).real() - 1.0) * spec.mu2().total_mass();
    // Round-off slack only; the bounds themselves are exact inequalities.
    const double slack = 1e-12;
    rep.modulus_ok = rep.abs_p <= rep.modulus_bound + slack * std::max(1.0, rep.modulus_bound);
    rep.re_ok = rep.neg_re_p <= rep.re_bound + slack * std::max(1.0, std::abs(rep.re_bound));
    return rep;
}

Complex caratheodory_p_eval(const CircleMeasure& mu, Complex z) {
    if (!(std::abs(z) < 1.0)) throw DomainError("caratheodory_p_eval: |z| must be < 1");
    if (std::abs(mu.total_mass() - 1.0) > kNormalizationTol)
        throw NormalizationError("caratheodory_p_eval: measure must have total mass 1");
    Complex acc = mu.uniform_mass();
    for (const auto& a : mu.atoms()) acc += a.mass * schwarz_kernel(z / std::polar(1.0, a.angle));
    return acc;
}

}  // namespace annulus
