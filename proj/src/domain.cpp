#include "annulus/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace annulus {

RadiusPath RadiusPath::constant(double r0) {
    RadiusPath p;
    p.kind_ = Kind::constant;
    p.r0_ = r0;
    return p;
}

RadiusPath RadiusPath::exponential(double r0, double rate) {
    RadiusPath p;
    p.kind_ = Kind::exponential;
    p.r0_ = r0;
    p.rate_ = rate;
    return p;
}

RadiusPath RadiusPath::linear(double r0, double slope) {
    RadiusPath p;
    p.kind_ = Kind::linear;
    p.r0_ = r0;
    p.rate_ = slope;
    if (slope < 0.0 && r0 > 0.0) p.breakpoints_.push_back(-r0 / slope);
    return p;
}

RadiusPath RadiusPath::piecewise_exponential(double r0, std::vector<double> knots, std::vector<double> rates) {
    if (rates.size() != knots.size() + 1)
        throw std::invalid_argument("piecewise_exponential: need exactly one more rate than knots");
    for (std::size_t i = 0; i < knots.size(); ++i) {
        if (!(knots[i] > (i == 0 ? 0.0 : knots[i - 1])))
            throw std::invalid_argument("piecewise_exponential: knots must be positive and increasing");
    }
    RadiusPath p;
    p.kind_ = Kind::piecewise_exponential;
    p.r0_ = r0;
    p.knots_ = std::move(knots);
    p.rates_ = std::move(rates);
    p.knot_radii_.push_back(r0);
    double prev = 0.0;
    for (std::size_t i = 0; i < p.knots_.size(); ++i) {
        p.knot_radii_.push_back(p.knot_radii_.back() * std::exp(-p.rates_[i] * (p.knots_[i] - prev)));
        prev = p.knots_[i];
    }
    p.breakpoints_ = p.knots_;
    return p;
}

RadiusPath RadiusPath::custom(std::function<double(double)> r, std::function<double(double)> dr,
                              std::vector<double> breakpoints) {
    RadiusPath p;
    p.kind_ = Kind::custom;
    p.r_fn_ = std::move(r);
    p.dr_fn_ = std::move(dr);
    p.r0_ = p.r_fn_(0.0);
    std::sort(breakpoints.begin(), breakpoints.end());
    p.breakpoints_ = std::move(breakpoints);
    return p;
}

std::size_t RadiusPath::segment(double t) const {
    return static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), t) - knots_.begin());
}

double RadiusPath::r(double t) const {
    switch (kind_) {
        case Kind::constant: return r0_;
        case Kind::exponential: return r0_ * std::exp(-rate_ * t);
        case Kind::linear: return std::max(r0_ + rate_ * t, 0.0);
        case Kind::piecewise_exponential: {
            const std::size_t k = segment(t);
            const double start = k == 0 ? 0.0 : knots_[k - 1];
            return knot_radii_[k] * std::exp(-rates_[k] * (t - start));
        }
        case Kind::custom: return r_fn_(t);
    }
    return 0.0;
}

double RadiusPath::dr(double t) const {
    switch (kind_) {
        case Kind::constant: return 0.0;
        case Kind::exponential: return -rate_ * r(t);
        case Kind::linear: return r0_ + rate_ * t > 0.0 ? rate_ : 0.0;
        case Kind::piecewise_exponential: return -rates_[segment(t)] * r(t);
        case Kind::custom: return dr_fn_(t);
    }
    return 0.0;
}

double RadiusPath::log_rate(double t) const {
    switch (kind_) {
        case Kind::constant: return 0.0;
        case Kind::exponential: return -rate_;
        case Kind::piecewise_exponential: return -rates_[segment(t)];
        default: {
            const double rv = r(t);
            return rv > 0.0 ? dr(t) / rv : 0.0;
        }
    }
}

const char* to_string(Classification c) {
    switch (c) {
        case Classification::degenerate: return "degenerate";
        case Classification::non_degenerate: return "non_degenerate";
        case Classification::mixed: return "mixed";
    }
    return "?";
}

DomainSystem::DomainSystem(RadiusPath path, Classification cls, double mix_time, double horizon)
    : path_(std::move(path)), cls_(cls), mix_time_(mix_time), horizon_(horizon) {}

DomainSystem validate(const RadiusPath& path, double horizon, int grid) {
    if (!(horizon > 0.0)) throw std::invalid_argument("validate: horizon must be > 0");
    if (grid < 1) throw std::invalid_argument("validate: grid must be positive");

    const double step = horizon / grid;
    double prev = std::numeric_limits<double>::infinity();
    int first_zero = -1;
    for (int k = 0; k <= grid; ++k) {
        const double t = k * step;
        const double rv = path.r(t);
        if (!(rv >= 0.0 && rv < 1.0))
            throw RangeViolation("radius " + std::to_string(rv) + " outside [0,1) at t=" + std::to_string(t));
        if (rv > prev || path.dr(t) > 0.0)
            throw MonotonicityViolation("radius increases near t=" + std::to_string(t));
        if (rv == 0.0 && first_zero < 0) first_zero = k;
        prev = rv;
    }

    if (first_zero == 0) return DomainSystem(path, Classification::degenerate, 0.0, horizon);
    if (first_zero < 0)
        return DomainSystem(path, Classification::non_degenerate, std::numeric_limits<double>::infinity(), horizon);

    // Locate the first zero between the last positive and first zero sample.
    double lo = (first_zero - 1) * step;
    double hi = first_zero * step;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (path.r(mid) > 0.0 ? lo : hi) = mid;
    }
    return DomainSystem(path, Classification::mixed, hi, horizon);
}

bool contains(const DomainSystem& ds, Complex z, double t) {
    const double m = std::abs(z);
    return m > ds.r(t) && m < 1.0;
}

}  // namespace annulus
