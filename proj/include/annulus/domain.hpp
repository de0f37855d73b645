#pragma once

// Canonical domain systems t -> {r(t) < |z| < 1} with non-increasing r.

#include <functional>
#include <vector>

#include "annulus/common.hpp"

namespace annulus {

/// Radius path with an analytic derivative. All kinds are piecewise C^1.
class RadiusPath {
public:
    enum class Kind { constant, exponential, linear, piecewise_exponential, custom };

    static RadiusPath constant(double r0);
    /// r0 * exp(-rate * t)
    static RadiusPath exponential(double r0, double rate);
    /// max(r0 + slope * t, 0); slope < 0 gives a mixed system.
    static RadiusPath linear(double r0, double slope);
    /// Continuous path with rate[k] on [knots[k-1], knots[k]) (knots[-1] = 0).
    static RadiusPath piecewise_exponential(double r0, std::vector<double> knots, std::vector<double> rates);
    static RadiusPath custom(std::function<double(double)> r, std::function<double(double)> dr,
                             std::vector<double> breakpoints = {});

    Kind kind() const { return kind_; }
    double r(double t) const;
    double dr(double t) const;
    /// r'(t) / r(t), computed without division for the exponential kinds.
    /// Only meaningful where r(t) > 0.
    double log_rate(double t) const;
    const std::vector<double>& breakpoints() const { return breakpoints_; }

    /// Parameters as given to the factory (r0, rate/slope, ...).
    double r0() const { return r0_; }
    double rate() const { return rate_; }
    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& rates() const { return rates_; }

private:
    Kind kind_ = Kind::constant;
    double r0_ = 0.0;
    double rate_ = 0.0;
    std::vector<double> knots_;
    std::vector<double> rates_;
    std::vector<double> knot_radii_;
    std::function<double(double)> r_fn_;
    std::function<double(double)> dr_fn_;
    std::vector<double> breakpoints_;

    std::size_t segment(double t) const;
};

enum class Classification { degenerate, non_degenerate, mixed };

const char* to_string(Classification c);

class DomainSystem {
public:
    DomainSystem(RadiusPath path, Classification cls, double mix_time, double horizon);

    const RadiusPath& path() const { return path_; }
    Classification classification() const { return cls_; }
    /// First time with r = 0 (mixed systems only, else +inf or 0).
    double mix_time() const { return mix_time_; }
    double horizon() const { return horizon_; }

    double r(double t) const { return path_.r(t); }
    double dr(double t) const { return path_.dr(t); }
    double log_rate(double t) const { return path_.log_rate(t); }

private:
    RadiusPath path_;
    Classification cls_;
    double mix_time_;
    double horizon_;
};

/// Samples the path on `grid` + 1 points of [0, horizon], checks range and
/// monotonicity and classifies the system. Throws RangeViolation or
/// MonotonicityViolation.
DomainSystem validate(const RadiusPath& path, double horizon, int grid = 1024);

/// r(t) < |z| < 1 (0 < |z| < 1 where r(t) = 0).
bool contains(const DomainSystem& ds, Complex z, double t);

}  // namespace annulus
