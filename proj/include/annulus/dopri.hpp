#pragma once

// Dormand-Prince 5(4) pair with PI step-size control and forced stop times.
// The right-hand side is evaluated at the left limit of each segment end, so
// right-continuous drivers with jumps at stop times keep the pair's order.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "annulus/errors.hpp"

namespace annulus::detail {

struct StepControl {
    double rel_tol;
    double abs_tol;
    double h_init;
    double h_min;
    double h_max;
};

enum class StepOutcome { complete, guard_exit, step_failure };

template <class State>
struct DopriResult {
    std::vector<double> t;
    std::vector<State> y;
    /// y'(t) from the right and from the left; equal except at stop times.
    std::vector<State> dy_right;
    std::vector<State> dy_left;
    StepOutcome outcome = StepOutcome::complete;
    std::string message;
};

inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
inline constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

/// `rhs(t, y)` may throw DomainError for stage points outside the domain;
/// such steps are rejected and retried smaller. `guard(t, y)` vets each
/// accepted point. `stops` must lie in (t0, t_end).
template <class State, class Rhs, class Guard>
DopriResult<State> dopri_integrate(Rhs&& rhs, Guard&& guard, double t0, State y0, double t_end,
                                   std::vector<double> stops, const StepControl& ctl) {
    DopriResult<State> out;
    out.t.push_back(t0);
    out.y.push_back(y0);
    if (t_end == t0) {
        const State d = rhs(t0, y0);
        out.dy_right.push_back(d);
        out.dy_left.push_back(d);
        return out;
    }

    std::erase_if(stops, [&](double b) { return !(b > t0 && b < t_end); });
    std::sort(stops.begin(), stops.end());
    stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
    stops.push_back(t_end);

    auto norm = [&](const State& err, const State& ya, const State& yb) {
        return std::abs(err) / (ctl.abs_tol + ctl.rel_tol * std::max(std::abs(ya), std::abs(yb)));
    };

    double t = t0;
    State y = y0;
    double h = std::min(ctl.h_init, ctl.h_max);
    double err_prev = 1e-4;
    bool first_node = true;

    for (double seg_end : stops) {
        const double last_inside = std::nextafter(seg_end, t);
        auto stage_time = [&](double x) { return std::min(x, last_inside); };

        State k1 = rhs(t, y);
        if (first_node) {
            out.dy_right.push_back(k1);
            out.dy_left.push_back(k1);
            first_node = false;
        } else {
            out.dy_right.back() = k1;
        }
        bool rejected_last = false;

        while (t < seg_end) {
            const double remaining = seg_end - t;
            const bool lands = h >= remaining * (1.0 - 1e-12);
            const double hs = lands ? remaining : h;

            State y_new{};
            State k7{};
            double err = std::numeric_limits<double>::infinity();
            bool stage_ok = true;
            try {
                const State k2 = rhs(stage_time(t + c2 * hs), y + hs * (a21 * k1));
                const State k3 = rhs(stage_time(t + c3 * hs), y + hs * (a31 * k1 + a32 * k2));
                const State k4 = rhs(stage_time(t + c4 * hs), y + hs * (a41 * k1 + a42 * k2 + a43 * k3));
                const State k5 =
                    rhs(stage_time(t + c5 * hs), y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
                const State k6 =
                    rhs(stage_time(t + hs), y + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
                y_new = y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
                k7 = rhs(stage_time(t + hs), y_new);
                const State e = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
                err = norm(e, y, y_new);
                if (!std::isfinite(err)) stage_ok = false;
            } catch (const DomainError&) {
                stage_ok = false;
            }

            if (stage_ok && err <= 1.0) {
                const double t_new = lands ? seg_end : t + hs;
                if (!guard(t_new, y_new)) {
                    out.outcome = StepOutcome::guard_exit;
                    out.message = "trajectory reached the boundary guard near t=" + std::to_string(t_new);
                    return out;
                }
                t = t_new;
                y = y_new;
                out.t.push_back(t);
                out.y.push_back(y);
                out.dy_left.push_back(k7);
                out.dy_right.push_back(k7);
                k1 = k7;

                double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.17) * std::pow(err_prev, 0.04);
                fac = std::clamp(fac, 0.2, rejected_last ? 1.0 : 10.0);
                err_prev = std::max(err, 1e-4);
                // A short landing step says nothing about the natural step size.
                if (!lands || hs >= h) h = std::min(hs * fac, ctl.h_max);
                rejected_last = false;
            } else {
                const double fac = stage_ok ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.25;
                h = hs * fac;
                rejected_last = true;
                if (h < ctl.h_min) {
                    out.outcome = StepOutcome::step_failure;
                    out.message = "step size fell below h_min near t=" + std::to_string(t);
                    return out;
                }
            }
        }
    }
    return out;
}

}  // namespace annulus::detail
