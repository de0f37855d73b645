#pragma once

// Standard scenario battery shared by the engine, verifier and acceptance tests.

#include <cmath>
#include <string>
#include <vector>

#include "annulus/field.hpp"

namespace battery {

using namespace annulus;

struct Scenario {
    std::string name;
    FieldSpec spec;
    double horizon;
};

inline FieldSpec blend_spec() {
    auto ds = validate(RadiusPath::exponential(0.3, 0.5), 4.0);
    auto measures = blend_measures(Driver::piecewise_constant({1.0}, {0.3, 0.7}), Driver::linear(0.2, 1.0),
                                   Driver::linear(2.0, -0.5));
    auto f = FieldSpec::non_degenerate(ds, Driver::cosine(0.0, 1.0, 1.0, 0.0), measures, {1.0});
    f.label = "blend";
    return f;
}

inline FieldSpec piecewise_radius_spec() {
    auto ds = validate(RadiusPath::piecewise_exponential(0.4, {0.8, 1.6}, {0.3, 0.0, 0.6}), 4.0);
    auto measures = [](double t) {
        return MeasurePair{CircleMeasure({{0.5 * t, 0.25}}, 0.15), CircleMeasure({{3.0 - t, 0.35}, {1.0, 0.25}}, 0.0)};
    };
    auto f = FieldSpec::non_degenerate(ds, Driver::piecewise_constant({1.2}, {0.5, -0.8}), measures);
    f.label = "piecewise_radius";
    return f;
}

inline FieldSpec degenerate_radial_spec() {
    auto f = degenerate_field(Driver(), Driver::constant(1.0), [](double) { return CircleMeasure::uniform(1.0); });
    f.label = "degenerate_radial";
    return f;
}

inline FieldSpec degenerate_generic_spec() {
    auto f = degenerate_field(Driver::constant(0.6), Driver::cosine(0.6, 0.3, 2.0, 0.0), [](double t) {
        return CircleMeasure({{t, 0.5}, {std::sin(t) + 2.0, 0.3}}, 0.2);
    });
    f.label = "degenerate_generic";
    return f;
}

inline FieldSpec rotation_spec(bool sine) {
    auto f = rotation_field(0.3, sine ? Driver::cosine(0.0, 1.0, 1.0, 0.0) : Driver::constant(1.0));
    f.label = sine ? "rotation_sin" : "rotation_linear";
    return f;
}

/// All scenarios; horizons are kept short enough for a single core.
inline std::vector<Scenario> all() {
    return {
        {"rotation_linear", rotation_spec(false), 3.0},
        {"rotation_sin", rotation_spec(true), 3.0},
        {"fixed_points_N1", fixed_point_field(1, 0.2, 0.5), 3.0},
        {"fixed_points_N3", fixed_point_field(3, 0.2, 0.5), 3.0},
        {"blend", blend_spec(), 3.0},
        {"piecewise_radius", piecewise_radius_spec(), 3.0},
        {"degenerate_radial", degenerate_radial_spec(), 2.0},
        {"degenerate_generic", degenerate_generic_spec(), 2.0},
    };
}

/// Start points for a scenario at time s: a spread over the annulus D_s.
inline std::vector<Complex> probe_points(const FieldSpec& f, double s, int n) {
    const double r = f.domain().r(s);
    std::vector<Complex> out;
    for (int k = 0; k < n; ++k) {
        const double u = (k % 5 + 0.5) / 5.0;
        const double m = r + (1.0 - r) * (0.1 + 0.8 * u);
        out.push_back(std::polar(m, 0.37 + kTwoPi * k / n));
    }
    return out;
}

}  // namespace battery
