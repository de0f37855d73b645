#include <cmath>

#include "annulus/domain.hpp"
#include "annulus/drivers.hpp"
#include "doctest.h"

using namespace annulus;

TEST_CASE("classification of the path kinds") {
    CHECK(validate(RadiusPath::exponential(0.2, 1.0), 5.0).classification() == Classification::non_degenerate);
    CHECK(validate(RadiusPath::constant(0.0), 5.0).classification() == Classification::degenerate);
    CHECK(validate(RadiusPath::constant(0.4), 5.0).classification() == Classification::non_degenerate);
    CHECK(validate(RadiusPath::piecewise_exponential(0.5, {1.0, 2.0}, {0.0, 2.0, 0.5}), 5.0).classification() ==
          Classification::non_degenerate);

    const auto mixed = validate(RadiusPath::linear(0.3, -0.3), 3.0, 64);
    CHECK(mixed.classification() == Classification::mixed);
    CHECK(mixed.mix_time() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("rejected paths") {
    CHECK_THROWS_AS(validate(RadiusPath::linear(0.2, 0.1), 2.0), MonotonicityViolation);
    CHECK_THROWS_AS(validate(RadiusPath::exponential(0.2, -0.5), 2.0), MonotonicityViolation);
    CHECK_THROWS_AS(validate(RadiusPath::constant(1.0), 2.0), RangeViolation);
    CHECK_THROWS_AS(validate(RadiusPath::constant(-0.1), 2.0), RangeViolation);
    CHECK_THROWS_AS(validate(RadiusPath::constant(0.5), 0.0), std::invalid_argument);
}

TEST_CASE("classification is stable under grid refinement") {
    const RadiusPath paths[] = {RadiusPath::exponential(0.3, 0.7), RadiusPath::constant(0.0),
                                RadiusPath::linear(0.5, -0.2), RadiusPath::piecewise_exponential(0.4, {0.5}, {1.0, 0.0})};
    for (const auto& p : paths) {
        for (int grid = 8; grid <= 4096; grid *= 2) {
            const auto a = validate(p, 4.0, grid);
            const auto b = validate(p, 4.0, 2 * grid);
            CHECK(a.classification() == b.classification());
            if (a.classification() == Classification::mixed) CHECK(a.mix_time() == doctest::Approx(b.mix_time()));
        }
    }
}

TEST_CASE("analytic derivatives") {
    const auto p = RadiusPath::exponential(0.2, 1.5);
    CHECK(p.dr(0.7) == doctest::Approx(-1.5 * p.r(0.7)));
    CHECK(p.log_rate(3.0) == -1.5);
    const auto pw = RadiusPath::piecewise_exponential(0.5, {1.0}, {0.5, 2.0});
    CHECK(pw.r(1.0) == doctest::Approx(0.5 * std::exp(-0.5)));
    CHECK(pw.r(1.5) == doctest::Approx(0.5 * std::exp(-0.5) * std::exp(-1.0)));
    CHECK(pw.log_rate(0.5) == -0.5);
    CHECK(pw.log_rate(1.0) == -2.0);
    const auto lin = RadiusPath::linear(0.4, -0.2);
    CHECK(lin.dr(1.0) == -0.2);
    CHECK(lin.dr(3.0) == 0.0);
    CHECK(lin.log_rate(1.0) == doctest::Approx(-0.2 / 0.2));
}

TEST_CASE("contains") {
    const auto fixed = validate(RadiusPath::constant(0.3), 2.0);
    CHECK(contains(fixed, 0.5, 1.0));
    CHECK_FALSE(contains(fixed, 0.2, 1.0));
    CHECK_FALSE(contains(fixed, Complex(0.0, 1.0), 1.0));
    const auto mixed = validate(RadiusPath::linear(0.3, -0.3), 3.0);
    CHECK(contains(mixed, 0.05, 2.0));
    CHECK_FALSE(contains(mixed, 0.05, 0.0));
    const auto degen = validate(RadiusPath::constant(0.0), 1.0);
    CHECK(contains(degen, 1e-8, 0.5));
    CHECK_FALSE(contains(degen, 0.0, 0.5));
}

TEST_CASE("a point stays inside once inside") {
    const auto ds = validate(RadiusPath::exponential(0.6, 0.8), 5.0);
    for (double m : {0.1, 0.3, 0.5, 0.59, 0.61, 0.9}) {
        bool inside = false;
        for (int k = 0; k <= 500; ++k) {
            const bool now = contains(ds, m, 5.0 * k / 500);
            if (inside) CHECK(now);
            inside = inside || now;
        }
    }
}

TEST_CASE("drivers") {
    const auto pc = Driver::piecewise_constant({1.0, 2.0}, {0.1, 0.5, 0.9});
    CHECK(pc(0.5) == 0.1);
    CHECK(pc(1.0) == 0.5);
    CHECK(pc(std::nextafter(1.0, 0.0)) == 0.1);
    CHECK(pc(5.0) == 0.9);
    CHECK(pc.jumps().size() == 2);
    CHECK(Driver::cosine(1.0, 2.0, 3.0, 0.5)(0.2) == doctest::Approx(1.0 + 2.0 * std::cos(0.6 + 0.5)));
    CHECK(pc.scaled(-2.0)(1.5) == -1.0);
    CHECK(Driver()(3.0) == 0.0);
    CHECK_THROWS_AS(Driver::piecewise_constant({1.0}, {0.1}), std::invalid_argument);
    CHECK_THROWS_AS(Driver::piecewise_constant({2.0, 1.0}, {0.1, 0.2, 0.3}), std::invalid_argument);
}
