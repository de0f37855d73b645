#include <cmath>
#include <memory>

#include "annulus/lebedev.hpp"
#include "annulus/verifier.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace annulus;

namespace {

LebedevSpec generic_spec() {
    LebedevSpec s;
    s.m = 0.5;
    s.M = 2.0;
    s.lambda = Driver::piecewise_constant({1.0}, {0.3, 0.8});
    s.kappa1 = Driver::linear(0.3, 0.5);
    s.kappa2 = Driver::cosine(1.0, 0.5, 1.0, 0.0);
    return s;
}

std::vector<Complex> seeds(const LebedevSpec& s, int n) {
    std::vector<Complex> out;
    for (int k = 0; k < n; ++k) {
        const double u = (k % 5 + 0.5) / 5.0;
        out.push_back(std::polar(s.m * std::pow(s.M / s.m, 0.1 + 0.8 * u), 0.4 + kTwoPi * k / n));
    }
    return out;
}

}  // namespace

TEST_CASE("spec validation") {
    LebedevSpec s = generic_spec();
    CHECK_NOTHROW(s.validate());
    s.M = 0.9;
    CHECK_THROWS_AS(s.validate(), DomainError);
    s = generic_spec();
    s.lambda = Driver::constant(1.5);
    CHECK_THROWS_AS(integrate_mt(s, 1.0), RangeViolation);
    CHECK(generic_spec().r(1.0) == doctest::Approx(std::exp(-1.0) * 0.25));
}

TEST_CASE("m_t path") {
    const auto spec = generic_spec();
    const auto path = integrate_mt(spec, 3.0);
    CHECK(path(0.0) == spec.m);
    CHECK(path.horizon() == 3.0);
    CHECK(path.min_band_margin() > 0.0);
    for (std::size_t i = 0; i < path.times().size(); ++i) {
        CHECK(path.values()[i] > spec.r(path.times()[i]));
        CHECK(path.values()[i] < 1.0);
    }
    CHECK_THROWS_AS(path(3.5), DomainError);

    // fine fixed-step oracle on the same equation
    std::function<double(double, double)> rhs = [&](double t, double m) { return spec.mt_rhs(t, m); };
    for (double t : {1.0, 2.2, 3.0}) {
        const double ref = oracle::rk4<double>(rhs, 0.0, spec.m, t, 1e-5, spec.breakpoints());
        CHECK(std::abs(path(t) - ref) < 1e-7);
    }
    // Hermite interpolant between accepted steps against the oracle
    const double mid = 0.5 * (path.times()[10] + path.times()[11]);
    CHECK(std::abs(path(mid) - oracle::rk4<double>(rhs, 0.0, spec.m, mid, 1e-5, spec.breakpoints())) < 1e-7);
}

TEST_CASE("one-sided driving keeps m_t inside the band") {
    LebedevSpec s;
    s.m = 0.9;
    s.M = 1.5;
    s.lambda = Driver::constant(0.0);
    s.kappa1 = Driver::constant(0.0);
    s.kappa2 = Driver::constant(0.0);
    const auto path = integrate_mt(s, 4.0);
    CHECK(path.min_band_margin() > 0.0);
    // sign of the right-hand side follows the kernel value at r/m_t
    for (double t : {0.5, 2.0, 3.5}) {
        const double mt = path(t);
        const double k = villat_kernel(AnnulusParam(s.r(t)), s.r(t) / mt).real();
        CHECK(s.mt_rhs(t, mt) == doctest::Approx(-mt * (1.0 - k)));
    }
    s.lambda = Driver::constant(1.0);
    s.m = 0.05;
    CHECK(integrate_mt(s, 4.0).min_band_margin() > 0.0);
}

TEST_CASE("slit trajectories and the canonical field") {
    const auto spec = generic_spec();
    auto path = std::make_shared<const MtPath>(integrate_mt(spec, 3.0));
    const auto field = to_canonical_field(spec, path);
    const EvolutionMap family(field);

    for (double t : {0.0, 0.9, 1.0, 2.4}) {
        const auto mp = field.measures(t);
        CHECK(mp.mu1.total_mass() + mp.mu2.total_mass() == doctest::Approx(1.0).epsilon(1e-15));
    }

    for (const Complex zeta : seeds(spec, 10)) {
        const auto tr = integrate_slit(spec, *path, zeta, 3.0);
        REQUIRE(tr.complete());
        CHECK(tr.samples.front().w == zeta);
        for (const auto& smp : tr.samples) CHECK(std::abs(smp.w) > 0.0);
        const Complex via_family = lebedev_from_family(spec, *path, family, zeta, 3.0);
        CHECK(std::abs(tr.endpoint() - via_family) < 1e-6);
        // within ten times the integrator tolerance, relative to |f|
        CHECK(std::abs(tr.endpoint() - via_family) < 10.0 * family.config().rel_tol * std::max(1.0, std::abs(via_family)));
    }
    CHECK_THROWS_AS(integrate_slit(spec, *path, 0.4, 1.0), DomainError);
    CHECK_THROWS_AS(integrate_slit(spec, *path, 1.0, 4.0), DomainError);
}

TEST_CASE("lambda one puts a single atom at kappa1") {
    LebedevSpec s = generic_spec();
    s.lambda = Driver::constant(1.0);
    auto path = std::make_shared<const MtPath>(integrate_mt(s, 1.0));
    const auto f = to_canonical_field(s, path);
    const auto mp = f.measures(0.5);
    CHECK(mp.mu1.empty());
    REQUIRE(mp.mu2.atoms().size() == 1);
    CHECK(mp.mu2.atoms()[0].angle == doctest::Approx(s.kappa1(0.5)));
    CHECK(mp.mu2.atoms()[0].mass == doctest::Approx(1.0));
}

TEST_CASE("image loops keep their index") {
    const auto spec = generic_spec();
    const auto path = integrate_mt(spec, 2.0);
    std::vector<Complex> loop;
    for (int k = 0; k < 256; ++k) {
        const auto tr = integrate_slit(spec, path, std::polar(1.0, kTwoPi * k / 256), 2.0);
        REQUIRE(tr.complete());
        loop.push_back(tr.endpoint());
    }
    CHECK(oracle::winding(loop) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("long time monitor") {
    LebedevSpec s;
    s.m = 0.6;
    s.M = 1.5;
    s.lambda = Driver::constant(0.5);
    const auto z = std::vector<Complex>{1.0, Complex(0.0, 0.9)};
    const auto rows = long_time_monitor(s, z, {0.0, 1.0, 2.0, 4.0});
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].t_from == 0.0);
    CHECK(rows[2].t_to == 4.0);
    for (const auto& r : rows) CHECK(std::isfinite(r.increment));
    const auto again = long_time_monitor(s, z, {0.0, 1.0, 2.0, 4.0});
    for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].increment == again[i].increment);
    MESSAGE("increments " << rows[0].increment << " " << rows[1].increment << " " << rows[2].increment);
    CHECK_THROWS_AS(long_time_monitor(s, z, {1.0, 0.5}), std::invalid_argument);
}
