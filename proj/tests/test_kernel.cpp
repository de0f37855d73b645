#include <cmath>
#include <random>
#include <vector>

#include "annulus/kernel.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace annulus;

TEST_CASE("villat kernel anchor values") {
    CHECK(std::abs(villat_kernel(AnnulusParam(0.3), 0.3) - 1.0) < 1e-12);
    CHECK(std::abs(villat_kernel(AnnulusParam(0.3), -1.0)) < 1e-12);
    CHECK(villat_kernel(AnnulusParam(0.0), 0.5) == Complex(3.0, 0.0));

    // Frozen from the symmetric pole sum at 40 digits.
    const Complex expected(0.41888918962947659, 1.7248994218399509);
    const Complex got = villat_kernel(AnnulusParam(0.4), Complex(0.0, 0.7));
    CHECK(std::abs(got - expected) < 1e-13);
    CHECK(std::abs(got - oracle::villat_symmetric(0.4, Complex(0.0, 0.7))) < 1e-13);
}

TEST_CASE("villat kernel matches the symmetric sum across the ring") {
    std::mt19937_64 rng(7);
    for (double r : {0.05, 0.3, 0.6, 0.85, 0.95}) {
        for (int i = 0; i < 200; ++i) {
            const Complex z = oracle::random_in_ring(rng, r * r * 1.001, 0.999);
            if (std::abs(z - 1.0) < 1e-3 || std::abs(z - r * r) < 1e-3) continue;
            const Complex a = villat_kernel(AnnulusParam(r), z);
            const Complex b = oracle::villat_symmetric(r, z, 2000);
            CHECK(std::abs(a - b) < 1e-10 * (1.0 + std::abs(b)));
        }
    }
}

TEST_CASE("kernel identities at the symmetric points") {
    for (int i = 1; i <= 8; ++i) {
        const double r = 0.1 * i;
        const AnnulusParam rp(r);
        CHECK(std::abs(villat_kernel(rp, r) - 1.0) < 1e-10);
        CHECK(std::abs(villat_kernel(rp, -r) - 1.0) < 1e-10);
        CHECK(std::abs(villat_kernel(rp, -1.0)) < 1e-10);
    }
}

TEST_CASE("kernel is increasing on [-1,-r] and [r, 1-eps]") {
    for (double r : {0.1, 0.4, 0.7}) {
        const AnnulusParam rp(r);
        double prev = -1e300;
        for (int k = 0; k < 100; ++k) {
            const double x = -1.0 + (1.0 - r) * k / 99.0;
            const double v = villat_kernel(rp, x).real();
            CHECK(v > prev);
            prev = v;
        }
        prev = -1e300;
        for (int k = 0; k < 100; ++k) {
            const double x = r + (1.0 - 1e-3 - r) * k / 99.0;
            const double v = villat_kernel(rp, x).real();
            CHECK(v > prev);
            prev = v;
        }
    }
}

TEST_CASE("root-of-unity identity") {
    std::mt19937_64 rng(11);
    for (int N : {2, 3, 5}) {
        for (double r : {0.2, 0.5}) {
            for (int i = 0; i < 50; ++i) {
                const Complex z = oracle::random_in_ring(rng, r * 1.01, 0.98);
                Complex lhs = 0.0;
                for (int j = 0; j < N; ++j) lhs += villat_kernel(AnnulusParam(r), z * std::polar(1.0, kTwoPi * j / N));
                const Complex rhs = double(N) * villat_kernel(AnnulusParam(std::pow(r, N)), std::pow(z, N));
                CHECK(std::abs(lhs - rhs) < 1e-9);
            }
        }
    }
}

TEST_CASE("halving the tolerance does not move the value") {
    std::mt19937_64 rng(3);
    KernelEvalConfig coarse{1e-8, 20000};
    KernelEvalConfig fine{5e-9, 20000};
    for (int i = 0; i < 100; ++i) {
        const double r = 0.5;
        const Complex z = oracle::random_in_ring(rng, 0.3, 0.95);
        const Complex a = villat_kernel(AnnulusParam(r), z, coarse);
        const Complex b = villat_kernel(AnnulusParam(r), z, fine);
        CHECK(std::abs(a - b) < coarse.rel_tol * (1.0 + std::abs(a)));
    }
}

TEST_CASE("kernel domain errors") {
    CHECK_THROWS_AS(villat_kernel(AnnulusParam(0.5), 1.5), DomainError);
    CHECK_THROWS_AS(villat_kernel(AnnulusParam(0.5), 0.1), DomainError);
    CHECK_THROWS_AS(villat_kernel(AnnulusParam(0.5), 1.0 - 1e-10), DomainError);
    CHECK_THROWS_AS(villat_kernel(AnnulusParam(0.5), 0.25 + 1e-10), DomainError);
    CHECK_THROWS_AS(villat_kernel(AnnulusParam(0.0), 1.0), DomainError);
    CHECK_THROWS_AS(AnnulusParam(1.0), DomainError);
    CHECK_THROWS_AS(AnnulusParam(-0.1), DomainError);
    CHECK_THROWS_AS(villat_kernel(AnnulusParam(0.5), 0.5, KernelEvalConfig{1e-2, 100}), std::invalid_argument);
    CHECK_THROWS_AS(villat_kernel(AnnulusParam(0.999), 0.999, KernelEvalConfig{1e-15, 8}), ConvergenceError);
}

TEST_CASE("circle mean") {
    const AnnulusParam rp(0.3);
    const auto k = [&](Complex z) { return villat_kernel(rp, z); };
    CHECK(std::abs(circle_mean(rp, 0.6, k, 4096) - 1.0) < 1e-10);
    for (double rho : {0.35, 0.5, 0.8, 0.95}) CHECK(std::abs(circle_mean(rp, rho, k, 4096) - 1.0) < 1e-10);
    CHECK(std::abs(circle_mean(rp, 0.5, [](Complex) { return Complex(2.0, -1.0); }, 64) - Complex(2.0, -1.0)) < 1e-15);
    CHECK(std::abs(circle_mean(AnnulusParam(0.0), 0.5, [](Complex z) { return z; }, 64)) < 1e-15);
    CHECK_THROWS_AS(circle_mean(rp, 0.2, k), DomainError);
    CHECK_THROWS_AS(circle_mean(rp, 1.0, k), DomainError);
    std::vector<Complex> few(8, 1.0);
    CHECK_THROWS_AS(circle_mean(rp, 0.5, few), std::invalid_argument);
}

TEST_CASE("omega") {
    CHECK(omega(AnnulusParam(0.0)) == 0.0);
    CHECK(std::abs(omega(AnnulusParam(std::exp(-kPi))) - 1.0) < 1e-15);
    CHECK(omega(AnnulusParam(0.2)) < omega(AnnulusParam(0.5)));
}

namespace {

Complex reconstruct(const oracle::LaurentPoly& f, double r, Complex z, std::size_t n) {
    std::vector<double> outer(n), inner(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex xi = std::polar(1.0, kTwoPi * k / n);
        outer[k] = f(xi).real();
        inner[k] = f(r * xi).real();
    }
    const double rho = std::sqrt(r);
    const auto ims = sample_circle([&](Complex w) { return Complex(f(w).imag(), 0.0); }, rho, n);
    const double im_mean = circle_mean(AnnulusParam(r), rho, ims).real();
    return villat_reconstruct(AnnulusParam(r), rho, outer, inner, im_mean, z);
}

}  // namespace

TEST_CASE("villat reconstruction of Laurent polynomials") {
    // constant
    {
        std::vector<double> outer(1024, 2.0), inner(1024, 2.0);
        const Complex got = villat_reconstruct(AnnulusParam(0.4), 0.6, outer, inner, -0.5, Complex(0.5, 0.2));
        CHECK(std::abs(got - Complex(2.0, -0.5)) < 1e-12);
    }
    {
        const oracle::LaurentPoly f{1, {1.0}};
        CHECK(std::abs(reconstruct(f, 0.3, 0.6, 8192) - 0.6) < 1e-8);
    }
    {
        const oracle::LaurentPoly f{-1, {3.0, 0.0, 0.0, 1.0}};  // z^2 + 3/z
        std::mt19937_64 rng(5);
        for (int i = 0; i < 10; ++i) {
            const Complex z = oracle::random_in_ring(rng, 0.45, 0.9);
            CHECK(std::abs(reconstruct(f, 0.4, z, 8192) - f(z)) < 1e-8);
        }
    }
    CHECK_THROWS_AS(villat_reconstruct(AnnulusParam(0.4), 0.6, std::vector<double>(64), std::vector<double>(64), 0.0, 0.3),
                    DomainError);
    CHECK_THROWS_AS(villat_reconstruct(AnnulusParam(0.4), 0.3, std::vector<double>(64), std::vector<double>(64), 0.0, 0.5),
                    DomainError);
}
