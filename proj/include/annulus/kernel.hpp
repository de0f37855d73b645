#pragma once

// Villat kernel of the annulus {r < |z| < 1}, the modulus map and the
// boundary reconstruction formula built on top of them.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "annulus/common.hpp"

namespace annulus {

/// Inner radius of a canonical annulus. r = 0 is the punctured disk.
class AnnulusParam {
public:
    explicit AnnulusParam(double r);

    double value() const { return r_; }
    bool degenerate() const { return r_ == 0.0; }

    /// Strict membership r < |z| < 1 (0 < |z| < 1 when degenerate).
    bool contains(Complex z) const;

private:
    double r_;
};

struct KernelEvalConfig {
    double rel_tol = 1e-15;
    int max_terms = 20000;

    void validate() const;
};

/// K_r(z). Valid on the closed ring r^2 <= |z| <= 1 minus the poles at 1
/// and r^2. Inside the ring the Laurent series is summed; close to either
/// boundary circle the pairwise-grouped bilateral pole sum is used instead,
/// which converges geometrically in r^2 regardless of |z|.
Complex villat_kernel(AnnulusParam r, Complex z, const KernelEvalConfig& cfg = {});

/// Schwarz kernel (1+z)/(1-z).
Complex schwarz_kernel(Complex z);

/// Mean of f over |z| = rho from uniform samples f(rho * e^{2 pi i k / n}).
Complex circle_mean(AnnulusParam r, double rho, std::span<const Complex> samples);

/// Same, sampling f on a uniform grid with `nodes` points.
Complex circle_mean(AnnulusParam r, double rho, const std::function<Complex(Complex)>& f,
                    std::size_t nodes = 4096);

/// -pi / log r, and 0 at r = 0.
double omega(AnnulusParam r);

/// Uniform-grid samples g(radius * e^{2 pi i k / n}), k = 0..n-1.
std::vector<Complex> sample_circle(const std::function<Complex(Complex)>& g, double radius,
                                   std::size_t n);

/// Recovers f(z) from Re f on both boundary circles and the mean of Im f.
/// `outer_re[k]` = Re f(e^{i theta_k}), `inner_re[k]` = Re f(r e^{i theta_k})
/// on uniform grids (sizes may differ). `rho` is the circle on which the
/// caller took the imaginary mean.
Complex villat_reconstruct(AnnulusParam r, double rho, std::span<const double> outer_re,
                           std::span<const double> inner_re, double im_mean, Complex z,
                           const KernelEvalConfig& cfg = {});

}  // namespace annulus
