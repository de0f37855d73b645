#include "annulus/kernel.hpp"

#include <cmath>
#include <string>

namespace annulus {

namespace {

constexpr double kPoleGuard = 1e-9;
constexpr double kRingSlack = 1e-12;
// Above this geometric ratio the Laurent tails decay too slowly.
constexpr double kLaurentRatioMax = 0.9;
constexpr std::size_t kMinSamples = 16;

std::string fmt_z(Complex z) {
    return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
}

// Stops once two consecutive terms, inflated by the geometric tail factor,
// fall below tolerance.
class TailGuard {
public:
    TailGuard(double ratio, double rel_tol) : tail_factor_(1.0 / (1.0 - ratio)), tol_(rel_tol) {}

    bool done(double term_abs, double sum_abs) {
        if (term_abs * tail_factor_ < tol_ * std::max(1.0, sum_abs)) {
            ++quiet_;
        } else {
            quiet_ = 0;
        }
        return quiet_ >= 2;
    }

private:
    double tail_factor_;
    double tol_;
    int quiet_ = 0;
};

Complex laurent_sum(double r, Complex z, double ratio, const KernelEvalConfig& cfg) {
    const double r2 = r * r;
    const Complex inner = r2 / z;
    Complex zk = 1.0;
    Complex ik = 1.0;
    double r2k = 1.0;
    Complex sum = 1.0;
    TailGuard guard(ratio, cfg.rel_tol);
    for (int k = 1; k <= cfg.max_terms; ++k) {
        zk *= z;
        ik *= inner;
        r2k *= r2;
        const Complex term = 2.0 * (zk - ik) / (1.0 - r2k);
        sum += term;
        if (guard.done(std::abs(term), std::abs(sum))) return sum;
    }
    throw ConvergenceError("villat_kernel: Laurent series did not converge at z=" + fmt_z(z));
}

// (1+az)/(1-az) + (a+z)/(a-z) = 2a(1-z^2)/((1-az)(a-z)), a = r^{2 nu}.
Complex bilateral_sum(double r, Complex z, const KernelEvalConfig& cfg) {
    const double r2 = r * r;
    const Complex one_minus_z2 = 1.0 - z * z;
    Complex sum = schwarz_kernel(z);
    double a = 1.0;
    TailGuard guard(r2, cfg.rel_tol);
    for (int nu = 1; nu <= cfg.max_terms; ++nu) {
        a *= r2;
        const Complex term = 2.0 * a * one_minus_z2 / ((1.0 - a * z) * (a - z));
        sum += term;
        if (guard.done(std::abs(term), std::abs(sum))) return sum;
    }
    throw ConvergenceError("villat_kernel: pole sum did not converge at z=" + fmt_z(z));
}

}  // namespace

AnnulusParam::AnnulusParam(double r) : r_(r) {
    if (!(r >= 0.0 && r < 1.0)) throw DomainError("annulus radius must lie in [0,1), got " + std::to_string(r));
}

bool AnnulusParam::contains(Complex z) const {
    const double m = std::abs(z);
    return m > r_ && m < 1.0;
}

void KernelEvalConfig::validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-3)) throw std::invalid_argument("KernelEvalConfig: rel_tol must lie in (0, 1e-3]");
    if (max_terms < 8) throw std::invalid_argument("KernelEvalConfig: max_terms must be >= 8");
}

Complex schwarz_kernel(Complex z) { return (1.0 + z) / (1.0 - z); }

Complex villat_kernel(AnnulusParam rp, Complex z, const KernelEvalConfig& cfg) {
    cfg.validate();
    const double r = rp.value();
    const double m = std::abs(z);
    if (!std::isfinite(m)) throw DomainError("villat_kernel: non-finite argument");
    if (m > 1.0 + kRingSlack) throw DomainError("villat_kernel: |z| > 1 at z=" + fmt_z(z));
    if (std::abs(z - 1.0) < kPoleGuard) throw DomainError("villat_kernel: too close to the pole z=1");
    if (rp.degenerate()) return schwarz_kernel(z);

    const double r2 = r * r;
    if (m < r2 * (1.0 - kRingSlack)) throw DomainError("villat_kernel: |z| < r^2 at z=" + fmt_z(z));
    if (std::abs(z - r2) < kPoleGuard) throw DomainError("villat_kernel: too close to the pole z=r^2");

    const double ratio = std::max(m, r2 / m);
    if (ratio <= kLaurentRatioMax) return laurent_sum(r, z, ratio, cfg);
    return bilateral_sum(r, z, cfg);
}

Complex circle_mean(AnnulusParam r, double rho, std::span<const Complex> samples) {
    if (!(rho > r.value() && rho < 1.0)) throw DomainError("circle_mean: rho must lie in (r,1)");
    if (samples.size() < kMinSamples) throw std::invalid_argument("circle_mean: need at least 16 samples");
    Complex acc = 0.0;
    for (const Complex& s : samples) acc += s;
    return acc / static_cast<double>(samples.size());
}

Complex circle_mean(AnnulusParam r, double rho, const std::function<Complex(Complex)>& f,
                    std::size_t nodes) {
    if (!(rho > r.value() && rho < 1.0)) throw DomainError("circle_mean: rho must lie in (r,1)");
    const auto samples = sample_circle(f, rho, nodes);
    return circle_mean(r, rho, samples);
}

double omega(AnnulusParam r) {
    if (r.degenerate()) return 0.0;
    return -kPi / std::log(r.value());
}

std::vector<Complex> sample_circle(const std::function<Complex(Complex)>& g, double radius,
                                   std::size_t n) {
    std::vector<Complex> out;
    out.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double theta = kTwoPi * static_cast<double>(k) / static_cast<double>(n);
        out.push_back(g(std::polar(radius, theta)));
    }
    return out;
}

Complex villat_reconstruct(AnnulusParam rp, double rho, std::span<const double> outer_re,
                           std::span<const double> inner_re, double im_mean, Complex z,
                           const KernelEvalConfig& cfg) {
    const double r = rp.value();
    if (rp.degenerate()) throw DomainError("villat_reconstruct: needs r > 0");
    if (!rp.contains(z)) throw DomainError("villat_reconstruct: z outside the annulus");
    if (!(rho >= r && rho <= 1.0)) throw DomainError("villat_reconstruct: rho must lie in [r,1]");
    if (outer_re.size() < kMinSamples || inner_re.size() < kMinSamples)
        throw std::invalid_argument("villat_reconstruct: need at least 16 samples per circle");

    Complex outer = 0.0;
    const auto n_out = static_cast<double>(outer_re.size());
    for (std::size_t k = 0; k < outer_re.size(); ++k) {
        const Complex xi = std::polar(1.0, kTwoPi * static_cast<double>(k) / n_out);
        outer += villat_kernel(rp, z / xi, cfg) * outer_re[k];
    }
    outer /= n_out;

    Complex inner = 0.0;
    const auto n_in = static_cast<double>(inner_re.size());
    for (std::size_t k = 0; k < inner_re.size(); ++k) {
        const Complex xi = std::polar(1.0, kTwoPi * static_cast<double>(k) / n_in);
        inner += (villat_kernel(rp, r * xi / z, cfg) - 1.0) * inner_re[k];
    }
    inner /= n_in;

    return outer + inner + Complex(0.0, im_mean);
}

}  // namespace annulus
