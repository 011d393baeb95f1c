#include "stablediff/stable.hpp"

#include <cmath>
#include <numbers>

#include "stablediff/error.hpp"
#include "stablediff/quadrature.hpp"
#include "stablediff/rng.hpp"

namespace stablediff {

namespace {

constexpr double kPi = std::numbers::pi;

double sgn(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }
double xlogx(double v) { return v == 0 ? 0 : v * std::log(std::fabs(v)); }

void check_alpha(double alpha) {
  if (!(alpha > 0 && alpha <= 2)) {
    throw Error(ErrorCode::InvalidAlpha, "stable index must lie in (0, 2]", {{"alpha", alpha}});
  }
}

}  // namespace

double stable_lambda(double alpha) {
  const double g = std::pow(alpha, alpha) / std::tgamma(alpha);
  return std::pow(2.0, alpha - 2) * kPi / (alpha * std::sin(alpha * kPi / 2)) * g * g;
}

std::complex<double> StableParams::exponent(double xi) const {
  using namespace std::complex_literals;
  const double s = sgn(xi);
  const double ax = std::fabs(xi);
  if (ax == 0) return 0.0;
  if (alpha == 1) {
    return -nu * ax * (1.0 + 1i * beta * (2 / kPi) * s * std::log(ax)) + 1i * tau * xi;
  }
  return -nu * std::pow(ax, alpha) * (1.0 - 1i * beta * std::tan(alpha * kPi / 2) * s) + 1i * tau * xi;
}

std::complex<double> StableParams::cf(double xi, double t) const { return std::exp(t * exponent(xi)); }

double StableSpec::c() const {
  check_alpha(alpha);
  // α = 2 follows the Gaussian limit σ² = 4(a² + b²), i.e. ν = σ²/2.
  if (alpha == 2) return 2 * (a * a + b * b);
  return stable_lambda(alpha) * (std::pow(std::fabs(a), alpha) + std::pow(std::fabs(b), alpha));
}

double StableSpec::skew() const {
  if (alpha == 2) return 0;
  const double pa = std::pow(std::fabs(a), alpha), pb = std::pow(std::fabs(b), alpha);
  if (pa + pb == 0) return 0;
  return (sgn(a) * pa + sgn(b) * pb) / (pa + pb);
}

double StableSpec::tau() const {
  if (alpha != 1) throw Error(ErrorCode::InvalidRequest, "the shift is defined only for alpha = 1");
  return -((a + b) * (2 * kEulerGamma + std::log(2.0)) + xlogx(a) + xlogx(b));
}

StableParams StableSpec::params() const {
  check_alpha(alpha);
  return {alpha, c(), skew(), alpha == 1 ? tau() : 0.0};
}

double cms_standard(double alpha, double beta, double u, double e) {
  const double v = kPi * (u - 0.5);
  if (alpha == 1) {
    const double h = kPi / 2 + beta * v;
    return (2 / kPi) * (h * std::tan(v) - beta * std::log((kPi / 2) * e * std::cos(v) / h));
  }
  const double t = beta * std::tan(kPi * alpha / 2);
  const double B = std::atan(t) / alpha;
  const double S = std::pow(1 + t * t, 1 / (2 * alpha));
  const double av = alpha * (v + B);
  return S * std::sin(av) / std::pow(std::cos(v), 1 / alpha) *
         std::pow(std::cos(v - av) / e, (1 - alpha) / alpha);
}

std::vector<double> sample_stable(const StableParams& p, double t, std::size_t n, std::uint64_t seed,
                                  std::uint32_t stream) {
  check_alpha(p.alpha);
  std::vector<double> out(n);
  const double scale = p.nu * t;
  for (std::size_t i = 0; i < n; ++i) {
    CounterRng rng(seed, i, stream);
    if (p.alpha == 2) {
      out[i] = std::sqrt(2 * scale) * rng.normal() + p.tau * t;
      continue;
    }
    const double u = rng.uniform();
    const double e = rng.exponential();
    const double x = cms_standard(p.alpha, p.beta, u, e);
    if (p.alpha == 1) {
      out[i] = scale * x + (2 / kPi) * p.beta * scale * std::log(scale) + p.tau * t;
    } else {
      out[i] = std::pow(scale, 1 / p.alpha) * x + p.tau * t;
    }
  }
  return out;
}

std::vector<double> sample_stable_cf(const StableSpec& spec, double t, std::size_t n, std::uint64_t seed) {
  return sample_stable(spec.params(), t, n, seed);
}

double sine_constant_by_quadrature() {
  auto near = [](long double x) {
    if (x < 1e-3L) return -x / 6 + x * x * x / 120;
    return (std::sin(x) - x) / (x * x);
  };
  long double total = integrate_or_throw<long double>(near, 0, 1, {1e-15, 1e-300, 1000});
  auto far = [](long double x) { return std::sin(x) / (x * x); };
  const long double two_pi = 2 * std::numbers::pi_v<long double>;
  total += integrate_or_throw<long double>(far, 1, two_pi, {1e-15, 1e-300, 1000});
  constexpr int kPeriods = 64;
  for (int k = 1; k < kPeriods; ++k) {
    total += integrate_or_throw<long double>(far, k * two_pi, (k + 1) * two_pi, {1e-15, 1e-300, 1000});
  }
  // ∫_X^∞ sin x/x² with X a multiple of 2π: 1/X² - 6/X⁴ + 120/X⁶ - ...
  const long double X = kPeriods * two_pi;
  const long double r = 1 / (X * X);
  total += r - 6 * r * r + 120 * r * r * r;
  return double(total);
}

}  // namespace stablediff
