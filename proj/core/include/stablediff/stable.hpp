#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace stablediff {

inline constexpr double kEulerGamma = 0.57721566490153286061;
// ∫_0^1 (sin x - x)/x² dx + ∫_1^∞ sin x/x² dx = 1 - γ.
inline constexpr double kSineConstantA = 0.42278433509846713939;

// Stable-law constant 2^{α-2}π/(α sin(απ/2))·(α^α/Γ(α))².
double stable_lambda(double alpha);

// CF exp(t·[-ν|ξ|^α(1 - iβ tan(απ/2) sgn ξ) + iτξ]) for α ≠ 1 and
// exp(t·[-ν|ξ|(1 + iβ(2/π) sgn ξ log|ξ|) + iτξ]) for α = 1.
struct StableParams {
  double alpha = 2;
  double nu = 0;
  double beta = 0;
  double tau = 0;

  std::complex<double> exponent(double xi) const;
  std::complex<double> cf(double xi, double t = 1) const;
};

// Weights (a, b) attached to positive and negative excursions of a Brownian
// motion; the derived constants give the law of the excursion functional.
struct StableSpec {
  double alpha = 1;
  double a = 1;
  double b = 0;

  double c() const;
  double skew() const;
  double tau() const;  // α = 1 only
  StableParams params() const;
};

// Chambers–Mallows–Stuck draws with the CF of `p` at time t.
std::vector<double> sample_stable(const StableParams& p, double t, std::size_t n, std::uint64_t seed,
                                  std::uint32_t stream = 7);
std::vector<double> sample_stable_cf(const StableSpec& spec, double t, std::size_t n, std::uint64_t seed);

// Single CMS draw from a uniform angle u ∈ (0,1) and exponential e, unit scale.
double cms_standard(double alpha, double beta, double u, double e);

// Quadrature value of the constant A, for the startup self-check.
double sine_constant_by_quadrature();

}  // namespace stablediff
