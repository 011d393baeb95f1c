#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stablediff/model.hpp"
#include "stablediff/observable.hpp"
#include "stablediff/presets.hpp"
#include "stablediff/slowvar.hpp"
#include "stablediff/stable.hpp"

namespace stablediff {

enum class Regime { Diffusive, CriticalDiffusive, Levy, CriticalLevy };
const char* regime_name(Regime r);

struct TailSample {
  double x = 0;
  double ratio = 0;
};

struct ClassifyOptions {
  int grid_points = 16;      // quarter-octave steps down from the reach
  int trend_window = 5;      // trailing samples that must agree
  double trend_tol = 0.02;   // relative to |f_+| + |f_-|
};

struct RegimeReport {
  double alpha = 0;  // +inf when φ decays faster than any power
  SlowVar ell;
  double f_plus = 0;
  double f_minus = 0;
  Regime regime = Regime::Diffusive;
  bool f_in_L1mu = false;
  bool alpha_estimated = false;
  double rho = 0;  // +inf when divergent
  double mu_f = 0;
  std::vector<TailSample> tail_plus, tail_minus;
  std::vector<std::string> warnings;
};

RegimeReport classify_regime(const DiffusionModel& model, const Observable& f,
                             const std::optional<TailClaim>& claimed, const ClassifyOptions& opt = {});

// ρ = ∫_1^∞ (∫_x^∞ dv/(v^{3/2}ℓ(v)))² dx (+inf when divergent) and its
// truncation to [1, 1/ε].
double compute_rho(const SlowVar& ell);
double compute_rho_eps(const SlowVar& ell, double eps);

struct SlowVarTransforms {
  std::function<double(double)> L;  // ∫_1^x dv/(vℓ)
  std::function<double(double)> M;  // ∫_1^x (∫_v^∞ du/(u^{3/2}ℓ))² dv
  bool N_convergent = false;
  std::function<double(double)> N;  // ∫_x^∞ dv/(vℓ); throws Divergent when not convergent
};
SlowVarTransforms slow_var_transforms(const SlowVar& ell);

struct LimitLaw {
  Regime regime = Regime::Diffusive;
  double alpha = 2;
  double kappa = 1;
  double f_plus = 0;
  double f_minus = 0;
  SlowVar ell;
  bool f_in_L1mu = false;

  double sigma = 0;          // σ_α: the limit is σ_α·W or σ_α·S
  double skew = 0;           // β of the stable limit
  double bracket_const = 0;  // α = 1: log(2/(π(|f+|+|f-|))) + 2γ + log 2
  double asym_log = 0;       // α = 1: (f+ log|f+| + f- log|f-|)/(|f+|+|f-|)
  double rho = 0;
  double gamma_sq = -1;      // Poisson route, diffusive regimes with α > 2

  double lambda_alpha = 0;
  double levy_c_plus = 0;
  double levy_c_minus = 0;
  double generator_drift_a = 0;

  std::function<double(double)> xi_eps;    // exact centering, α = 1
  std::function<double(double)> zeta_eps;  // asymptotic centering factor, α = 1
  std::function<double(double)> rho_eps;   // α = 2 with ρ = ∞

  std::complex<double> z(double xi) const;
  // CF of the limit at time t.
  std::complex<double> cf(double xi, double t = 1) const;
  // Same law in the generic stable parametrisation.
  StableParams params() const;
  // Factor multiplying ∫_0^{t/ε} f(X_s)ds.
  double normalization(double eps) const;
  // Subtracted per unit t after normalising (ξ_ε for α = 1, else 0).
  double centering(double eps) const;
  // Asymptotic form κ(f_+ + f_-)ℓ(1/ε)ζ_ε.
  double xi_eps_asymptotic(double eps) const;
};

LimitLaw limit_law(const RegimeReport& report, const DiffusionModel& model, const Observable& f);

std::complex<double> limit_cf(const LimitLaw& law, double xi, double t);

struct PoissonSolution {
  std::function<double(double)> g;
  std::function<double(double)> g_prime;
  double gamma_sq = 0;
};

// g' = 2𝔰'(x)∫_x^∞ f·m; γ² = 4κ∫(∫_w^∞ φ)² dw evaluated on the ψ/φ table.
PoissonSolution poisson_solution(const DiffusionModel& model, const Observable& f);

// σ_α² = 4κ∫𝔰'(x)(∫_x^∞ f·m)² dx by nested x-space quadrature.
double diffusive_variance(const DiffusionModel& model, const Observable& f);

}  // namespace stablediff
