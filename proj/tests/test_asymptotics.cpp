#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "stablediff/asymptotics.hpp"
#include "stablediff/error.hpp"
#include "stablediff/presets.hpp"

using namespace stablediff;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

LimitLaw law_for(const char* spec) {
  const Preset p = make_preset(spec);
  return limit_law(classify_regime(p.model, p.f, p.claim), p.model, p.f);
}

// Lévy-regime law with chosen tail constants on a model with κ = 1/2.
LimitLaw synthetic_levy(double alpha, double fp, double fm) {
  static const Preset p = make_preset("kinetic(3)");
  RegimeReport r;
  r.alpha = alpha;
  r.f_plus = fp;
  r.f_minus = fm;
  r.regime = Regime::Levy;
  r.f_in_L1mu = alpha > 1;
  return limit_law(r, p.model, p.f);
}

}  // namespace

TEST_SUITE("asymptotics") {

TEST_CASE("kinetic beta=3 tail constants") {
  const Preset p = make_preset("kinetic(3)");
  const RegimeReport r = classify_regime(p.model, p.f, p.claim);
  CHECK(r.regime == Regime::Levy);
  CHECK(r.alpha == doctest::Approx(4.0 / 3));
  CHECK(r.ell.is_one());
  CHECK(r.f_plus == doctest::Approx(std::pow(4.0, -1.25)).epsilon(1e-12));
  CHECK(r.f_minus == doctest::Approx(-std::pow(4.0, -1.25)).epsilon(1e-12));
  CHECK(r.f_in_L1mu);
}

TEST_CASE("driftless beta=5/2, gamma=1 sits at alpha=2") {
  const Preset p = make_preset("driftless(2.5,1)");
  const RegimeReport r = classify_regime(p.model, p.f, p.claim);
  CHECK(r.alpha == doctest::Approx(2.0));
  CHECK(r.f_plus == doctest::Approx(1.0));
  CHECK(r.f_minus == doctest::Approx(-1.0));
  CHECK(r.regime == Regime::CriticalDiffusive);
  // m = (1+|x|)^{-5/2}, ∫m = 4/3.
  CHECK(p.model.kappa() == doctest::Approx(0.75).epsilon(1e-8));
  const LimitLaw law = limit_law(r, p.model, p.f);
  CHECK(law.sigma * law.sigma == doctest::Approx(4 * 0.75 * 2).epsilon(1e-8));
}

TEST_CASE("heavy-tailed claim with alpha=1/2 is echoed") {
  const Preset p = make_preset("heavy_tailed(1,0.5,1,-0.5)");
  const RegimeReport r = classify_regime(p.model, p.f, p.claim);
  CHECK(r.alpha == doctest::Approx(0.5));
  CHECK(r.regime == Regime::Levy);
  CHECK(r.f_plus == doctest::Approx(p.claim->f_plus));
  CHECK(r.f_minus == doctest::Approx(p.claim->f_minus));
  CHECK_FALSE(r.f_in_L1mu);
}

TEST_CASE("a wrong claim is refused") {
  const Preset p = make_preset("kinetic(3)");
  TailClaim c = *p.claim;
  c.f_plus *= 1.5;
  CHECK(code_of([&] { (void)classify_regime(p.model, p.f, c); }) == ErrorCode::ClassificationFailed);
}

TEST_CASE("rho for constant and log-power slow variation") {
  CHECK(std::isinf(compute_rho(slow_one())));
  for (double eps : {1e-2, 1e-4, 1e-8}) {
    CHECK(compute_rho_eps(slow_one(), eps) == doctest::Approx(4 * std::log(1 / eps)).epsilon(1e-8));
  }
  CHECK(compute_rho_eps(slow_one(), 1.0) == 0);

  // With v = e^s: ρ = ∫_0^∞ (∫_0^∞ e^{-r/2}/(1+s+r)² dr)² ds.
  auto inner = [](long double s) {
    return oracle::simpson_to_inf([s](long double r) { return std::exp(-r / 2) / ((1 + s + r) * (1 + s + r)); }, 0,
                                  2000);
  };
  const long double rho_ref = oracle::simpson_to_inf(
      [&](long double s) {
        const long double j = inner(s);
        return j * j;
      },
      0, 2000);
  CHECK(compute_rho(slow_log_power(2)) == doctest::Approx(double(rho_ref)).epsilon(1e-6));
}

TEST_CASE("slow-variation transforms") {
  const auto one = slow_var_transforms(slow_one());
  for (double x : {2.0, 10.0, 1e6}) CHECK(one.L(x) == doctest::Approx(std::log(x)).epsilon(1e-10));
  CHECK_FALSE(one.N_convergent);
  CHECK(code_of([&] { (void)one.N(10); }) == ErrorCode::Divergent);

  const auto two = slow_var_transforms(slow_log_power(2));
  CHECK(two.N_convergent);
  for (double x : {1.0, 10.0, 1e5}) CHECK(two.N(x) == doctest::Approx(1 / (1 + std::log(x))).epsilon(1e-8));

  // ℓ ≡ 1 gives M(x) = 4 log x.
  CHECK(one.M(1e3) == doctest::Approx(4 * std::log(1e3)).epsilon(1e-8));

  for (double lambda : {0.5, 2.0}) {
    double prev = INFINITY;
    for (int k = 2; k <= 12; k += 2) {
      const double x = std::pow(10.0, k);
      const double gap = std::fabs(one.L(lambda * x) / one.L(x) - 1);
      CHECK(gap < prev);
      prev = gap;
    }
    CHECK(prev < 0.03);
  }
}

TEST_CASE("symmetric Levy law has z = 1 and a real CF") {
  const LimitLaw law = law_for("kinetic(3)");
  for (double xi : {-3.0, -0.1, 0.2, 5.0}) {
    CHECK(law.z(xi).real() == 1.0);
    CHECK(law.z(xi).imag() == 0.0);
    const auto cf = law.cf(xi, 2.0);
    CHECK(cf.imag() == 0.0);
    CHECK(cf.real() == doctest::Approx(std::exp(-2 * std::pow(std::fabs(law.sigma * xi), 4.0 / 3))));
  }
  CHECK(law.cf(0, 1) == std::complex<double>(1, 0));
}

TEST_CASE("Levy scale constant") {
  // σ^α = κλ_α(|f+|^α + |f-|^α), λ_α = 2^{α-2}π/(α sin(απ/2))(α^α/Γ(α))².
  for (double a : {0.5, 0.8, 4.0 / 3, 1.7}) {
    const double g = std::pow(a, a) / std::tgamma(a);
    const double lambda = std::pow(2.0, a - 2) * kPi / (a * std::sin(a * kPi / 2)) * g * g;
    CHECK(stable_lambda(a) == doctest::Approx(lambda).epsilon(1e-14));
    const LimitLaw law = synthetic_levy(a, 0.7, -0.2);
    CHECK(std::pow(law.sigma, a) ==
          doctest::Approx(0.5 * lambda * (std::pow(0.7, a) + std::pow(0.2, a))).epsilon(1e-12));
  }
  // κ = 1, a = 1, b = 0 at α = 1/2: σ^α = λ_{1/2} = 2^{-3/2}π·2√2·(1/(2π)) = 1/2.
  CHECK(StableSpec{0.5, 1, 0}.c() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("z symmetry and CF modulus on random arguments") {
  std::mt19937_64 gen(17);
  std::uniform_real_distribution<double> u(-50, 50);
  for (const LimitLaw& law : {synthetic_levy(1.5, 0.3, -0.9), synthetic_levy(0.6, 1.0, 0.0), law_for("kinetic(2,1,0.5)")}) {
    for (int k = 0; k < 1000; ++k) {
      const double xi = u(gen);
      const auto z = law.z(xi), zm = law.z(-xi);
      CHECK(z.real() == 1.0);
      CHECK(zm.imag() == doctest::Approx(-z.imag()));
      CHECK(std::abs(law.cf(xi, std::fabs(u(gen)) / 10)) <= 1.0 + 1e-15);
    }
  }
}

TEST_CASE("Levy triplet structure") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 100; ++k) {
    const double fp = u(gen), fm = u(gen), a = 0.3 + 1.6 * std::fabs(u(gen)) / 2;
    if (std::fabs(a - 1) < 1e-3) continue;
    const LimitLaw law = synthetic_levy(a, fp, fm);
    const double pp = std::pow(std::fabs(fp), a), pm = std::pow(std::fabs(fm), a);
    CHECK(law.levy_c_plus + law.levy_c_minus == doctest::Approx(law.lambda_alpha * (pp + pm)).epsilon(1e-12));
    CHECK(law.levy_c_plus == doctest::Approx(law.lambda_alpha * ((fp > 0 ? pp : 0) + (fm > 0 ? pm : 0))));
    CHECK(law.levy_c_plus >= 0);
    CHECK(law.levy_c_minus >= 0);
  }
}

TEST_CASE("alpha=1 CF matches a term-by-term evaluation") {
  const LimitLaw law = law_for("kinetic(2,1,0.5)");
  REQUIRE(law.regime == Regime::CriticalLevy);
  const double fp = law.f_plus, fm = law.f_minus, F = std::fabs(fp) + std::fabs(fm);
  const double gamma = 0.57721566490153286061;
  CHECK(law.sigma == doctest::Approx(law.kappa * kPi / 2 * F));
  for (double xi : {-4.0, -0.3, 0.05, 1.0, 7.0}) {
    for (double t : {0.5, 1.0, 3.0}) {
      const double eta = law.sigma * xi;
      const double beta = (fp + fm) / F;
      const double bracket = std::log(2 * std::fabs(eta) / (kPi * F)) + 2 * gamma + std::log(2.0);
      const double asym = (fp * std::log(std::fabs(fp)) + fm * std::log(std::fabs(fm))) / F;
      const std::complex<double> z(1, (2 / kPi) * (eta > 0 ? 1 : -1) * (beta * bracket + asym));
      const auto expected = std::exp(-t * std::fabs(eta) * z);
      CHECK(std::abs(law.cf(xi, t) - expected) < 1e-13);
      // The generic stable parametrisation describes the same law.
      CHECK(std::abs(law.params().cf(xi, t) - expected) < 1e-12);
    }
  }
}

TEST_CASE("alpha=1 generator drift uses the sine constant") {
  const LimitLaw law = law_for("kinetic(2,1,0.5)");
  const double fp = law.f_plus, fm = law.f_minus, k = law.kappa;
  const double gamma = 0.57721566490153286061;
  const double a = -(fp + fm) * (2 * gamma + std::log(2.0) + k * std::log(k) + k * kPi / 2 * (1 - gamma)) -
                   (fp * std::log(std::fabs(fp)) + fm * std::log(std::fabs(fm)));
  CHECK(law.generator_drift_a == doctest::Approx(a).epsilon(1e-12));
  CHECK(sine_constant_by_quadrature() == doctest::Approx(1 - gamma).epsilon(1e-13));
}

TEST_CASE("centering exists only at alpha=1") {
  const LimitLaw levy = law_for("kinetic(3)");
  CHECK(code_of([&] { (void)levy.xi_eps(1e-3); }) == ErrorCode::InvalidRequest);
  CHECK(code_of([&] { (void)levy.xi_eps_asymptotic(1e-3); }) == ErrorCode::InvalidRequest);
  CHECK(levy.centering(1e-3) == 0);

  const LimitLaw crit = law_for("kinetic(2,1,0.5)");
  double prev = INFINITY;
  for (int k = 2; k <= 4; ++k) {
    const double eps = std::pow(10.0, -k);
    const double gap = std::fabs(crit.xi_eps(eps) / crit.xi_eps_asymptotic(eps) - 1);
    CHECK(gap < prev);
    prev = gap;
  }
}

TEST_CASE("Poisson solution") {
  SUBCASE("zero observable") {
    const Preset p = make_preset("heavy_tailed(1)");
    const PoissonSolution ps = poisson_solution(p.model, make_observable("const(0)"));
    CHECK(ps.gamma_sq == 0);
    CHECK(ps.g(1.3) == 0);
    CHECK(ps.g_prime(-0.4) == 0);
  }
  SUBCASE("Gaussian tail moment gives unit slope") {
    const Preset p = make_preset("heavy_tailed(1)");
    const PoissonSolution ps = poisson_solution(p.model, p.f);
    // ∫_x^∞ v e^{-v²}dv = e^{-x²}/2, so g' = 2e^{x²}·e^{-x²}/2 = 1.
    for (double x : {-2.0, -0.5, 0.0, 0.8, 2.5}) CHECK(ps.g_prime(x) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(ps.g(1.5) == doctest::Approx(1.5).epsilon(1e-7));
    CHECK(ps.gamma_sq == doctest::Approx(1.0).epsilon(1e-6));
  }
  SUBCASE("residual of the Poisson equation") {
    const Preset p = make_preset("kinetic(7)");
    const Observable f = make_observable("centered_id", &p.model);
    const PoissonSolution ps = poisson_solution(p.model, f);
    for (double x : {-3.0, -0.7, 0.2, 1.9, 6.0}) {
      const double h = 1e-4;
      const double g2 = (ps.g_prime(x + h) - ps.g_prime(x - h)) / (2 * h);
      const double s = p.model.diffusion(x);
      const double res = 2 * p.model.drift(x) * ps.g_prime(x) + s * s * g2 + 2 * f.f(x);
      CHECK(std::fabs(res) < 1e-5 * (1 + std::fabs(f.f(x))));
    }
  }
  SUBCASE("uncentered observable") {
    const Preset p = make_preset("heavy_tailed(1)");
    CHECK(code_of([&] { (void)poisson_solution(p.model, make_observable("const(1)")); }) == ErrorCode::NotCentered);
  }
}

TEST_CASE("diffusive constant by two routes") {
  const Preset p = make_preset("kinetic(7)");
  const Observable f = make_observable("centered_id", &p.model);
  const double direct = diffusive_variance(p.model, f);
  const double poisson = poisson_solution(p.model, f).gamma_sq;
  CHECK(direct > 0);
  CHECK(std::fabs(direct - poisson) / poisson < 1e-6);
}

}  // TEST_SUITE
