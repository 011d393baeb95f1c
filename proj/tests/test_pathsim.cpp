#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracle.hpp"
#include "stablediff/asymptotics.hpp"
#include "stablediff/error.hpp"
#include "stablediff/pathsim.hpp"
#include "stablediff/presets.hpp"
#include "stablediff/validate.hpp"

using namespace stablediff;

namespace {

// ε·∫_0^{t/ε} f with no centering.
LimitLaw plain_average() {
  LimitLaw law;
  law.regime = Regime::CriticalLevy;
  law.alpha = 1;
  law.xi_eps = [](double) { return 0.0; };
  return law;
}

LimitLaw law_for(const Preset& p) {
  const RegimeReport r = classify_regime(p.model, p.f, p.claim);
  return limit_law(r, p.model, p.f);
}

}  // namespace

TEST_SUITE("pathsim") {

TEST_CASE("constant observables integrate to time and zero") {
  const Preset p = make_preset("heavy_tailed(1)");
  const DiscretePath path = simulate_path(p.model, 2, 1e-3, 5);
  REQUIRE(path.x.size() == 2001);
  CHECK(path.x[0] == 0);
  const auto one = additive_functional(path, [](double) { return 1.0; });
  const auto zero = additive_functional(path, [](double) { return 0.0; });
  for (std::size_t k = 0; k < one.size(); k += 100) {
    CHECK(one[k] == doctest::Approx(double(k) * 1e-3).epsilon(1e-12));
    CHECK(zero[k] == 0);
  }
}

TEST_CASE("Gaussian-speed model has mean zero and variance one half") {
  const Preset p = make_preset("heavy_tailed(1)");
  const int n = 10000;
  std::vector<double> end(n);
  for (int k = 0; k < n; ++k) end[k] = simulate_path(p.model, 5, 0.01, 13, std::uint64_t(k)).x.back();
  CHECK(std::fabs(oracle::mean(end)) < 3 * oracle::std_error(end));
  const double v = oracle::variance(end);
  // Euler bias of the OU-type drift -2x is O(dt).
  CHECK(std::fabs(v - 0.5) < 3 * 0.5 * std::sqrt(2.0 / n) + 0.01);
}

TEST_CASE("ergodic averages approach the invariant mean") {
  const Preset p = make_preset("heavy_tailed(1)");
  const RealFn f = [](double x) { return std::cos(x); };
  const double target = std::exp(-0.25);
  std::vector<double> err(3, 0.0);
  const double horizons[3] = {12.5, 50, 200};
  for (int k = 0; k < 100; ++k) {
    const DiscretePath path = simulate_path(p.model, 200, 0.01, 77, std::uint64_t(k));
    const auto a = additive_functional(path, f);
    for (int h = 0; h < 3; ++h) {
      const auto idx = std::size_t(std::llround(horizons[h] / 0.01));
      err[h] += std::fabs(a[idx] / horizons[h] - target) / 100;
    }
  }
  CHECK(err[1] < err[0]);
  CHECK(err[2] < err[1]);
  CHECK(err[2] < 0.05);
}

TEST_CASE("plain averages of a constant give the time in both schemes") {
  const Preset p = make_preset("heavy_tailed(1)");
  const Observable one{"const(1)", [](double) { return 1.0; }};
  SimConfig cfg;
  cfg.epsilon = 0.05;
  cfg.times = {0.5, 1.0};
  cfg.n_paths = 20;
  for (Scheme s : {Scheme::Direct, Scheme::TimeChange}) {
    cfg.scheme = s;
    const FunctionalSample out = rescaled_functional(p.model, one, plain_average(), cfg);
    REQUIRE(out.n_paths == 20);
    for (std::size_t i = 0; i < out.n_paths; ++i) {
      CHECK(out.at(i, 0) == doctest::Approx(0.5).epsilon(s == Scheme::Direct ? 1e-9 : 1e-2));
      CHECK(out.at(i, 1) == doctest::Approx(1.0).epsilon(s == Scheme::Direct ? 1e-9 : 1e-2));
    }
  }
}

TEST_CASE("zero observable gives zero in the limit scaling") {
  const Preset p = make_preset("kinetic(3)");
  const Observable zero{"const(0)", [](double) { return 0.0; }};
  SimConfig cfg;
  cfg.n_paths = 10;
  const FunctionalSample out = rescaled_functional(p.model, zero, law_for(p), cfg);
  for (double v : out.values) CHECK(v == 0);
}

TEST_CASE("samples do not depend on the thread count") {
  const Preset p = make_preset("kinetic(3)");
  const LimitLaw law = law_for(p);
  SimConfig cfg;
  cfg.n_paths = 40;
  cfg.times = {0.5, 1};
  for (Scheme s : {Scheme::Direct, Scheme::TimeChange}) {
    cfg.scheme = s;
    cfg.threads = 1;
    const auto a = rescaled_functional(p.model, p.f, law, cfg);
    cfg.threads = 3;
    const auto b = rescaled_functional(p.model, p.f, law, cfg);
    CHECK(a.values == b.values);
  }
}

TEST_CASE("diffusive scaling reproduces the limit variance") {
  const Preset p = make_preset("kinetic(7)");
  const LimitLaw law = law_for(p);
  SimConfig cfg;
  cfg.epsilon = 1e-3;
  cfg.dt = 0.02;
  cfg.n_paths = 2000;
  const auto out = rescaled_functional(p.model, p.f, law, cfg);
  const double v = oracle::variance(out.column(0));
  CHECK(v == doctest::Approx(law.sigma * law.sigma).epsilon(0.1));
}

TEST_CASE("halving the step moves the mean by less than its noise") {
  const Preset p = make_preset("kinetic(7)");
  const LimitLaw law = law_for(p);
  SimConfig cfg;
  cfg.epsilon = 1e-2;
  cfg.n_paths = 2000;
  cfg.dt = 0.02;
  const auto coarse = rescaled_functional(p.model, p.f, law, cfg).column(0);
  cfg.dt = 0.01;
  const auto fine = rescaled_functional(p.model, p.f, law, cfg).column(0);
  const double se = std::hypot(oracle::std_error(coarse), oracle::std_error(fine));
  CHECK(std::fabs(oracle::mean(coarse) - oracle::mean(fine)) < 3 * se);
}

TEST_CASE("broken invariants and explosions are reported") {
  SimConfig cfg;
  cfg.dt = 0.5;
  cfg.epsilon = 0.5;
  CHECK_THROWS_AS(cfg.check(), Error);
  cfg = SimConfig{};
  cfg.times = {};
  CHECK_THROWS_AS(cfg.check(), Error);

  const Preset p = make_preset("heavy_tailed(3)");
  try {
    (void)simulate_path(p.model, 50, 1.0, 1);
    FAIL("expected an explosion");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PathExploded);
  }
}

}  // TEST_SUITE
