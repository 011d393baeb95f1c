#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "stablediff/error.hpp"
#include "stablediff/model.hpp"
#include "stablediff/observable.hpp"
#include "stablediff/presets.hpp"

using namespace stablediff;

namespace {

DiffusionModel brownian() {
  return DiffusionModel("brownian", [](double) { return 0.0; }, [](double) { return 1.0; });
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Io;
}

}  // namespace

TEST_SUITE("model") {

TEST_CASE("scale of a driftless unit diffusion is the identity") {
  const auto m = brownian();
  CHECK(m.scale(2.0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(m.speed_density(5.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.scale(0) == 0);
  CHECK(m.scale_deriv(0) == doctest::Approx(1.0));
}

TEST_CASE("driftless unit diffusion is not positive recurrent") {
  const auto m = brownian();
  CHECK(code_of([&] { (void)m.kappa(); }) == ErrorCode::NotPositiveRecurrent);
  const HarrisVerdict v = m.check_harris();
  CHECK_FALSE(v.admissible);
  CHECK_FALSE(v.speed_finite);
}

TEST_CASE("outward drift gives a bounded scale") {
  const DiffusionModel m("outward", [](double x) { return x; }, [](double) { return 1.0; });
  const HarrisVerdict v = m.check_harris();
  CHECK_FALSE(v.admissible);
  CHECK_FALSE(v.scale_unbounded_plus);
  CHECK_FALSE(v.scale_unbounded_minus);
}

TEST_CASE("zero diffusion is rejected") {
  CHECK(code_of([] { DiffusionModel("flat", [](double) { return 0.0; }, [](double) { return 0.0; }); }) ==
        ErrorCode::InvalidModel);
}

TEST_CASE("heavy-tailed scale, speed and kappa") {
  const Preset p = make_preset("heavy_tailed(1)");
  const auto& m = p.model;
  CHECK(m.check_harris().admissible);
  for (double x : {-2.0, -0.5, 0.7, 1.5, 3.0}) {
    const long double ref = oracle::simpson([](long double v) { return std::exp(v * v); }, 0, x);
    CHECK(m.scale(x) == doctest::Approx(double(ref)).epsilon(1e-9));
    CHECK(m.speed_density(x) == doctest::Approx(std::exp(-x * x)).epsilon(1e-9));
  }
  CHECK(m.kappa() == doctest::Approx(1 / std::sqrt(std::acos(-1.0))).epsilon(1e-9));
  CHECK(m.invariant_integral([](double) { return 1.0; }).value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::fabs(m.invariant_integral([](double x) { return x; }).value) < 1e-9);
}

TEST_CASE("kinetic scale and speed follow the confining profile") {
  const Preset p = make_preset("kinetic(3)");
  const auto& m = p.model;
  for (double x : {-4.0, -1.0, 0.5, 2.0, 10.0}) {
    const long double ref = oracle::simpson([](long double v) { return std::pow(1 + v * v, 1.5L); }, 0, x);
    CHECK(m.scale(x) == doctest::Approx(double(ref)).epsilon(1e-9));
    CHECK(m.speed_density(x) == doctest::Approx(std::pow(1 + x * x, -1.5)).epsilon(1e-9));
  }
  // ∫(1+v²)^{-3/2}dv = 2.
  CHECK(m.kappa() == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("second moment diverges for kinetic beta=3 and matches an oracle for beta=7") {
  const Preset p3 = make_preset("kinetic(3)");
  CHECK(code_of([&] { (void)p3.model.invariant_integral([](double x) { return x * x; }); }) ==
        ErrorCode::NotIntegrable);

  const Preset p7 = make_preset("kinetic(7)");
  const long double mass = 2 * oracle::simpson_to_inf([](long double v) { return std::pow(1 + v * v, -3.5L); }, 0);
  const long double second =
      2 * oracle::simpson_to_inf([](long double v) { return v * v * std::pow(1 + v * v, -3.5L); }, 0);
  CHECK(p7.model.kappa() == doctest::Approx(double(1 / mass)).epsilon(1e-8));
  CHECK(p7.model.invariant_integral([](double x) { return x * x; }).value ==
        doctest::Approx(double(second / mass)).epsilon(1e-7));
}

TEST_CASE("psi and phi") {
  SUBCASE("identity scale") {
    const auto m = brownian();
    const PsiPhi pp = m.psi_phi([](double x) { return std::sin(x); }, 0.8);
    CHECK(pp.psi == doctest::Approx(1.0));
    CHECK(pp.phi == doctest::Approx(std::sin(0.8)));
  }
  SUBCASE("heavy-tailed at the image of 1") {
    const Preset p = make_preset("heavy_tailed(1)");
    const PsiPhi pp = p.model.psi_phi([](double x) { return x; }, p.model.scale(1.0));
    CHECK(pp.psi == doctest::Approx(std::exp(1.0)).epsilon(1e-8));
    CHECK(pp.phi == doctest::Approx(std::exp(-2.0)).epsilon(1e-8));
  }
  SUBCASE("kinetic tail ratio approaches f_plus") {
    const Preset p = make_preset("kinetic(3)");
    const double alpha = 4.0 / 3;
    const double w = p.model.scale(1e5);
    const PsiPhi pp = p.model.psi_phi([](double x) { return x; }, w);
    CHECK(std::pow(w, 2 - 1 / alpha) * pp.phi == doctest::Approx(std::pow(4.0, -1.25)).epsilon(1e-3));
  }
  SUBCASE("outside the reachable image") {
    const Preset p = make_preset("kinetic(3)");
    CHECK(code_of([&] { (void)p.model.psi_phi([](double x) { return x; }, 1e30); }) == ErrorCode::OutOfDomain);
  }
}

TEST_CASE("speed identity, monotonicity and round trip on random points") {
  for (const char* spec : {"heavy_tailed(1)", "kinetic(3)", "driftless(2.5,1)"}) {
    CAPTURE(spec);
    const Preset p = make_preset(spec);
    const auto& m = p.model;
    const double xmax = std::min(m.reach(1), m.reach(-1));
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> u(-xmax, xmax);
    for (int k = 0; k < 200; ++k) {
      const double x = u(gen);
      // σ²𝔰'm = 1, compared in log space because 𝔰' overflows for the heavy-tailed family.
      const long double log_product =
          2 * std::log((long double)m.diffusion(x)) + m.log_scale_deriv(x) + m.log_speed_density(x);
      CHECK(std::fabs(double(std::expm1(log_product))) <= 10 * m.quadrature_tol());
    }
    const double lim = std::min(xmax, 20.0);
    double prev = -INFINITY;
    for (int k = 0; k < 100; ++k) {
      const double x = -lim + 2 * lim * k / 99.0;
      const double s = m.scale(x);
      CHECK(s > prev);
      prev = s;
      CHECK(std::fabs(m.inverse_scale(s) - x) < 1e-9 * (1 + std::fabs(x)));
    }
  }
}

TEST_CASE("phi times psi squared recovers f") {
  const Preset p = make_preset("kinetic(3)");
  const RealFn f = [](double x) { return x * x * x - 0.5; };
  for (double x : {-30.0, -2.0, -0.3, 0.4, 3.0, 50.0}) {
    const PsiPhi pp = p.model.psi_phi(f, p.model.scale(x));
    CHECK(pp.phi * pp.psi * pp.psi == doctest::Approx(f(x)).epsilon(1e-8));
  }
}

TEST_CASE("coefficient table model") {
  const auto path = std::filesystem::temp_directory_path() / "stablediff_model_table.csv";
  {
    std::ofstream os(path);
    os << "x,b,sigma\n";
    for (int k = -200; k <= 200; ++k) {
      const double x = k * 0.05;
      os << x << ',' << -x << ",1\n";
    }
  }
  ModelOptions opt;
  opt.domain_cutoff = 10;
  const DiffusionModel m = model_from_table(path.string(), opt);
  CHECK(m.drift(0.025) == doctest::Approx(-0.025));
  CHECK(m.kappa() == doctest::Approx(1 / std::sqrt(std::acos(-1.0))).epsilon(1e-4));
  std::filesystem::remove(path);
}

TEST_CASE("observable presets") {
  const Preset p = make_preset("heavy_tailed(1)");
  CHECK(make_observable("power(2)").f(-3) == doctest::Approx(9));
  CHECK(make_observable("const(1.5)").f(7) == doctest::Approx(1.5));
  CHECK(std::fabs(make_observable("centered_id", &p.model).f(0)) < 1e-9);
  CHECK(code_of([] { (void)make_observable("nonsense"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { (void)make_preset("kinetic(0.5)"); }) == ErrorCode::InvalidConfig);
}

}  // TEST_SUITE
