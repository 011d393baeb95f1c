#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stablediff/asymptotics.hpp"
#include "stablediff/model.hpp"
#include "stablediff/observable.hpp"

namespace stablediff {

enum class Scheme { Direct, TimeChange };
const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

struct SimConfig {
  double dt = 1e-2;         // Euler step in diffusion time
  double epsilon = 1e-2;
  std::vector<double> times{1.0};
  std::size_t n_paths = 1000;
  std::uint64_t seed = 1;
  Scheme scheme = Scheme::Direct;
  int threads = 0;

  double grade = 0.05;                 // time change: far steps (grade·|w|)²
  double step_budget_factor = 200;     // time change: steps allowed per Euler step of the direct scheme
  double max_exploded_fraction = 1e-3;
  double max_clipped_fraction = 1e-4;

  // Throws InvalidConfig when an invariant is broken.
  void check() const;
};

// Rescaled functional values, one row per surviving path.
struct FunctionalSample {
  std::vector<double> times;
  std::size_t n_paths = 0;
  std::vector<double> values;  // row-major n_paths × times.size()

  std::string scheme;
  std::uint64_t seed = 0;
  double dt = 0;
  double epsilon = 0;
  std::string model;
  std::string observable;
  std::string regime;
  double alpha = 0;
  double normalization = 1;  // factor applied to ∫_0^{t/ε} f(X_s)ds
  double centering = 0;      // subtracted per unit t
  std::size_t exploded = 0;
  std::size_t clipped = 0;

  double at(std::size_t path, std::size_t i) const { return values[path * times.size() + i]; }
  std::vector<double> column(std::size_t i) const;
};

struct DiscretePath {
  double dt = 0;
  std::vector<double> x;  // X at k·dt, x[0] = 0
};

// Euler–Maruyama from X_0 = 0; PathExploded when |X| leaves 10·domain_cutoff.
DiscretePath simulate_path(const DiffusionModel& model, double T, double dt, std::uint64_t seed,
                           std::uint64_t path_index = 0);

// Running left-endpoint sums ∫_0^{t_k} f(X_s)ds at every grid point.
std::vector<double> additive_functional(const DiscretePath& path, const RealFn& f);

// Dispatches on cfg.scheme.
FunctionalSample rescaled_functional(const DiffusionModel& model, const Observable& f, const LimitLaw& law,
                                     const SimConfig& cfg);

// Same law through the Brownian time change X_t = 𝔰^{-1}(Y_{τ_t}).
FunctionalSample simulate_timechange(const DiffusionModel& model, const Observable& f, const LimitLaw& law,
                                     const SimConfig& cfg);

}  // namespace stablediff
