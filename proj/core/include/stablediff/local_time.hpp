#pragma once

#include <cstdint>
#include <vector>

#include "stablediff/stable.hpp"

namespace stablediff {

// Lebesgue time spent in (lo, hi) by the linear segment from w0 to w1 over duration h.
double segment_band_time(double w0, double w1, double h, double lo, double hi);

// Brownian path on a uniform grid with running local-time estimate at 0.
struct BrownianGrid {
  double dt = 0;
  double delta = 0;              // bandwidth of the occupation estimator
  std::vector<double> w;         // W at k·dt, w[0] = 0
  std::vector<double> local0;    // L̂^0 at k·dt

  double horizon() const { return dt * double(w.size() - 1); }
};

// delta = 0 selects √dt.
BrownianGrid simulate_brownian(double dt, std::size_t steps, std::uint64_t seed, std::uint64_t path,
                               double delta = 0);

// (1/2δ)·Lebesgue time of (x-δ, x+δ) up to t.
double estimate_local_time(const BrownianGrid& grid, double x, double t);

// First time L̂^0 exceeds t, interpolated inside the step; HorizonExceeded if never.
double inverse_local_time(const BrownianGrid& grid, double t);

// Level profile L̂^x on levels x_j = lo + j·δ covering the path range.
struct LevelProfile {
  double lo = 0;
  double spacing = 0;
  std::vector<double> values;
};
LevelProfile local_time_profile(const BrownianGrid& grid, double t);

struct ExcursionConfig {
  double dt = 1e-5;          // base step near the origin
  double grade = 0.05;       // far steps use (grade·|W|)²
  double inner_cut = 10;     // compensation cut η in units of δ
  std::size_t max_steps = 400'000'000;
  int threads = 0;
};

// K evaluated at inverse local times τ_{t_i}, one row per path.
struct ExcursionSample {
  std::vector<double> times;
  std::size_t n_paths = 0;
  std::vector<double> values;  // row-major n_paths × times.size()
  std::vector<double> tau;     // τ_{t_i}, same layout
  std::size_t steps = 0;       // total Brownian steps over all paths

  double at(std::size_t path, std::size_t i) const { return values[path * times.size() + i]; }
};

ExcursionSample stable_via_excursions(const StableSpec& spec, const std::vector<double>& times,
                                      std::size_t n_paths, std::uint64_t seed, const ExcursionConfig& cfg = {});

}  // namespace stablediff
