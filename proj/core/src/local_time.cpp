#include "stablediff/local_time.hpp"

#include <algorithm>
#include <cmath>

#include "stablediff/error.hpp"
#include "stablediff/parallel.hpp"
#include "stablediff/rng.hpp"

namespace stablediff {

namespace {

constexpr std::uint32_t kGridStream = 4;
constexpr std::uint32_t kExcursionStream = 3;
constexpr std::uint32_t kBridgeStream = 5;

// Parameter interval of the segment inside (lo, hi), clipped to [0, 1].
std::pair<double, double> band_params(double w0, double w1, double lo, double hi) {
  const double d = w1 - w0;
  if (d == 0) return (lo < w0 && w0 < hi) ? std::pair{0.0, 1.0} : std::pair{1.0, 1.0};
  double u1 = (lo - w0) / d, u2 = (hi - w0) / d;
  if (u1 > u2) std::swap(u1, u2);
  const double a = std::max(u1, 0.0), b = std::min(u2, 1.0);
  return b > a ? std::pair{a, b} : std::pair{1.0, 1.0};
}

}  // namespace

double segment_band_time(double w0, double w1, double h, double lo, double hi) {
  const auto [a, b] = band_params(w0, w1, lo, hi);
  return h * (b - a);
}

BrownianGrid simulate_brownian(double dt, std::size_t steps, std::uint64_t seed, std::uint64_t path,
                               double delta) {
  if (!(dt > 0)) throw Error(ErrorCode::InvalidConfig, "dt must be positive");
  BrownianGrid g;
  g.dt = dt;
  g.delta = delta > 0 ? delta : std::sqrt(dt);
  g.w.resize(steps + 1);
  g.local0.resize(steps + 1);
  CounterRng rng(seed, path, kGridStream);
  const double sd = std::sqrt(dt);
  const double inv = 1 / (2 * g.delta);
  for (std::size_t k = 0; k < steps; ++k) {
    g.w[k + 1] = g.w[k] + sd * rng.normal();
    g.local0[k + 1] = g.local0[k] + segment_band_time(g.w[k], g.w[k + 1], dt, -g.delta, g.delta) * inv;
  }
  return g;
}

double estimate_local_time(const BrownianGrid& g, double x, double t) {
  if (t < 0 || t > g.horizon() * (1 + 1e-12)) {
    throw Error(ErrorCode::HorizonExceeded, "local time requested beyond the simulated horizon",
                {{"t", t}, {"horizon", g.horizon()}});
  }
  const double lo = x - g.delta, hi = x + g.delta;
  const std::size_t full = std::min(std::size_t(t / g.dt), g.w.size() - 1);
  double occ = 0;
  for (std::size_t k = 0; k < full; ++k) occ += segment_band_time(g.w[k], g.w[k + 1], g.dt, lo, hi);
  const double rest = t - double(full) * g.dt;
  if (rest > 0 && full + 1 < g.w.size()) {
    const double frac = rest / g.dt;
    const double wm = g.w[full] + frac * (g.w[full + 1] - g.w[full]);
    occ += segment_band_time(g.w[full], wm, rest, lo, hi);
  }
  return occ / (2 * g.delta);
}

double inverse_local_time(const BrownianGrid& g, double t) {
  if (t <= 0) return 0;
  auto it = std::upper_bound(g.local0.begin(), g.local0.end(), t);
  if (it == g.local0.end()) {
    throw Error(ErrorCode::HorizonExceeded, "local time at 0 never exceeds the requested level",
                {{"level", t}, {"reached", g.local0.back()}, {"horizon", g.horizon()}});
  }
  const std::size_t k = std::size_t(it - g.local0.begin()) - 1;
  const auto [a, b] = band_params(g.w[k], g.w[k + 1], -g.delta, g.delta);
  (void)b;
  const double theta = a + (t - g.local0[k]) * 2 * g.delta / g.dt;
  return (double(k) + std::min(theta, 1.0)) * g.dt;
}

LevelProfile local_time_profile(const BrownianGrid& g, double t) {
  const std::size_t full = std::min(std::size_t(std::ceil(t / g.dt - 1e-9)), g.w.size() - 1);
  const auto [mn, mx] = std::minmax_element(g.w.begin(), g.w.begin() + std::ptrdiff_t(full) + 1);
  LevelProfile p;
  p.spacing = g.delta;
  const long jlo = long(std::floor(*mn / g.delta)) - 1, jhi = long(std::ceil(*mx / g.delta)) + 1;
  p.lo = double(jlo) * g.delta;
  p.values.assign(std::size_t(jhi - jlo + 1), 0.0);
  for (std::size_t k = 0; k < full; ++k) {
    double w0 = g.w[k], w1 = g.w[k + 1], h = g.dt;
    const double end = double(k + 1) * g.dt;
    if (end > t) {
      h = t - double(k) * g.dt;
      w1 = w0 + (h / g.dt) * (w1 - w0);
    }
    const long a = long(std::floor(std::min(w0, w1) / g.delta)) - 1;
    const long b = long(std::ceil(std::max(w0, w1) / g.delta)) + 1;
    for (long j = std::max(a, jlo); j <= std::min(b, jhi); ++j) {
      const double x = double(j) * g.delta;
      p.values[std::size_t(j - jlo)] += segment_band_time(w0, w1, h, x - g.delta, x + g.delta);
    }
  }
  for (double& v : p.values) v /= 2 * g.delta;
  return p;
}

// ---------------------------------------------------------------------------

namespace {

// ∫ sgn_{a,b}(x)|x|^p over the part of [0, x] (or [x, 0]) with |x| ≥ cut.
struct Kernel {
  double a, b, p, cut;

  double antiderivative(double x) const {
    const double ax = std::fabs(x);
    if (ax <= cut) return 0;
    const double weight = x > 0 ? a : -b;
    if (p == -1) return weight * std::log(ax / cut);
    return weight * (std::pow(ax, p + 1) - std::pow(cut, p + 1)) / (p + 1);
  }
  double value(double x) const {
    const double ax = std::fabs(x);
    if (ax < cut || ax == 0) return 0;
    return (x > 0 ? a : b) * std::pow(ax, p);
  }
  // Time integral along the linear segment w0 → w1 of duration h.
  double segment(double w0, double w1, double h) const {
    const double d = w1 - w0;
    if (std::fabs(d) <= 1e-12 * (std::fabs(w0) + std::fabs(w1))) return h * value(0.5 * (w0 + w1));
    return h * (antiderivative(w1) - antiderivative(w0)) / d;
  }
};

struct Accum {
  double occ0 = 0, occp = 0, occm = 0, outer = 0;
};

}  // namespace

ExcursionSample stable_via_excursions(const StableSpec& spec, const std::vector<double>& times,
                                      std::size_t n_paths, std::uint64_t seed, const ExcursionConfig& cfg) {
  const double alpha = spec.alpha;
  if (!(alpha > 0 && alpha < 2)) {
    throw Error(ErrorCode::InvalidAlpha, "excursion constructions need alpha in (0, 2)", {{"alpha", alpha}});
  }
  if (!(cfg.dt > 0)) throw Error(ErrorCode::InvalidConfig, "dt must be positive");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0) || (i > 0 && times[i] <= times[i - 1])) {
      throw Error(ErrorCode::InvalidConfig, "time points must be positive and increasing");
    }
  }
  const double a = spec.a, b = spec.b;
  const double p = 1 / alpha - 2;
  const double delta = std::sqrt(cfg.dt);
  const bool compensated = alpha >= 1;
  const double eta = compensated ? cfg.inner_cut * delta : 0.0;
  if (compensated && !(eta < 1)) throw Error(ErrorCode::InvalidConfig, "inner cut must stay below 1");
  const Kernel kernel{a, b, p, eta};

  // Compensator mass over |x| ≥ η (α ∈ (1,2)) or η ≤ |x| ≤ 1 (α = 1).
  double comp_mass = 0, inner_slope = 0, bridge_var = 0;
  if (compensated) {
    comp_mass = p == -1 ? (a + b) * std::log(1 / eta) : (a + b) * std::pow(eta, p + 1) / (-p - 1);
    inner_slope = std::pow(eta, p + 1) / (p + 2);
    bridge_var = 4 * (a * a + b * b) * std::pow(eta, 2 * p + 3) *
                 (2 / ((p + 2) * (2 * p + 3)) - 1 / ((p + 2) * (p + 2)));
  }

  const std::size_t m = times.size();
  ExcursionSample out;
  out.times = times;
  out.n_paths = n_paths;
  out.values.assign(n_paths * m, 0.0);
  out.tau.assign(n_paths * m, 0.0);
  std::vector<std::size_t> steps(n_paths, 0);

  const double inv2d = 1 / (2 * delta);
  parallel_for(n_paths, resolve_threads(cfg.threads), [&](std::size_t path) {
    CounterRng rng(seed, path, kExcursionStream);
    CounterRng bridge_rng(seed, path, kBridgeStream);
    double W = 0, T = 0, bridge = 0, last_level = 0;
    Accum acc;
    std::size_t i = 0, n = 0;

    auto add = [&](Accum& s, double w0, double w1, double h) {
      s.occ0 += segment_band_time(w0, w1, h, -delta, delta);
      if (compensated) {
        s.occp += segment_band_time(w0, w1, h, eta - delta, eta + delta);
        s.occm += segment_band_time(w0, w1, h, -eta - delta, -eta + delta);
      }
      s.outer += kernel.segment(w0, w1, h);
    };

    while (i < m) {
      const double h = std::max(cfg.dt, (cfg.grade * W) * (cfg.grade * W));
      const double W1 = W + std::sqrt(h) * rng.normal();
      const double band = segment_band_time(W, W1, h, -delta, delta);
      while (i < m && acc.occ0 + band >= times[i] * 2 * delta) {
        const auto [lo, hi] = band_params(W, W1, -delta, delta);
        (void)hi;
        const double theta = std::min(1.0, lo + (times[i] * 2 * delta - acc.occ0) / h);
        const double Wt = W + theta * (W1 - W);
        Accum part = acc;
        add(part, W, Wt, theta * h);
        const double L0 = times[i];
        double K = part.outer;
        if (compensated) {
          const double Lp = part.occp * inv2d, Lm = part.occm * inv2d;
          bridge += std::sqrt(bridge_var * (L0 - last_level)) * bridge_rng.normal();
          last_level = L0;
          K += -L0 * comp_mass + inner_slope * (a * (Lp - L0) + b * (Lm - L0)) + bridge;
        }
        out.values[path * m + i] = K;
        out.tau[path * m + i] = T + theta * h;
        ++i;
      }
      add(acc, W, W1, h);
      T += h;
      W = W1;
      if (++n > cfg.max_steps) {
        throw Error(ErrorCode::HorizonExceeded, "excursion walk exceeded the step budget",
                    {{"path", double(path)}, {"steps", double(n)}, {"local_time", acc.occ0 * inv2d}});
      }
    }
    steps[path] = n;
  });
  for (std::size_t s : steps) out.steps += s;
  return out;
}

}  // namespace stablediff
