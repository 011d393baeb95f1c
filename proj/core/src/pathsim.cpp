#include "stablediff/pathsim.hpp"

#include <algorithm>
#include <cmath>

#include "stablediff/error.hpp"
#include "stablediff/parallel.hpp"
#include "stablediff/rng.hpp"

namespace stablediff {

namespace {

constexpr std::uint32_t kDirectStream = 1;
constexpr std::uint32_t kTimeChangeStream = 2;

enum class PathStatus { Ok, Exploded, Clipped };

struct Scaling {
  double norm = 1;
  double center = 0;
};

Scaling scaling_for(const LimitLaw& law, double eps) { return {law.normalization(eps), law.centering(eps)}; }

FunctionalSample empty_sample(const DiffusionModel& model, const Observable& f, const LimitLaw& law,
                              const SimConfig& cfg, const Scaling& s) {
  FunctionalSample out;
  out.times = cfg.times;
  out.scheme = scheme_name(cfg.scheme);
  out.seed = cfg.seed;
  out.dt = cfg.dt;
  out.epsilon = cfg.epsilon;
  out.model = model.name();
  out.observable = f.name;
  out.regime = regime_name(law.regime);
  out.alpha = law.alpha;
  out.normalization = s.norm;
  out.centering = s.center;
  return out;
}

// Keeps surviving rows in path order and enforces the failure budget.
void finalize(FunctionalSample& out, const std::vector<double>& raw, const std::vector<PathStatus>& status,
              const SimConfig& cfg, std::size_t clip_events, std::size_t total_steps) {
  const std::size_t m = cfg.times.size();
  for (std::size_t p = 0; p < status.size(); ++p) {
    if (status[p] == PathStatus::Exploded) {
      ++out.exploded;
      continue;
    }
    out.values.insert(out.values.end(), raw.begin() + std::ptrdiff_t(p * m), raw.begin() + std::ptrdiff_t((p + 1) * m));
    ++out.n_paths;
  }
  out.clipped = clip_events;
  if (double(out.exploded) > cfg.max_exploded_fraction * double(status.size())) {
    throw Error(ErrorCode::PathExploded, "too many paths left the explosion guard",
                {{"exploded", double(out.exploded)}, {"paths", double(status.size())}});
  }
  if (double(clip_events) > cfg.max_clipped_fraction * double(std::max<std::size_t>(total_steps, 1))) {
    throw Error(ErrorCode::TooManyClips, "time-change increments were clipped too often",
                {{"clipped", double(clip_events)}, {"steps", double(total_steps)}});
  }
}

FunctionalSample simulate_direct(const DiffusionModel& model, const Observable& f, const LimitLaw& law,
                                 const SimConfig& cfg) {
  const Scaling s = scaling_for(law, cfg.epsilon);
  FunctionalSample out = empty_sample(model, f, law, cfg, s);
  const std::size_t m = cfg.times.size();
  std::vector<double> raw(cfg.n_paths * m, 0.0);
  std::vector<PathStatus> status(cfg.n_paths, PathStatus::Ok);
  const double guard = 10 * model.domain_cutoff();
  const double sqdt = std::sqrt(cfg.dt);

  parallel_for(cfg.n_paths, resolve_threads(cfg.threads), [&](std::size_t path) {
    CounterRng rng(cfg.seed, path, kDirectStream);
    double x = 0;
    long double integral = 0;
    long double clock = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const long double target = (long double)cfg.times[i] / cfg.epsilon;
      for (;;) {
        const long double left = target - clock;
        if (left <= 1e-9L * cfg.dt) break;
        const bool partial = left < cfg.dt;
        const double h = partial ? double(left) : cfg.dt;
        const double z = rng.normal();
        integral += (long double)f.f(x) * h;
        x += model.drift(x) * h + model.diffusion(x) * (partial ? std::sqrt(h) : sqdt) * z;
        clock = partial ? target : clock + cfg.dt;
        if (!(std::fabs(x) <= guard)) {
          status[path] = PathStatus::Exploded;
          return;
        }
      }
      raw[path * m + i] = double(s.norm * integral) - s.center * cfg.times[i];
    }
  });
  finalize(out, raw, status, cfg, 0, 0);
  return out;
}

}  // namespace

const char* scheme_name(Scheme s) { return s == Scheme::Direct ? "direct" : "timechange"; }

Scheme parse_scheme(const std::string& name) {
  if (name == "direct" || name == "Direct") return Scheme::Direct;
  if (name == "timechange" || name == "TimeChange" || name == "time_change") return Scheme::TimeChange;
  throw Error(ErrorCode::InvalidConfig, "unknown scheme '" + name + "'");
}

void SimConfig::check() const {
  if (!(dt > 0)) throw Error(ErrorCode::InvalidConfig, "dt must be positive", {{"dt", dt}});
  if (!(epsilon > 0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be positive", {{"epsilon", epsilon}});
  if (n_paths < 2) throw Error(ErrorCode::InvalidConfig, "need at least 2 paths");
  if (times.empty()) throw Error(ErrorCode::InvalidConfig, "need at least one time point");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0) || (i > 0 && times[i] <= times[i - 1])) {
      throw Error(ErrorCode::InvalidConfig, "time points must be positive and increasing");
    }
  }
  if (times.front() / epsilon / dt < 100) {
    throw Error(ErrorCode::InvalidConfig, "fewer than 100 steps before the first time point",
                {{"steps", times.front() / epsilon / dt}});
  }
}

std::vector<double> FunctionalSample::column(std::size_t i) const {
  std::vector<double> c(n_paths);
  for (std::size_t p = 0; p < n_paths; ++p) c[p] = at(p, i);
  return c;
}

DiscretePath simulate_path(const DiffusionModel& model, double T, double dt, std::uint64_t seed,
                           std::uint64_t path_index) {
  if (!(dt > 0) || !(T > 0)) throw Error(ErrorCode::InvalidConfig, "T and dt must be positive");
  const std::size_t n = std::size_t(std::llround(T / dt));
  DiscretePath p;
  p.dt = dt;
  p.x.resize(n + 1);
  CounterRng rng(seed, path_index, kDirectStream);
  const double guard = 10 * model.domain_cutoff();
  const double sq = std::sqrt(dt);
  for (std::size_t k = 0; k < n; ++k) {
    const double x = p.x[k];
    p.x[k + 1] = x + model.drift(x) * dt + model.diffusion(x) * sq * rng.normal();
    if (!(std::fabs(p.x[k + 1]) <= guard)) {
      throw Error(ErrorCode::PathExploded, "path left the explosion guard",
                  {{"step", double(k + 1)}, {"x", p.x[k + 1]}, {"guard", guard}});
    }
  }
  return p;
}

std::vector<double> additive_functional(const DiscretePath& path, const RealFn& f) {
  std::vector<double> out(path.x.size(), 0.0);
  long double acc = 0;
  for (std::size_t k = 0; k + 1 < path.x.size(); ++k) {
    acc += (long double)f(path.x[k]) * path.dt;
    out[k + 1] = double(acc);
  }
  return out;
}

FunctionalSample simulate_timechange(const DiffusionModel& model, const Observable& f, const LimitLaw& law,
                                     const SimConfig& cfg) {
  cfg.check();
  const Scaling s = scaling_for(law, cfg.epsilon);
  FunctionalSample out = empty_sample(model, f, law, cfg, s);
  out.scheme = scheme_name(Scheme::TimeChange);
  const std::size_t m = cfg.times.size();
  std::vector<double> raw(cfg.n_paths * m, 0.0);
  std::vector<PathStatus> status(cfg.n_paths, PathStatus::Ok);
  std::vector<std::size_t> clips(cfg.n_paths, 0), steps(cfg.n_paths, 0);

  // Y = W/a_ε is a standard Brownian motion in its own clock u = s/a_ε²; then
  // A_t^ε = ε∫ψ^{-2}(Y)du and H^ε = ∫φ(Y)du, so the diffusion clock is ∫ψ^{-2}(Y)du.
  const TransformedCoeffs tc(model, f.f);
  const double y_lo = tc.w_min(), y_hi = tc.w_max();
  const double clip = 1e6 * cfg.dt;
  const double budget = cfg.step_budget_factor * cfg.times.back() / cfg.epsilon / cfg.dt;

  parallel_for(cfg.n_paths, resolve_threads(cfg.threads), [&](std::size_t path) {
    CounterRng rng(cfg.seed, path, kTimeChangeStream);
    double y = 0;
    double k0 = tc.inv_psi_sq(0), p0 = tc.phi(0);
    long double clock = 0, H = 0;
    std::size_t i = 0, n = 0;
    while (i < m) {
      const double h = std::max(cfg.dt, (cfg.grade * y) * (cfg.grade * y));
      const double y1 = y + std::sqrt(h) * rng.normal();
      if (!(y1 > y_lo && y1 < y_hi)) {
        status[path] = PathStatus::Exploded;
        break;
      }
      const double k1 = tc.inv_psi_sq(y1), p1 = tc.phi(y1);
      double dA = 0.5 * h * (k0 + k1);
      if (dA > clip) {
        dA = clip;
        ++clips[path];
      }
      const double dH = 0.5 * h * (p0 + p1);
      while (i < m) {
        const long double target = (long double)cfg.times[i] / cfg.epsilon;
        if (clock + dA < target) break;
        const double theta = double((target - clock) / dA);
        raw[path * m + i] = double(s.norm * (H + theta * dH)) - s.center * cfg.times[i];
        ++i;
      }
      clock += dA;
      H += dH;
      y = y1;
      k0 = k1;
      p0 = p1;
      if (double(++n) > budget) {
        throw Error(ErrorCode::HorizonExceeded, "time change did not reach the last time point",
                    {{"path", double(path)}, {"steps", double(n)}, {"clock", double(clock)}});
      }
    }
    steps[path] = n;
  });
  std::size_t total_clips = 0, total_steps = 0;
  for (std::size_t p = 0; p < cfg.n_paths; ++p) {
    total_clips += clips[p];
    total_steps += steps[p];
  }
  finalize(out, raw, status, cfg, total_clips, total_steps);
  return out;
}

FunctionalSample rescaled_functional(const DiffusionModel& model, const Observable& f, const LimitLaw& law,
                                     const SimConfig& cfg) {
  cfg.check();
  if (cfg.scheme == Scheme::TimeChange) return simulate_timechange(model, f, law, cfg);
  return simulate_direct(model, f, law, cfg);
}

}  // namespace stablediff
