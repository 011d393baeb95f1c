#include "stablediff/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "stablediff/error.hpp"
#include "stablediff/quadrature.hpp"

namespace stablediff {

namespace {

using LD = long double;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = std::numbers::pi;

double sgn(double v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }
double xlogx(double v) { return v == 0 ? 0 : v * std::log(std::fabs(v)); }
bool near(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(b)); }

// Assumption ratio [σ𝔰']^{-2}|𝔰|^{2-1/α}ℓ(|𝔰|)f at x, in log space until the end.
double tail_ratio(const DiffusionModel& m, const Observable& f, double alpha, const SlowVar& ell, double x) {
  const double fx = f.f(x);
  if (!std::isfinite(fx)) return std::numeric_limits<double>::quiet_NaN();
  if (fx == 0) return 0;
  const LD log_psi = m.log_scale_deriv(x) + std::log(LD(m.diffusion(x)));
  const LD log_s = m.log_abs_scale(x);
  const LD lr = -2 * log_psi + LD(2 - 1 / alpha) * log_s;
  return double(std::exp(lr) * LD(ell.at_log(double(log_s))) * LD(fx));
}

std::vector<TailSample> tail_grid(const DiffusionModel& m, const Observable& f, double alpha,
                                  const SlowVar& ell, int side, const ClassifyOptions& opt) {
  const double step = std::pow(2.0, 0.25);
  double top = m.reach(side) * (1 - 1e-9);
  for (int i = 0; i < 400 && !std::isfinite(tail_ratio(m, f, alpha, ell, side * top)); ++i) top /= step;
  std::vector<TailSample> out;
  for (int j = 0; j < opt.grid_points; ++j) {
    const double x = side * top * std::pow(step, -(opt.grid_points - 1 - j));
    out.push_back({x, tail_ratio(m, f, alpha, ell, x)});
  }
  return out;
}

void check_tail(const std::vector<TailSample>& s, double claim, double scale, int side,
                const ClassifyOptions& opt) {
  const int n = int(s.size());
  const int w = std::min(opt.trend_window, n);
  double lo = kInf, hi = -kInf;
  for (int i = n - w; i < n; ++i) {
    lo = std::min(lo, s[i].ratio);
    hi = std::max(hi, s[i].ratio);
  }
  const double last = s.back().ratio;
  const bool flat = std::isfinite(lo) && std::isfinite(hi) && hi - lo <= opt.trend_tol * scale;
  const bool matches = std::fabs(last - claim) <= opt.trend_tol * scale;
  if (!flat || !matches) {
    throw Error(ErrorCode::ClassificationFailed, "tail ratio does not converge to the claimed limit",
                {{"side", double(side)},
                 {"x", s.back().x},
                 {"last_ratio", last},
                 {"claimed", claim},
                 {"window_spread", hi - lo}});
  }
}

struct SlopeFit {
  double slope = 0;
  double first_half = 0;
  double second_half = 0;
  double top_w = 0;
  double ratio_top = 0;
  bool usable = false;
};

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

SlopeFit fit_phi_decay(const DiffusionModel& m, const Observable& f, int side) {
  SlopeFit fit;
  const double wmax = std::min(std::fabs(m.scale_image(side)), 1e300) * (1 - 1e-9);
  std::vector<double> lw, lphi;
  for (int i = 10; i >= 0; --i) {
    const double w = wmax * std::pow(10.0, -i / 10.0);
    const double x = m.inverse_scale(side * w);
    const double fx = f.f(x);
    if (!std::isfinite(fx) || fx == 0) continue;
    const LD log_psi = m.log_scale_deriv(x) + std::log(LD(m.diffusion(x)));
    lw.push_back(std::log(w));
    lphi.push_back(double(std::log(LD(std::fabs(fx))) - 2 * log_psi));
  }
  if (lw.size() < 6) return fit;
  fit.usable = true;
  fit.slope = ls_slope(lw, lphi);
  const std::size_t h = lw.size() / 2;
  fit.first_half = ls_slope({lw.begin(), lw.begin() + h + 1}, {lphi.begin(), lphi.begin() + h + 1});
  fit.second_half = ls_slope({lw.begin() + h, lw.end()}, {lphi.begin() + h, lphi.end()});
  fit.top_w = side * std::exp(lw.back());
  return fit;
}

Regime regime_for(double alpha, double rho) {
  if (!(alpha > 0)) throw Error(ErrorCode::ClassificationFailed, "alpha must be positive", {{"alpha", alpha}});
  if (alpha > 2 && !near(alpha, 2)) return Regime::Diffusive;
  if (near(alpha, 2)) return std::isfinite(rho) ? Regime::Diffusive : Regime::CriticalDiffusive;
  if (near(alpha, 1)) return Regime::CriticalLevy;
  return Regime::Levy;
}

// e^{s/2}∫_s^∞ e^{-t/2}/ℓ(e^t) dt, scaled so large s stays representable.
LD inner_rho(const SlowVar& ell, LD s) {
  auto g = [&](LD r) { return std::exp(-r / 2) / LD(ell.at_log(double(s + r))); };
  return integrate_or_throw<LD>(g, 0, 90, {1e-13, 1e-300, 4000});
}

LD rho_density(const SlowVar& ell, LD s) {
  const LD j = inner_rho(ell, s);
  return j * j;
}

// ∫_a^∞ g(s) ds for slowly decaying g, with a power-law tail in s.
bool integrate_slow_tail(const std::function<LD(LD)>& g, LD a, LD& out) {
  constexpr LD S1 = 1e6L;
  const LD k = std::log(g(2 * S1) / g(S1)) / std::log(LD(2));
  if (!(k < -1.05L)) return false;
  const LD body = integrate_or_throw<LD>(g, a, S1, {1e-12, 1e-300, 20000});
  out = body + g(S1) * S1 / (-k - 1);
  return true;
}

}  // namespace

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Diffusive: return "Diffusive";
    case Regime::CriticalDiffusive: return "CriticalDiffusive";
    case Regime::Levy: return "Levy";
    case Regime::CriticalLevy: return "CriticalLevy";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------

double compute_rho_eps(const SlowVar& ell, double eps) {
  if (!(eps > 0)) throw Error(ErrorCode::InvalidRequest, "epsilon must be positive");
  if (eps >= 1) return 0;
  auto q = [&](LD s) { return rho_density(ell, s); };
  return double(integrate_or_throw<LD>(q, 0, std::log(LD(1) / eps), {1e-11, 1e-300, 20000}));
}

double compute_rho(const SlowVar& ell) {
  LD out = 0;
  if (!integrate_slow_tail([&](LD s) { return rho_density(ell, s); }, 0, out)) return kInf;
  return double(out);
}

SlowVarTransforms slow_var_transforms(const SlowVar& ell) {
  SlowVarTransforms t;
  auto inv = [ell](LD s) { return 1 / LD(ell.at_log(double(s))); };
  t.L = [inv](double x) {
    if (!(x > 0)) throw Error(ErrorCode::InvalidRequest, "L needs x > 0");
    return double(integrate_or_throw<LD>(inv, 0, std::log(LD(x)), {1e-12, 1e-300, 4000}));
  };
  t.M = [ell](double x) { return x <= 1 ? 0.0 : compute_rho_eps(ell, 1 / x); };
  LD probe = 0;
  t.N_convergent = integrate_slow_tail(inv, 0, probe);
  const bool ok = t.N_convergent;
  t.N = [inv, ok](double x) {
    if (!ok) throw Error(ErrorCode::Divergent, "∫ dv/(vℓ(v)) diverges at infinity");
    LD out = 0;
    integrate_slow_tail(inv, std::log(LD(x)), out);
    return double(out);
  };
  return t;
}

// ---------------------------------------------------------------------------

RegimeReport classify_regime(const DiffusionModel& model, const Observable& f,
                             const std::optional<TailClaim>& claimed, const ClassifyOptions& opt) {
  RegimeReport r;
  if (claimed) {
    r.alpha = claimed->alpha;
    r.ell = claimed->ell;
    r.f_plus = claimed->f_plus;
    r.f_minus = claimed->f_minus;
    if (!(r.alpha > 0)) throw Error(ErrorCode::ClassificationFailed, "claimed alpha must be positive");
    const double scale = std::fabs(r.f_plus) + std::fabs(r.f_minus);
    if (!(scale > 0)) throw Error(ErrorCode::ClassificationFailed, "claimed tail limits are both zero");
    r.tail_plus = tail_grid(model, f, r.alpha, r.ell, +1, opt);
    r.tail_minus = tail_grid(model, f, r.alpha, r.ell, -1, opt);
    check_tail(r.tail_plus, r.f_plus, scale, +1, opt);
    check_tail(r.tail_minus, r.f_minus, scale, -1, opt);
  } else {
    r.alpha_estimated = true;
    r.ell = slow_one();
    r.warnings.push_back("alpha estimated from the decay of phi; ell set to 1");
    const SlopeFit p = fit_phi_decay(model, f, +1), m = fit_phi_decay(model, f, -1);
    if (!p.usable && !m.usable) {
      throw Error(ErrorCode::ClassificationFailed, "observable vanishes on both tails");
    }
    double slope = 0, n = 0;
    for (const SlopeFit* s : {&p, &m}) {
      if (!s->usable) continue;
      if (std::fabs(s->first_half - s->second_half) > 0.05) {
        throw Error(ErrorCode::ClassificationFailed, "log-log slope of phi is not stable",
                    {{"first_half", s->first_half}, {"second_half", s->second_half}});
      }
      slope += s->slope;
      n += 1;
    }
    slope /= n;
    if (slope + 2 < 0.02) {
      r.alpha = kInf;
      r.warnings.push_back("phi decays faster than any admissible power; treated as diffusive");
    } else {
      r.alpha = 1 / (slope + 2);
      if (std::fabs(r.alpha - 2) < 0.1) r.warnings.push_back("estimated alpha near 2; supply alpha explicitly");
      if (std::fabs(r.alpha - 1) < 0.05) {
        r.warnings.push_back("estimated alpha near 1; supply alpha explicitly for the critical case");
      }
      r.tail_plus = tail_grid(model, f, r.alpha, r.ell, +1, opt);
      r.tail_minus = tail_grid(model, f, r.alpha, r.ell, -1, opt);
      r.f_plus = r.tail_plus.back().ratio;
      r.f_minus = r.tail_minus.back().ratio;
    }
  }
  r.rho = near(r.alpha, 2) ? compute_rho(r.ell) : kInf;
  r.regime = r.alpha_estimated && std::isfinite(r.alpha) && !(r.alpha > 2)
                 ? (near(r.alpha, 1) ? Regime::CriticalLevy : Regime::Levy)
                 : regime_for(r.alpha, r.rho);
  if (r.alpha_estimated && r.alpha > 2) r.regime = Regime::Diffusive;
  r.f_in_L1mu = r.alpha > 1 || (near(r.alpha, 1) && slow_var_transforms(r.ell).N_convergent);
  if (r.alpha >= 2 && !f.continuous) r.warnings.push_back("alpha >= 2 requires a continuous observable");
  if (r.f_in_L1mu) {
    try {
      r.mu_f = model.invariant_integral(f.f).value;
      const double scale = model.invariant_integral([&](double x) { return std::fabs(f.f(x)); }).value;
      if (std::fabs(r.mu_f) > 1e-7 * std::max(scale, 1e-300)) {
        r.warnings.push_back("mu(f) is not zero; center the observable (e.g. centered_id)");
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NotIntegrable) throw;
      r.warnings.push_back("mu(|f|) diverges numerically although alpha > 1");
    }
  } else {
    r.mu_f = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// Outward integrals O(x) = ∫ f·m over [x, ±∞) at each node of one side.
std::vector<LD> outward_at_nodes(const DiffusionModel& m, const RealFn& f, int side) {
  const auto& u = m.nodes(side);
  std::vector<LD> out(u.size());
  try {
    out.back() = m.speed_tail_integral(f, side * double(u.back()), side);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotIntegrable) {
      throw Error(ErrorCode::PoissonUnavailable, "tail integral of f·m diverges", e.details());
    }
    throw;
  }
  for (std::size_t k = u.size() - 1; k-- > 0;) {
    const double a = side * double(u[k]), b = side * double(u[k + 1]);
    out[k] = out[k + 1] + m.speed_integral(f, std::min(a, b), std::max(a, b));
  }
  return out;
}

LD outward_at(const DiffusionModel& m, const RealFn& f, const std::vector<LD>& table, double x) {
  const int side = x >= 0 ? 1 : -1;
  const auto& u = m.nodes(side);
  const LD ax = std::fabs(LD(x));
  auto it = std::upper_bound(u.begin(), u.end(), ax);
  if (it == u.end()) return table.back();
  const std::size_t k1 = std::size_t(it - u.begin());
  const double a = x, b = side * double(u[k1]);
  return table[k1] + m.speed_integral(f, std::min(a, b), std::max(a, b));
}

void require_centered(const DiffusionModel& m, const Observable& f) {
  double mu = 0, scale = 0;
  try {
    mu = m.invariant_integral(f.f).value;
    scale = m.invariant_integral([&](double x) { return std::fabs(f.f(x)); }).value;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotIntegrable) {
      throw Error(ErrorCode::PoissonUnavailable, "f is not integrable against the invariant measure");
    }
    throw;
  }
  if (std::fabs(mu) > 1e-8 * std::max(scale, 1e-300)) {
    throw Error(ErrorCode::NotCentered, "observable must have zero mean under the invariant law",
                {{"mu_f", mu}, {"mu_abs_f", scale}});
  }
}

// ∫ over [x_k, x_{k+1}] on the outer (𝔰'·O²) integrand with power-law tail.
LD variance_side(const DiffusionModel& m, const RealFn& f, int side, const std::vector<LD>& O) {
  const auto& u = m.nodes(side);
  LD total = 0;
  for (std::size_t k = 0; k + 1 < u.size(); ++k) {
    auto integrand = [&](LD t) {
      const double x = side * double(t);
      const double b = side * double(u[k + 1]);
      const LD o = O[k + 1] + m.speed_integral(f, std::min(x, b), std::max(x, b));
      return std::exp(m.log_scale_deriv(x)) * o * o;
    };
    total += integrate_or_throw<LD>(integrand, u[k], u[k + 1], {1e-11, 1e-300, 2000});
  }
  const double R = side * double(u.back());
  auto value = [&](double x) {
    const LD o = outward_at(m, f, O, x);
    return std::exp(m.log_scale_deriv(x)) * o * o;
  };
  const LD v1 = value(R), v2 = value(R / 2);
  if (v1 == 0) return total;
  const LD k12 = std::log(v1 / v2) / std::log(LD(2));
  if (!(k12 < -1.02L)) {
    throw Error(ErrorCode::Divergent, "diffusive variance integral diverges", {{"log_slope", double(k12)}});
  }
  return total + v1 * std::fabs(LD(R)) / (-k12 - 1);
}

// ∫ G over uniformly spaced nodes [0, n-1] with a fourth-order interval rule.
LD composite_integral(const std::vector<LD>& G, LD h, std::size_t a, std::size_t b) {
  LD s = 0;
  for (std::size_t j = a; j < b; ++j) {
    if (j >= 1 && j + 2 < G.size()) {
      s += h * (-G[j - 1] + 13 * G[j] + 13 * G[j + 1] - G[j + 2]) / 24;
    } else if (j + 2 < G.size()) {
      s += h * (5 * G[j] + 8 * G[j + 1] - G[j + 2]) / 12;
    } else {
      s += h * (-G[j - 1] + 8 * G[j] + 5 * G[j + 1]) / 12;
    }
  }
  return s;
}

LD power_tail(LD v_end, LD v_prev, LD w_end, LD w_prev, LD exponent_shift = 0) {
  if (v_end == 0) return 0;
  const LD k = std::log(std::fabs(v_end / v_prev)) / std::log(std::fabs(w_end / w_prev)) + exponent_shift;
  if (!(k < -1)) throw Error(ErrorCode::Divergent, "tail of w-space integral does not decay");
  return v_end * std::fabs(w_end) / (-k - 1);
}

}  // namespace

double diffusive_variance(const DiffusionModel& model, const Observable& f) {
  require_centered(model, f);
  const double kappa = model.kappa();
  LD total = 0;
  for (int side : {1, -1}) {
    const auto O = outward_at_nodes(model, f.f, side);
    total += variance_side(model, f.f, side, O);
  }
  return double(4 * LD(kappa) * total);
}

PoissonSolution poisson_solution(const DiffusionModel& model, const Observable& f) {
  require_centered(model, f);
  const double kappa = model.kappa();
  auto plus = std::make_shared<std::vector<LD>>(outward_at_nodes(model, f.f, 1));
  auto minus = std::make_shared<std::vector<LD>>(outward_at_nodes(model, f.f, -1));
  PoissonSolution ps;
  const RealFn fn = f.f;
  ps.g_prime = [model, fn, plus, minus](double x) {
    const LD o = outward_at(model, fn, x >= 0 ? *plus : *minus, x);
    const LD t = x >= 0 ? o : -o;  // ∫_x^∞ f·m, using ∫_ℝ f·m = 0 on the left
    return double(2 * std::exp(model.log_scale_deriv(x)) * t);
  };
  auto gp = ps.g_prime;
  ps.g = [gp](double x) {
    if (x == 0) return 0.0;
    return integrate_or_throw<double>(gp, 0.0, x, {1e-10, 1e-14, 4000});
  };

  // Independent route: w-space, Φ(w) = ∫_w^∞ φ, γ² = 4κ∫Φ² dw.
  const TransformedCoeffs tc(model, f.f);
  const int lo = tc.first_index(), hi = tc.last_index();
  const std::size_t n = std::size_t(hi - lo + 1);
  const LD h = tc.step();
  std::vector<LD> G(n), W(n), Phi(n), J(n);
  for (int j = lo; j <= hi; ++j) {
    const LD u = LD(j) * h;
    W[j - lo] = tc.w_scale() * std::sinh(u);
    G[j - lo] = LD(tc.node_phi(j)) * tc.w_scale() * std::cosh(u);
    J[j - lo] = tc.w_scale() * std::cosh(u);
  }
  const std::size_t zero = std::size_t(-lo);
  const LD right_tail = power_tail(tc.node_phi(hi), tc.node_phi(hi - 1), W[n - 1], W[n - 2]);
  const LD left_tail = power_tail(tc.node_phi(lo), tc.node_phi(lo + 1), W[0], W[1]);
  LD acc = right_tail;
  Phi[n - 1] = acc;
  for (std::size_t j = n - 1; j-- > zero;) {
    acc += composite_integral(G, h, j, j + 1);
    Phi[j] = acc;
  }
  acc = left_tail;
  Phi[0] = -acc;
  for (std::size_t j = 1; j < zero; ++j) {
    acc += composite_integral(G, h, j - 1, j);
    Phi[j] = -acc;
  }
  std::vector<LD> H(n);
  for (std::size_t j = 0; j < n; ++j) H[j] = Phi[j] * Phi[j] * J[j];
  LD total = composite_integral(H, h, 0, n - 1);
  total += power_tail(Phi[n - 1] * Phi[n - 1], Phi[n - 2] * Phi[n - 2], W[n - 1], W[n - 2]);
  total += power_tail(Phi[0] * Phi[0], Phi[1] * Phi[1], W[0], W[1]);
  ps.gamma_sq = double(4 * LD(kappa) * total);
  return ps;
}

// ---------------------------------------------------------------------------

std::complex<double> LimitLaw::z(double xi) const {
  using namespace std::complex_literals;
  const double s = sgn(xi);
  switch (regime) {
    case Regime::Levy: return 1.0 - 1i * skew * std::tan(alpha * kPi / 2) * s;
    case Regime::CriticalLevy:
      if (xi == 0) return 1.0;
      return 1.0 + 1i * (2 / kPi) * s * (skew * (std::log(std::fabs(xi)) + bracket_const) + asym_log);
    default: return 1.0;
  }
}

std::complex<double> LimitLaw::cf(double xi, double t) const {
  if (regime == Regime::Diffusive || regime == Regime::CriticalDiffusive) {
    return std::exp(-t * sigma * sigma * xi * xi / 2);
  }
  const double eta = sigma * xi;
  if (eta == 0) return 1.0;
  return std::exp(-t * std::pow(std::fabs(eta), alpha) * z(eta));
}

std::complex<double> limit_cf(const LimitLaw& law, double xi, double t) { return law.cf(xi, t); }

StableParams LimitLaw::params() const {
  switch (regime) {
    case Regime::Diffusive:
    case Regime::CriticalDiffusive: return {2, sigma * sigma / 2, 0, 0};
    case Regime::Levy: return {alpha, std::pow(sigma, alpha), skew, 0};
    case Regime::CriticalLevy: {
      const double tau = -sigma * (2 / kPi) * (skew * (std::log(sigma) + bracket_const) + asym_log);
      return {1, sigma, skew, tau};
    }
  }
  return {};
}

double LimitLaw::normalization(double eps) const {
  switch (regime) {
    case Regime::Diffusive: return std::sqrt(eps);
    case Regime::CriticalDiffusive: return std::sqrt(eps / rho_eps(eps));
    case Regime::Levy: return std::pow(eps, 1 / alpha) * ell(1 / eps);
    case Regime::CriticalLevy: return eps * ell(1 / eps);
  }
  return 1;
}

double LimitLaw::centering(double eps) const {
  return regime == Regime::CriticalLevy ? xi_eps(eps) : 0.0;
}

double LimitLaw::xi_eps_asymptotic(double eps) const {
  if (regime != Regime::CriticalLevy) {
    throw Error(ErrorCode::InvalidRequest, "centering is defined only for alpha = 1");
  }
  return kappa * (f_plus + f_minus) * ell(1 / eps) * zeta_eps(eps);
}

LimitLaw limit_law(const RegimeReport& report, const DiffusionModel& model, const Observable& f) {
  LimitLaw law;
  law.regime = report.regime;
  law.alpha = report.alpha;
  law.ell = report.ell;
  law.f_plus = report.f_plus;
  law.f_minus = report.f_minus;
  law.f_in_L1mu = report.f_in_L1mu;
  law.rho = report.rho;
  law.kappa = model.kappa();
  const double k = law.kappa, fp = law.f_plus, fm = law.f_minus;
  const SlowVar ell = law.ell;
  auto not_available = [](const char* what) {
    return [what](double) -> double {
      throw Error(ErrorCode::InvalidRequest, std::string(what) + " is not defined in this regime");
    };
  };
  law.xi_eps = not_available("xi_eps");
  law.zeta_eps = not_available("zeta_eps");
  law.rho_eps = not_available("rho_eps");

  switch (law.regime) {
    case Regime::Diffusive: {
      const double var = diffusive_variance(model, f);
      law.sigma = std::sqrt(var);
      if (std::isfinite(law.alpha) || report.alpha_estimated) {
        law.gamma_sq = poisson_solution(model, f).gamma_sq;
      }
      break;
    }
    case Regime::CriticalDiffusive:
      law.sigma = std::sqrt(4 * k * (fp * fp + fm * fm));
      law.rho_eps = [ell](double eps) { return compute_rho_eps(ell, eps); };
      break;
    case Regime::Levy: {
      const double a = law.alpha;
      const double mass = std::pow(std::fabs(fp), a) + std::pow(std::fabs(fm), a);
      law.sigma = std::pow(k * stable_lambda(a) * mass, 1 / a);
      law.skew = (sgn(fp) * std::pow(std::fabs(fp), a) + sgn(fm) * std::pow(std::fabs(fm), a)) / mass;
      break;
    }
    case Regime::CriticalLevy: {
      const double F = std::fabs(fp) + std::fabs(fm);
      law.sigma = k * kPi / 2 * F;
      law.skew = (fp + fm) / F;
      law.bracket_const = std::log(2 / (kPi * F)) + 2 * kEulerGamma + std::log(2.0);
      law.asym_log = (xlogx(fp) + xlogx(fm)) / F;
      const RealFn fn = f.f;
      law.xi_eps = [model, fn, k, ell](double eps) {
        const double a = model.inverse_scale(-k / eps), b = model.inverse_scale(k / eps);
        return k * ell(1 / eps) * double(model.speed_integral(fn, a, b));
      };
      const auto tr = slow_var_transforms(ell);
      const bool in_l1 = law.f_in_L1mu;
      law.zeta_eps = [tr, in_l1](double eps) { return in_l1 ? -tr.N(1 / eps) : tr.L(1 / eps); };
      break;
    }
  }
  if (law.regime == Regime::Levy || law.regime == Regime::CriticalLevy) {
    const double a = law.alpha;
    law.lambda_alpha = k * stable_lambda(a);
    const double pp = std::pow(std::fabs(fp), a), pm = std::pow(std::fabs(fm), a);
    law.levy_c_plus = law.lambda_alpha * ((fp > 0 ? pp : 0) + (fm > 0 ? pm : 0));
    law.levy_c_minus = law.lambda_alpha * ((fp < 0 ? pp : 0) + (fm < 0 ? pm : 0));
    if (law.regime == Regime::CriticalLevy) {
      law.generator_drift_a =
          -(fp + fm) * (2 * kEulerGamma + std::log(2.0) + k * std::log(k) + k * kPi / 2 * kSineConstantA) -
          (xlogx(fp) + xlogx(fm));
    }
  }
  return law;
}

}  // namespace stablediff
