#include "stablediff/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "stablediff/error.hpp"
#include "stablediff/quadrature.hpp"

namespace stablediff {

namespace {

using LD = long double;

constexpr LD kExponentGuard = 10000.0L;  // |2∫b/σ²| beyond which tables stop
constexpr int kMaxNodes = 2'000'000;
constexpr double kLn2 = 0.693147180559945309417;

int side_index(int side) { return side >= 0 ? 0 : 1; }

}  // namespace

struct DiffusionModel::Tables {
  struct Side {
    int sign = 1;
    std::vector<LD> u, I, S, M;  // |x| nodes, ∫b/σ², |𝔰|, ∫m from 0
    double reach = 0;
    bool guard_hit = false;
    LD mass_tail = 0;
    LD mass_tail_err = 0;
    bool mass_divergent = false;
    bool scale_unbounded = false;
  };

  std::string name;
  RealFn b, sigma;
  ModelOptions opt;
  Side side[2];

  LD g(LD x) const {
    const LD s = sigma(double(x));
    return LD(b(double(x))) / (s * s);
  }

  const Side& side_of(LD x) const { return side[x >= 0 ? 0 : 1]; }

  std::size_t panel(const Side& sd, LD u) const {
    auto it = std::upper_bound(sd.u.begin(), sd.u.end(), u);
    std::size_t k = it == sd.u.begin() ? 0 : std::size_t(it - sd.u.begin()) - 1;
    return std::min(k, sd.u.size() - 1);
  }

  // Potential increment s·∫_{u0}^{u1} g(s t) dt on one side.
  LD potential_increment(const Side& sd, LD u0, LD u1) const {
    if (u1 == u0) return 0;
    const int s = sd.sign;
    auto integrand = [&](LD t) { return g(s * t); };
    QuadOptions q{1e-14, 1e-16, 2000};
    return s * integrate_or_throw<LD>(integrand, u0, u1, q);
  }

  LD potential(LD x) const {
    const Side& sd = side_of(x);
    const LD u = std::fabs(x);
    const std::size_t k = panel(sd, u);
    return sd.I[k] + potential_increment(sd, sd.u[k], u);
  }

  // ∫_{u0}^{u1} exp(sgn·2·I(s t)) w(s t) dt with I continued from node k.
  template <class Weight>
  LD panel_integral(const Side& sd, std::size_t k, LD u0, LD u1, int expo_sign, Weight&& w,
                    double rel = 1e-13, double abs = 0) const {
    if (u1 == u0) return 0;
    const int s = sd.sign;
    const LD base = sd.I[k];
    const LD uk = sd.u[k];
    auto integrand = [&](LD t) {
      const LD I = base + potential_increment(sd, uk, t);
      return std::exp(expo_sign * 2 * I) * w(s * t);
    };
    QuadOptions q{rel, abs, 4000};
    return integrate_or_throw<LD>(integrand, u0, u1, q);
  }

  LD abs_scale(LD x) const {
    const Side& sd = side_of(x);
    const LD u = std::fabs(x);
    const std::size_t k = panel(sd, u);
    return sd.S[k] + panel_integral(sd, k, sd.u[k], u, -1, [](LD) { return LD(1); });
  }

  LD log_speed(LD x) const {
    const LD s = sigma(double(x));
    return 2 * potential(x) - 2 * std::log(s);
  }

  void build_side(int sign);
};

void DiffusionModel::Tables::build_side(int sign) {
  Side& sd = side[side_index(sign)];
  sd.sign = sign;
  const LD X = opt.domain_cutoff;
  LD u = 0, I = 0, S = 0, M = 0;
  sd.u = {0};
  sd.I = {0};
  sd.S = {0};
  sd.M = {0};
  while (u < X) {
    const LD slope = std::fabs(2 * g(sign * u));
    LD h = std::min<LD>(0.05L * std::max<LD>(u, 1), 0.5L / std::max<LD>(slope, 1e-300L));
    h = std::max<LD>(h, 1e-7L * std::max<LD>(u, 1));
    h = std::min(h, X - u);
    LD dI = 0;
    for (int tries = 0; tries < 60; ++tries) {
      dI = potential_increment(sd, u, u + h);
      if (std::fabs(2 * dI) <= 2 || h <= 1e-9L * std::max<LD>(u, 1)) break;
      h /= 2;
    }
    if (std::fabs(2 * (I + dI)) > kExponentGuard) {
      sd.guard_hit = true;
      break;
    }
    const std::size_t k = sd.u.size() - 1;
    const LD dS = panel_integral(sd, k, u, u + h, -1, [](LD) { return LD(1); });
    const LD dM = panel_integral(sd, k, u, u + h, +1, [&](LD x) {
      const LD s = sigma(double(x));
      return 1 / (s * s);
    });
    u += h;
    I += dI;
    S += dS;
    M += dM;
    sd.u.push_back(u);
    sd.I.push_back(I);
    sd.S.push_back(S);
    sd.M.push_back(M);
    if (int(sd.u.size()) > kMaxNodes) {
      throw Error(ErrorCode::InvalidModel, "scale table exceeded node budget", {{"x", double(sign * u)}});
    }
  }
  sd.reach = double(sd.u.back());
  if (sd.reach <= 0) {
    throw Error(ErrorCode::InvalidModel, "drift potential overflows immediately");
  }

  // Power-law tails beyond the reach, from the local log-log slopes.
  const LD R = sd.u.back();
  const LD lm1 = log_speed(sign * R), lm2 = log_speed(sign * R / 2), lm4 = log_speed(sign * R / 4);
  const LD k12 = (lm1 - lm2) / LD(kLn2), k24 = (lm2 - lm4) / LD(kLn2);
  const LD head = std::exp(lm1) * R;
  if (lm1 < -11000 || (std::isfinite(double(M)) && head < 1e-30L * M && k12 < -1.05L)) {
    sd.mass_tail = 0;
  } else if (k12 < -1.02L) {
    sd.mass_tail = head / (-k12 - 1);
    const LD alt = k24 < -1.02L ? head / (-k24 - 1) : sd.mass_tail * 2;
    sd.mass_tail_err = std::fabs(alt - sd.mass_tail);
  } else {
    sd.mass_divergent = true;
  }
  const LD ls1 = -2 * sd.I.back(), ls2 = -2 * potential(sign * R / 2);
  const LD slope_scale = (ls1 - ls2) / LD(kLn2);
  sd.scale_unbounded = slope_scale >= -1.02L && S > LD(opt.escape_threshold);
}

DiffusionModel::DiffusionModel(std::string name, RealFn drift, RealFn diffusion, ModelOptions opt) {
  if (!drift || !diffusion) throw Error(ErrorCode::InvalidModel, "missing coefficient function");
  if (!(opt.domain_cutoff > 0) || !(opt.quadrature_tol > 0)) {
    throw Error(ErrorCode::InvalidModel, "domain_cutoff and quadrature_tol must be positive");
  }
  auto t = std::make_shared<Tables>();
  t->name = std::move(name);
  t->b = std::move(drift);
  t->sigma = std::move(diffusion);
  t->opt = opt;
  for (int i = -200; i <= 200; ++i) {
    const double x = opt.domain_cutoff * i / 200.0;
    const double s = t->sigma(x), bx = t->b(x);
    if (!(s > 0) || !std::isfinite(s) || !std::isfinite(bx)) {
      throw Error(ErrorCode::InvalidModel, "diffusion must be positive and coefficients finite",
                  {{"x", x}, {"sigma", s}, {"drift", bx}});
    }
  }
  t->build_side(+1);
  t->build_side(-1);
  t_ = std::move(t);
}

const std::string& DiffusionModel::name() const { return t_->name; }
double DiffusionModel::drift(double x) const { return t_->b(x); }
double DiffusionModel::diffusion(double x) const { return t_->sigma(x); }
double DiffusionModel::domain_cutoff() const { return t_->opt.domain_cutoff; }
double DiffusionModel::quadrature_tol() const { return t_->opt.quadrature_tol; }
double DiffusionModel::reach(int side) const { return t_->side[side_index(side)].reach; }

const std::vector<long double>& DiffusionModel::nodes(int side) const {
  return t_->side[side_index(side)].u;
}

static void check_domain(const DiffusionModel& m, double x) {
  if (!(std::fabs(x) <= m.reach(x >= 0 ? 1 : -1) * (1 + 1e-12))) {
    throw Error(ErrorCode::OutOfDomain, "point outside the tabulated domain",
                {{"x", x}, {"reach", m.reach(x >= 0 ? 1 : -1)}});
  }
}

long double DiffusionModel::drift_potential(double x) const {
  check_domain(*this, x);
  return t_->potential(x);
}

double DiffusionModel::scale(double x) const {
  check_domain(*this, x);
  const LD a = t_->abs_scale(x);
  return double(x >= 0 ? a : -a);
}

long double DiffusionModel::log_abs_scale(double x) const {
  check_domain(*this, x);
  return std::log(t_->abs_scale(x));
}

long double DiffusionModel::log_scale_deriv(double x) const { return -2 * drift_potential(x); }
double DiffusionModel::scale_deriv(double x) const { return double(std::exp(log_scale_deriv(x))); }

long double DiffusionModel::log_speed_density(double x) const {
  check_domain(*this, x);
  return t_->log_speed(x);
}
double DiffusionModel::speed_density(double x) const { return double(std::exp(log_speed_density(x))); }

double DiffusionModel::scale_image(int side) const {
  const auto& sd = t_->side[side_index(side)];
  return double(sd.sign * sd.S.back());
}

double DiffusionModel::inverse_scale(double w) const {
  if (w == 0) return 0;
  const auto& sd = t_->side[w > 0 ? 0 : 1];
  const LD a = std::fabs(LD(w));
  if (!(a <= sd.S.back())) {
    throw Error(ErrorCode::OutOfDomain, "value outside the image of the scale function",
                {{"w", w}, {"image_end", double(sd.sign * sd.S.back())}});
  }
  // Bisection over the node table, then Illinois secant inside one panel.
  auto it = std::upper_bound(sd.S.begin(), sd.S.end(), a);
  std::size_t k = it == sd.S.begin() ? 0 : std::size_t(it - sd.S.begin()) - 1;
  if (k + 1 >= sd.u.size()) return double(sd.sign * sd.u.back());
  LD lo = sd.u[k], hi = sd.u[k + 1];
  LD flo = sd.S[k] - a, fhi = sd.S[k + 1] - a;
  if (flo == 0) return double(sd.sign * lo);
  auto F = [&](LD u) {
    return sd.S[k] + t_->panel_integral(sd, k, sd.u[k], u, -1, [](LD) { return LD(1); }, 1e-15) - a;
  };
  int side_kept = 0;
  for (int iter = 0; iter < 200; ++iter) {
    LD mid;
    if (iter < 2) {
      mid = (lo + hi) / 2;
    } else {
      mid = hi - fhi * (hi - lo) / (fhi - flo);
      if (!(mid > lo && mid < hi)) mid = (lo + hi) / 2;
    }
    const LD fm = F(mid);
    if (fm == 0) return double(sd.sign * mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
      if (side_kept == -1) fhi /= 2;
      side_kept = -1;
    } else {
      hi = mid;
      fhi = fm;
      if (side_kept == 1) flo /= 2;
      side_kept = 1;
    }
    if (hi - lo <= 1e-16L * (1 + hi)) break;
  }
  const LD root = std::fabs(flo) < std::fabs(fhi) ? lo : hi;
  return double(sd.sign * root);
}

Estimate DiffusionModel::speed_mass() const {
  const auto& p = t_->side[0];
  const auto& m = t_->side[1];
  if (p.mass_divergent || m.mass_divergent) {
    return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  }
  const LD total = p.M.back() + m.M.back() + p.mass_tail + m.mass_tail;
  const LD err = p.mass_tail_err + m.mass_tail_err + total * LD(t_->opt.quadrature_tol);
  return {double(total), double(err)};
}

double DiffusionModel::kappa() const {
  const Estimate z = speed_mass();
  if (!std::isfinite(z.value)) {
    throw Error(ErrorCode::NotPositiveRecurrent, "speed measure has infinite mass",
                {{"reach_plus", reach(1)}, {"reach_minus", reach(-1)}});
  }
  return 1.0 / z.value;
}

HarrisVerdict DiffusionModel::check_harris() const {
  HarrisVerdict v;
  v.scale_at_plus = scale_image(1);
  v.scale_at_minus = scale_image(-1);
  v.scale_unbounded_plus = t_->side[0].scale_unbounded;
  v.scale_unbounded_minus = t_->side[1].scale_unbounded;
  const Estimate z = speed_mass();
  v.speed_mass = z.value;
  v.speed_finite = std::isfinite(z.value);
  v.admissible = v.scale_unbounded_plus && v.scale_unbounded_minus && v.speed_finite;
  if (!v.speed_finite) v.reason = "speed measure infinite";
  if (!v.scale_unbounded_plus || !v.scale_unbounded_minus) {
    v.reason += v.reason.empty() ? "scale function bounded" : "; scale function bounded";
  }
  if (v.admissible) v.reason = "ok";
  return v;
}

long double DiffusionModel::speed_integral(const RealFn& h, double a, double b) const {
  if (a > b) return -speed_integral(h, b, a);
  if (a < 0 && b > 0) return speed_integral(h, a, 0) + speed_integral(h, 0, b);
  check_domain(*this, a);
  check_domain(*this, b);
  const int sign = (a < 0 || b < 0) ? -1 : 1;
  const auto& sd = t_->side[side_index(sign)];
  LD u0 = std::fabs(LD(a)), u1 = std::fabs(LD(b));
  if (u0 > u1) std::swap(u0, u1);
  auto weight = [&](LD x) {
    const LD s = t_->sigma(double(x));
    return LD(h(double(x))) / (s * s);
  };
  LD total = 0;
  std::size_t k = t_->panel(sd, u0);
  LD lo = u0;
  while (lo < u1) {
    const LD hi = (k + 1 < sd.u.size()) ? std::min(sd.u[k + 1], u1) : u1;
    const LD dM = (k + 1 < sd.u.size()) ? sd.M[k + 1] - sd.M[k] : 0;
    total += t_->panel_integral(sd, k, lo, hi, +1, weight, 1e-12, 1e-15L * dM);
    lo = hi;
    ++k;
    if (k >= sd.u.size()) break;
  }
  return total;
}

long double DiffusionModel::speed_tail_integral(const RealFn& h, double x, int side) const {
  const auto& sd = t_->side[side_index(side)];
  const double R = sd.sign * sd.reach;
  LD inner = speed_integral(h, x, R);
  if (side < 0) inner = -inner;  // orientation: integrate from x outward
  auto log_abs = [&](double y) {
    const double hv = std::fabs(h(y));
    if (hv == 0) return -std::numeric_limits<LD>::infinity();
    return t_->log_speed(y) + std::log(LD(hv));
  };
  const LD l1 = log_abs(R), l2 = log_abs(R / 2);
  if (!std::isfinite(double(l1)) || l1 < -11000) return inner;
  const LD k12 = (l1 - l2) / LD(kLn2);
  const LD head = std::exp(l1) * sd.reach;
  if (k12 < -1.02L) {
    const LD sgn = h(R) >= 0 ? 1 : -1;
    return inner + sgn * head / (-k12 - 1);
  }
  if (head < 1e-300L) return inner;
  throw Error(ErrorCode::NotIntegrable, "integrand tail does not decay against the speed measure",
              {{"x", R}, {"log_slope", double(k12)}});
}

Estimate DiffusionModel::invariant_integral(const RealFn& h) const {
  const double k = kappa();
  const LD plus = speed_tail_integral(h, 0, 1);
  const LD minus = speed_tail_integral(h, 0, -1);
  const LD val = LD(k) * (plus + minus);
  const LD scale = LD(k) * (std::fabs(plus) + std::fabs(minus));
  const Estimate z = speed_mass();
  return {double(val), double(scale * LD(t_->opt.quadrature_tol) + std::fabs(val) * z.error / z.value)};
}

PsiPhi DiffusionModel::psi_phi(const RealFn& f, double w) const {
  PsiPhi out;
  out.x = inverse_scale(w);
  const LD lp = log_scale_deriv(out.x) + std::log(LD(diffusion(out.x)));
  out.log_psi = double(lp);
  out.psi = double(std::exp(lp));
  out.phi = double(LD(f(out.x)) * std::exp(-2 * lp));
  return out;
}

// ---------------------------------------------------------------------------

TransformedCoeffs::TransformedCoeffs(const DiffusionModel& model, RealFn f, double step, double w_scale)
    : h_(step), w0_(w_scale) {
  if (!(step > 0) || !(w_scale > 0)) throw Error(ErrorCode::InvalidRequest, "bad table spacing");
  constexpr double kWCap = 1e60;
  const double wp = std::min(model.scale_image(1), kWCap);
  const double wm = std::min(-model.scale_image(-1), kWCap);
  j_hi_ = int(std::floor(std::asinh(wp / w0_) / h_ * (1 - 1e-12)));
  j_lo_ = -int(std::floor(std::asinh(wm / w0_) / h_ * (1 - 1e-12)));
  if (j_hi_ - j_lo_ < 4) throw Error(ErrorCode::OutOfDomain, "scale image too small for a table");
  const int n = j_hi_ - j_lo_ + 1;
  logpsi_.resize(n);
  phi_.resize(n);
  for (int j = j_lo_; j <= j_hi_; ++j) {
    const double w = node_w(j);
    const PsiPhi pp = model.psi_phi(f, w);
    logpsi_[j - j_lo_] = pp.log_psi;
    phi_[j - j_lo_] = pp.phi;
  }
}

double TransformedCoeffs::node_w(int j) const { return w0_ * std::sinh(j * h_); }
double TransformedCoeffs::w_min() const { return node_w(j_lo_); }
double TransformedCoeffs::w_max() const { return node_w(j_hi_); }

double TransformedCoeffs::interp(const std::vector<double>& v, double u, bool log_extrapolate) const {
  const int n = int(v.size());
  const double pos = u / h_ - j_lo_;
  if (pos <= 0 || pos >= n - 1) {
    const bool low = pos <= 0;
    const int e = low ? 0 : n - 1, e2 = low ? 1 : n - 2;
    const double d = low ? pos : pos - (n - 1);
    if (log_extrapolate) {
      if (v[e] != 0 && (v[e] > 0) == (v[e2] > 0)) {
        const double k = std::log(v[e] / v[e2]) * (low ? -1 : 1);
        return v[e] * std::exp(k * d);
      }
      return v[e];
    }
    return v[e] + (v[e] - v[e2]) * (low ? -d : d);
  }
  int i = int(std::floor(pos));
  i = std::clamp(i, 1, n - 3);
  const double t = pos - i;
  const double p0 = v[i - 1], p1 = v[i], p2 = v[i + 1], p3 = v[i + 2];
  // Cubic Lagrange through nodes at -1, 0, 1, 2.
  return p0 * (-t * (t - 1) * (t - 2) / 6) + p1 * ((t + 1) * (t - 1) * (t - 2) / 2) +
         p2 * (-(t + 1) * t * (t - 2) / 2) + p3 * ((t + 1) * t * (t - 1) / 6);
}

double TransformedCoeffs::log_psi(double w) const { return interp(logpsi_, std::asinh(w / w0_), false); }
double TransformedCoeffs::psi(double w) const { return std::exp(log_psi(w)); }
double TransformedCoeffs::inv_psi_sq(double w) const { return std::exp(-2 * log_psi(w)); }
double TransformedCoeffs::phi(double w) const { return interp(phi_, std::asinh(w / w0_), true); }

// ---------------------------------------------------------------------------

DiffusionModel model_from_table(const std::string& path, ModelOptions opt) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open coefficient table: " + path);
  std::vector<double> xs, bs, ss;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, b, s;
    if (!(row >> x >> b >> s)) continue;  // header or malformed row
    xs.push_back(x);
    bs.push_back(b);
    ss.push_back(s);
  }
  if (xs.size() < 2) throw Error(ErrorCode::InvalidModel, "coefficient table needs at least two rows");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw Error(ErrorCode::InvalidModel, "table x column must increase");
  }
  auto lerp = [xs](std::vector<double> ys) {
    return [xs, ys](double x) {
      if (x <= xs.front()) return ys.front();
      if (x >= xs.back()) return ys.back();
      const std::size_t k = std::size_t(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
      const double t = (x - xs[k]) / (xs[k + 1] - xs[k]);
      return ys[k] + t * (ys[k + 1] - ys[k]);
    };
  };
  return DiffusionModel("table:" + path, lerp(bs), lerp(ss), opt);
}

}  // namespace stablediff
