#include "stablediff/validate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "stablediff/error.hpp"
#include "stablediff/rng.hpp"

namespace stablediff {

namespace {

constexpr std::uint32_t kBootstrapStream = 11;

double slope(const std::vector<double>& x, const std::vector<double>& y) {
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

double ecf_modulus(const std::vector<double>& s, const std::vector<std::size_t>* idx, double xi) {
  double c = 0, q = 0;
  const std::size_t n = idx ? idx->size() : s.size();
  for (std::size_t j = 0; j < n; ++j) {
    const double x = xi * s[idx ? (*idx)[j] : j];
    c += std::cos(x);
    q += std::sin(x);
  }
  return std::hypot(c, q) / double(n);
}

double median(std::vector<double> v) {
  const std::size_t h = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + std::ptrdiff_t(h), v.end());
  return v[h];
}

// Kolmogorov survival function Q(λ) = 2Σ(-1)^{k-1}exp(-2k²λ²).
double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1;
  double sum = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 ? 1 : -1) * term;
    if (term < 1e-16) break;
  }
  return std::clamp(2 * sum, 0.0, 1.0);
}

double critical_coefficient(double level) {
  // Inverse of Q by bisection.
  double lo = 0.2, hi = 5;
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_q(mid) > level ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

Ecf empirical_cf(const std::vector<double>& samples, const std::vector<double>& xi) {
  Ecf e;
  e.xi = xi;
  const double n = double(samples.size());
  for (double k : xi) {
    double c = 0, s = 0, cc = 0, ss = 0;
    for (double x : samples) {
      const double a = std::cos(k * x), b = std::sin(k * x);
      c += a;
      s += b;
      cc += a * a;
      ss += b * b;
    }
    c /= n;
    s /= n;
    e.value.emplace_back(c, s);
    e.se_re.push_back(std::sqrt(std::max(cc / n - c * c, 0.0) / n));
    e.se_im.push_back(std::sqrt(std::max(ss / n - s * s, 0.0) / n));
  }
  return e;
}

std::vector<double> log_grid(double scale, int n, double lo, double hi) {
  std::vector<double> g(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double f = n == 1 ? 0.0 : double(k) / (n - 1);
    g[std::size_t(k)] = lo * std::pow(hi / lo, f) / scale;
  }
  return g;
}

CfDistance cf_distance(const Ecf& ecf, const std::vector<std::complex<double>>& target, double allowance) {
  if (target.size() != ecf.value.size()) throw Error(ErrorCode::InvalidRequest, "grids are not aligned");
  CfDistance d;
  for (std::size_t k = 0; k < target.size(); ++k) {
    const double g = std::abs(ecf.value[k] - target[k]);
    d.gap.push_back(g);
    d.sup_gap = std::max(d.sup_gap, g);
    if (g > 3 * ecf.se(k)) ++d.outside_3se;
    if (g <= 3 * ecf.se(k) + allowance) ++d.within_band;
  }
  return d;
}

AlphaEstimate estimate_alpha(const std::vector<double>& samples, std::uint64_t seed, int bootstrap) {
  if (samples.size() < 2) throw Error(ErrorCode::InvalidRequest, "need samples to estimate alpha");
  const double med = median(samples);
  std::vector<double> dev(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) dev[i] = std::fabs(samples[i] - med);
  const double mad = median(dev);
  if (!(mad > 0)) throw Error(ErrorCode::WindowNotFound, "samples have no spread");

  const std::vector<double> grid = log_grid(mad, 120, 1e-3, 1e3);
  std::vector<double> lx, ly, window;
  for (double xi : grid) {
    const double r = ecf_modulus(samples, nullptr, xi);
    if (r >= 0.2 && r <= 0.9) {
      window.push_back(xi);
      lx.push_back(std::log(xi));
      ly.push_back(std::log(-std::log(r)));
    }
  }
  if (window.size() < 4) {
    throw Error(ErrorCode::WindowNotFound, "too few frequencies with |ECF| in [0.2, 0.9]",
                {{"points", double(window.size())}});
  }
  AlphaEstimate est;
  est.alpha = slope(lx, ly);
  est.xi_low = window.front();
  est.xi_high = window.back();
  est.window_points = int(window.size());

  std::vector<double> boot;
  std::vector<std::size_t> idx(samples.size());
  for (int b = 0; b < bootstrap; ++b) {
    CounterRng rng(seed, std::uint64_t(b), kBootstrapStream);
    for (auto& i : idx) i = std::min(samples.size() - 1, std::size_t(rng.uniform() * double(samples.size())));
    std::vector<double> bx, by;
    for (std::size_t k = 0; k < window.size(); ++k) {
      const double r = ecf_modulus(samples, &idx, window[k]);
      if (r > 0 && r < 1) {
        bx.push_back(lx[k]);
        by.push_back(std::log(-std::log(r)));
      }
    }
    if (bx.size() >= 3) boot.push_back(slope(bx, by));
  }
  if (boot.size() >= 2) {
    const double mean = std::accumulate(boot.begin(), boot.end(), 0.0) / double(boot.size());
    double ss = 0;
    for (double v : boot) ss += (v - mean) * (v - mean);
    est.se = std::sqrt(ss / double(boot.size() - 1));
    std::sort(boot.begin(), boot.end());
    est.ci_low = boot[std::size_t(0.025 * double(boot.size() - 1))];
    est.ci_high = boot[std::size_t(std::ceil(0.975 * double(boot.size() - 1)))];
  }
  return est;
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double level) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidRequest, "KS needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = double(a.size()), m = double(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == x) ++i;
    while (j < b.size() && b[j] == x) ++j;
    d = std::max(d, std::fabs(double(i) / n - double(j) / m));
  }
  KsResult r;
  r.statistic = d;
  const double ne = n * m / (n + m);
  r.critical = critical_coefficient(level) / std::sqrt(ne);
  const double sq = std::sqrt(ne);
  r.p_value = kolmogorov_q((sq + 0.12 + 0.11 / sq) * d);
  r.reject = d > r.critical;
  return r;
}

bool ValidationReport::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

ValidationReport validate_samples(const std::vector<double>& samples, const CfFunction& target, double scale,
                                  const ValidationOptions& opt,
                                  const std::vector<std::pair<std::string, std::vector<double>>>& references) {
  if (samples.size() < 100) {
    throw Error(ErrorCode::InvalidRequest, "validation needs at least 100 samples", {{"n", double(samples.size())}});
  }
  ValidationReport r;
  r.scale = scale;
  r.xi_grid = log_grid(scale);
  r.ecf = empirical_cf(samples, r.xi_grid);
  for (double xi : r.xi_grid) r.target_cf.push_back(target(xi));
  r.distance = cf_distance(r.ecf, r.target_cf, opt.allowance);
  r.verdicts.push_back({"cf_band", r.distance.within_band >= opt.min_points_in_band,
                        std::to_string(r.distance.within_band) + "/" + std::to_string(r.xi_grid.size()) +
                            " points within 3 SE + " + std::to_string(opt.allowance)});
  if (opt.check_symmetric) {
    int imag_ok = 0, modulus_ok = 0;
    for (std::size_t k = 0; k < r.xi_grid.size(); ++k) {
      if (std::fabs(r.ecf.value[k].imag()) <= 3 * r.ecf.se_im[k]) ++imag_ok;
      if (std::fabs(std::abs(r.ecf.value[k]) - std::abs(r.target_cf[k])) <= 3 * r.ecf.se(k) + opt.allowance) {
        ++modulus_ok;
      }
    }
    const auto n = std::to_string(r.xi_grid.size());
    r.verdicts.push_back({"cf_imag_zero", imag_ok == int(r.xi_grid.size()),
                          std::to_string(imag_ok) + "/" + n + " points with |Im| within 3 SE"});
    r.verdicts.push_back({"cf_modulus_band", modulus_ok >= opt.min_points_in_band,
                          std::to_string(modulus_ok) + "/" + n + " moduli within 3 SE + " +
                              std::to_string(opt.allowance)});
  }
  if (opt.expected_alpha) {
    try {
      r.alpha_hat = estimate_alpha(samples, opt.seed, opt.bootstrap);
      const double err = std::fabs(r.alpha_hat->alpha - *opt.expected_alpha);
      r.verdicts.push_back({"alpha_hat", err <= opt.alpha_tolerance,
                            "alpha_hat " + std::to_string(r.alpha_hat->alpha) + " vs " +
                                std::to_string(*opt.expected_alpha)});
    } catch (const Error& e) {
      if (e.code() != ErrorCode::WindowNotFound) throw;
      r.verdicts.push_back({"alpha_hat", false, e.what()});
    }
  }
  for (const auto& [label, ref] : references) {
    KsEntry entry{label, ks_two_sample(samples, ref)};
    r.verdicts.push_back({"ks_" + label, !entry.result.reject,
                          "D = " + std::to_string(entry.result.statistic) + ", critical " +
                              std::to_string(entry.result.critical)});
    r.ks.push_back(std::move(entry));
  }
  return r;
}

}  // namespace stablediff
