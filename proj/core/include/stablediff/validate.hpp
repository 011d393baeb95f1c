#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace stablediff {

struct Ecf {
  std::vector<double> xi;
  std::vector<std::complex<double>> value;
  std::vector<double> se_re;
  std::vector<double> se_im;

  double se(std::size_t k) const { return std::hypot(se_re[k], se_im[k]); }
};

// (1/n)Σ exp(iξx_j) with component-wise standard errors.
Ecf empirical_cf(const std::vector<double>& samples, const std::vector<double>& xi);

// n log-spaced points over [lo, hi]/scale.
std::vector<double> log_grid(double scale, int n = 21, double lo = 0.05, double hi = 20);

struct CfDistance {
  double sup_gap = 0;
  int outside_3se = 0;     // points with |ECF - target| > 3·SE
  int within_band = 0;     // points with |ECF - target| ≤ 3·SE + allowance
  std::vector<double> gap;
};
CfDistance cf_distance(const Ecf& ecf, const std::vector<std::complex<double>>& target, double allowance = 0);

struct AlphaEstimate {
  double alpha = 0;
  double se = 0;
  double ci_low = 0;
  double ci_high = 0;
  double xi_low = 0;
  double xi_high = 0;
  int window_points = 0;
};

// Slope of log(-log|ECF|) against log ξ where |ECF| ∈ [0.2, 0.9]; bootstrap CI.
AlphaEstimate estimate_alpha(const std::vector<double>& samples, std::uint64_t seed = 1, int bootstrap = 200);

struct KsResult {
  double statistic = 0;
  double critical = 0;
  double p_value = 1;
  bool reject = false;
};
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b, double level = 0.01);

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct KsEntry {
  std::string label;
  KsResult result;
};

struct ValidationOptions {
  double allowance = 0.02;
  int min_points_in_band = 19;
  std::optional<double> expected_alpha;  // checks α̂ when set
  double alpha_tolerance = 0.15;
  bool check_symmetric = false;  // Im(ECF) within 3 SE of 0 everywhere, plus a modulus band
  std::uint64_t seed = 1;
  int bootstrap = 200;
};

struct ValidationReport {
  double t = 1;
  double scale = 1;
  std::vector<double> xi_grid;
  Ecf ecf;
  std::vector<std::complex<double>> target_cf;
  CfDistance distance;
  std::optional<AlphaEstimate> alpha_hat;
  std::vector<KsEntry> ks;
  std::vector<Verdict> verdicts;

  bool pass() const;
};

using CfFunction = std::function<std::complex<double>(double xi)>;

// CF band, optional α̂ and KS checks against reference samples.
ValidationReport validate_samples(const std::vector<double>& samples, const CfFunction& target, double scale,
                                  const ValidationOptions& opt,
                                  const std::vector<std::pair<std::string, std::vector<double>>>& references = {});

}  // namespace stablediff
