#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace stablediff {

using RealFn = std::function<double(double)>;

struct Estimate {
  double value = 0;
  double error = 0;
};

struct HarrisVerdict {
  bool admissible = false;
  bool scale_unbounded_plus = false;
  bool scale_unbounded_minus = false;
  bool speed_finite = false;
  double scale_at_plus = 0;   // 𝔰(+X), may be +inf
  double scale_at_minus = 0;  // 𝔰(-X), may be -inf
  double speed_mass = 0;      // ∫m, +inf when divergent
  std::string reason;
};

struct PsiPhi {
  double psi = 0;
  double phi = 0;
  double log_psi = 0;
  double x = 0;  // 𝔰^{-1}(w)
};

struct ModelOptions {
  double domain_cutoff = 50.0;
  double quadrature_tol = 1e-10;
  double escape_threshold = 10.0;
};

// One-dimensional diffusion dX = b(X)dt + σ(X)dB. Construction builds the
// scale/speed tables once; afterwards the object is immutable and cheap to copy.
class DiffusionModel {
 public:
  DiffusionModel(std::string name, RealFn drift, RealFn diffusion, ModelOptions opt = {});

  const std::string& name() const;
  double drift(double x) const;
  double diffusion(double x) const;
  double domain_cutoff() const;
  double quadrature_tol() const;
  // Largest |x| on each side where the tables are valid (exponent guard).
  double reach(int side) const;

  // ∫_0^x b/σ²; log 𝔰'(x) = -2·drift_potential(x).
  long double drift_potential(double x) const;
  double scale(double x) const;
  long double log_abs_scale(double x) const;
  double scale_deriv(double x) const;
  long double log_scale_deriv(double x) const;
  double speed_density(double x) const;
  long double log_speed_density(double x) const;
  double inverse_scale(double w) const;
  // 𝔰 at the reachable ends.
  double scale_image(int side) const;

  double kappa() const;
  Estimate speed_mass() const;
  HarrisVerdict check_harris() const;
  // μ(h) = κ∫h·m; NotIntegrable when |h|·m has a non-decaying tail.
  Estimate invariant_integral(const RealFn& h) const;
  // ∫_a^b h·m over a finite interval inside the reachable domain.
  long double speed_integral(const RealFn& h, double a, double b) const;
  // ∫_x^{±∞} h·m in the direction of `side`, including the power-law tail.
  long double speed_tail_integral(const RealFn& h, double x, int side) const;
  PsiPhi psi_phi(const RealFn& f, double w) const;

  // Node grid on one side (|x| values), shared by higher-level quadratures.
  const std::vector<long double>& nodes(int side) const;

  struct Tables;

 private:
  std::shared_ptr<const Tables> t_;
};

// ψ and φ tabulated on w = w0·sinh(u), u uniform, for repeated fast lookups.
class TransformedCoeffs {
 public:
  TransformedCoeffs(const DiffusionModel& model, RealFn f, double step = 0.01, double w_scale = 1.0);

  double log_psi(double w) const;
  double psi(double w) const;
  double inv_psi_sq(double w) const;
  double phi(double w) const;

  double w_min() const;
  double w_max() const;
  double step() const { return h_; }
  double w_scale() const { return w0_; }
  // Node access for integrators working in the u variable.
  int first_index() const { return j_lo_; }
  int last_index() const { return j_hi_; }
  double node_w(int j) const;
  double node_phi(int j) const { return phi_[j - j_lo_]; }
  double node_log_psi(int j) const { return logpsi_[j - j_lo_]; }

 private:
  double interp(const std::vector<double>& v, double u, bool log_extrapolate) const;

  double h_;
  double w0_;
  int j_lo_ = 0;
  int j_hi_ = 0;
  std::vector<double> logpsi_;
  std::vector<double> phi_;
};

// Coefficient table (x, b, σ) from CSV with linear interpolation.
DiffusionModel model_from_table(const std::string& path, ModelOptions opt = {});

}  // namespace stablediff
