#include "stablediff/presets.hpp"

#include <cmath>
#include <sstream>

#include "stablediff/error.hpp"

namespace stablediff {

std::pair<std::string, std::vector<double>> parse_call(const std::string& spec) {
  const auto open = spec.find('(');
  if (open == std::string::npos) return {spec, {}};
  const auto close = spec.rfind(')');
  if (close == std::string::npos || close < open) {
    throw Error(ErrorCode::InvalidConfig, "malformed call syntax: " + spec);
  }
  std::vector<double> args;
  std::stringstream ss(spec.substr(open + 1, close - open - 1));
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      args.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, "non-numeric argument in " + spec);
    }
  }
  return {spec.substr(0, open), args};
}

namespace {

Preset heavy_tailed(const std::vector<double>& a, double cutoff, double tol) {
  if (a.empty() || !(a[0] > 0)) throw Error(ErrorCode::InvalidConfig, "heavy_tailed(theta) needs theta > 0");
  const double theta = a[0];
  ModelOptions opt;
  // Keep |x|^{θ+1} well inside the long double exponent range.
  opt.domain_cutoff = cutoff > 0 ? cutoff : std::min(50.0, std::pow(4000.0, 1 / (theta + 1)));
  opt.quadrature_tol = tol;
  std::ostringstream name;
  name << "heavy_tailed(" << theta << ")";
  DiffusionModel model(
      name.str(),
      [theta](double x) { return -(theta + 1) / 2 * (x > 0 ? 1 : (x < 0 ? -1 : 0)) * std::pow(std::fabs(x), theta); },
      [](double) { return 1.0; }, opt);
  if (a.size() == 1) {
    Observable f{"id", [](double x) { return x; }};
    return {model, f, std::nullopt, "OU-type drift with invariant density ∝ exp(-|x|^(θ+1)); f = id"};
  }
  if (a.size() != 4) throw Error(ErrorCode::InvalidConfig, "heavy_tailed(theta,alpha,f_plus,f_minus)");
  const double alpha = a[1];
  std::ostringstream fs;
  fs << "stable_tail(" << theta << "," << alpha << "," << a[2] << "," << a[3] << ")";
  Observable f = make_observable(fs.str());
  // 𝔰 ~ e^{|x|^{θ+1}}/((θ+1)|x|^θ) turns the displayed growth condition into
  // tail-ratio limits scaled by (θ+1)^{1/α-2}.
  const double factor = std::pow(theta + 1, 1 / alpha - 2);
  TailClaim claim{alpha, slow_one(), factor * a[2], factor * a[3]};
  return {model, f, claim, "heavy-tailed family with an observable of prescribed stable index"};
}

Preset kinetic(const std::vector<double>& a, double cutoff, double tol) {
  if (a.empty() || !(a[0] > 1)) throw Error(ErrorCode::InvalidConfig, "kinetic(beta) needs beta > 1");
  const double beta = a[0];
  const double cp = a.size() >= 3 ? a[1] : 1.0;
  const double cm = a.size() >= 3 ? a[2] : 1.0;
  if (a.size() == 2 || a.size() > 3 || cp < 0 || cm < 0 || cp + cm <= 0) {
    throw Error(ErrorCode::InvalidConfig, "kinetic(beta[,c_plus,c_minus]) with c_plus, c_minus >= 0");
  }
  ModelOptions opt;
  opt.domain_cutoff = cutoff > 0 ? cutoff : 1e6;
  opt.quadrature_tol = tol;
  const bool symmetric = cp == cm;
  // Θ(v) = w(v)/√(1+v²), w = c_- + (c_+ - c_-)(1 + tanh v)/2, force (β/2)Θ'/Θ.
  auto force = [beta, cp, cm](double v) {
    const double th = std::tanh(v);
    const double w = cm + (cp - cm) * (1 + th) / 2;
    const double dw = (cp - cm) * (1 - th * th) / 2;
    return beta / 2 * (dw / w - v / (1 + v * v));
  };
  std::ostringstream name;
  name << "kinetic(" << beta;
  if (!symmetric || a.size() == 3) name << "," << cp << "," << cm;
  name << ")";
  DiffusionModel model(name.str(), force, [](double) { return 1.0; }, opt);
  const double alpha = (beta + 1) / 3;
  const double theta0 = symmetric ? cp : (cp + cm) / 2;
  const double base = std::pow(theta0, -beta / alpha) * std::pow(beta + 1, 1 / alpha - 2);
  TailClaim claim{alpha, slow_one(), base * std::pow(cp, beta / alpha), -base * std::pow(cm, beta / alpha)};
  Observable f = (alpha > 1 && !symmetric) ? make_observable("centered_id", &model)
                                          : Observable{"id", [](double x) { return x; }};
  return {model, f, claim, "velocity of a kinetic particle under force (β/2)Θ'/Θ; f = velocity"};
}

Preset driftless(const std::vector<double>& a, double cutoff, double tol) {
  if (a.size() != 2 || !(a[0] > 1) || !(a[1] > a[0] - 2)) {
    throw Error(ErrorCode::InvalidConfig, "driftless(beta,gamma) needs beta > 1 and gamma > beta - 2");
  }
  const double beta = a[0], gamma = a[1];
  ModelOptions opt;
  opt.domain_cutoff = cutoff > 0 ? cutoff : 1e6;
  opt.quadrature_tol = tol;
  std::ostringstream name;
  name << "driftless(" << beta << "," << gamma << ")";
  DiffusionModel model(
      name.str(), [](double) { return 0.0; },
      [beta](double x) { return std::pow(1 + std::fabs(x), beta / 2); }, opt);
  std::ostringstream fs;
  fs << "driftless(" << gamma << ")";
  TailClaim claim{1 / (gamma + 2 - beta), slow_one(), 1.0, -1.0};
  return {model, make_observable(fs.str()), claim, "martingale with σ = (1+|x|)^(β/2); f = x/(1+|x|)^(1-γ)"};
}

}  // namespace

Preset make_preset(const std::string& spec, double cutoff, double quadrature_tol) {
  auto [name, args] = parse_call(spec);
  if (name == "heavy_tailed") return heavy_tailed(args, cutoff, quadrature_tol);
  if (name == "kinetic") return kinetic(args, cutoff, quadrature_tol);
  if (name == "driftless") return driftless(args, cutoff, quadrature_tol);
  throw Error(ErrorCode::InvalidConfig, "unknown preset: " + spec);
}

std::vector<PresetInfo> preset_catalog() {
  return {
      {"heavy_tailed", "heavy_tailed(theta[,alpha,f_plus,f_minus])",
       "b = -(θ+1)/2·sgn(x)|x|^θ, σ = 1; optional observable with stable index alpha"},
      {"kinetic", "kinetic(beta[,c_plus,c_minus])",
       "b = (β/2)Θ'/Θ, σ = 1, Θ ~ c_±/|v|; f = id; α = (β+1)/3"},
      {"driftless", "driftless(beta,gamma)",
       "b = 0, σ = (1+|x|)^(β/2); f = x/(1+|x|)^(1-γ); α = 1/(γ+2-β)"},
  };
}

}  // namespace stablediff
