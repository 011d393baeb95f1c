#include "stablediff/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "stablediff/error.hpp"

namespace stablediff {

namespace {

using nlohmann::json;

json num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double from_num(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  }
  throw Error(ErrorCode::InvalidConfig, "expected a number in analysis JSON");
}

Regime parse_regime(const std::string& name) {
  for (Regime r : {Regime::Diffusive, Regime::CriticalDiffusive, Regime::Levy, Regime::CriticalLevy}) {
    if (name == regime_name(r)) return r;
  }
  throw Error(ErrorCode::InvalidConfig, "unknown regime '" + name + "'");
}

json tail_json(const std::vector<TailSample>& tail) {
  json a = json::array();
  for (const auto& s : tail) a.push_back({num(s.x), num(s.ratio)});
  return a;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string analysis_json(const RegimeReport& report, const LimitLaw& law, const std::string& model,
                          const std::string& observable) {
  const StableParams p = law.params();
  json j{{"schema", 1},
         {"model", model},
         {"observable", observable},
         {"regime", regime_name(report.regime)},
         {"alpha", num(report.alpha)},
         {"alpha_estimated", report.alpha_estimated},
         {"ell", report.ell.name},
         {"f_plus", num(report.f_plus)},
         {"f_minus", num(report.f_minus)},
         {"f_in_L1mu", report.f_in_L1mu},
         {"mu_f", num(report.mu_f)},
         {"rho", num(report.rho)},
         {"tail_plus", tail_json(report.tail_plus)},
         {"tail_minus", tail_json(report.tail_minus)},
         {"warnings", report.warnings}};
  json l{{"regime", regime_name(law.regime)},
         {"alpha", num(law.alpha)},
         {"kappa", num(law.kappa)},
         {"sigma", num(law.sigma)},
         {"skew", num(law.skew)},
         {"bracket_const", num(law.bracket_const)},
         {"asym_log", num(law.asym_log)},
         {"cf_params", {{"alpha", num(p.alpha)}, {"nu", num(p.nu)}, {"beta", num(p.beta)}, {"tau", num(p.tau)}}}};
  if (law.regime == Regime::Diffusive) {
    l["sigma_sq"] = num(law.sigma * law.sigma);
    if (law.gamma_sq >= 0) l["gamma_sq"] = num(law.gamma_sq);
  }
  if (law.regime == Regime::Levy || law.regime == Regime::CriticalLevy) {
    l["levy_triplet"] = {{"lambda_alpha", num(law.lambda_alpha)},
                         {"c_plus", num(law.levy_c_plus)},
                         {"c_minus", num(law.levy_c_minus)},
                         {"drift_a", num(law.generator_drift_a)}};
  }
  if (law.regime == Regime::CriticalLevy) {
    json xi = json::array();
    for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
      xi.push_back({{"epsilon", eps}, {"exact", num(law.xi_eps(eps))}, {"asymptotic", num(law.xi_eps_asymptotic(eps))}});
    }
    l["xi_eps"] = std::move(xi);
  }
  j["limit_law"] = std::move(l);
  return j.dump(2) + "\n";
}

LimitLaw law_from_analysis_json(const std::string& text) {
  LimitLaw law;
  try {
    const json j = json::parse(text);
    if (j.value("schema", 0) != 1) throw Error(ErrorCode::InvalidConfig, "analysis JSON has an unknown schema");
    const json& l = j.at("limit_law");
    law.regime = parse_regime(l.at("regime").get<std::string>());
    law.alpha = from_num(l.at("alpha"));
    law.kappa = from_num(l.at("kappa"));
    law.sigma = from_num(l.at("sigma"));
    law.skew = from_num(l.at("skew"));
    law.bracket_const = from_num(l.at("bracket_const"));
    law.asym_log = from_num(l.at("asym_log"));
    law.f_plus = from_num(j.at("f_plus"));
    law.f_minus = from_num(j.at("f_minus"));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("malformed analysis JSON: ") + e.what());
  }
  return law;
}

std::string validation_json(const ValidationReport& r, const std::string& sample_file) {
  json ecf = json::array();
  for (std::size_t k = 0; k < r.xi_grid.size(); ++k) {
    ecf.push_back({{"xi", num(r.xi_grid[k])},
                   {"re", num(r.ecf.value[k].real())},
                   {"im", num(r.ecf.value[k].imag())},
                   {"se", num(r.ecf.se(k))},
                   {"target_re", num(r.target_cf[k].real())},
                   {"target_im", num(r.target_cf[k].imag())},
                   {"gap", num(r.distance.gap[k])}});
  }
  json j{{"schema", 1},
         {"samples", sample_file},
         {"t", num(r.t)},
         {"scale", num(r.scale)},
         {"ecf", std::move(ecf)},
         {"sup_gap", num(r.distance.sup_gap)},
         {"points_outside_3se", r.distance.outside_3se},
         {"points_within_band", r.distance.within_band}};
  if (r.alpha_hat) {
    j["alpha_hat"] = {{"value", num(r.alpha_hat->alpha)},
                      {"se", num(r.alpha_hat->se)},
                      {"ci", {num(r.alpha_hat->ci_low), num(r.alpha_hat->ci_high)}},
                      {"window", {num(r.alpha_hat->xi_low), num(r.alpha_hat->xi_high)}},
                      {"window_points", r.alpha_hat->window_points}};
  }
  json ks = json::array();
  for (const auto& e : r.ks) {
    ks.push_back({{"pair", e.label},
                  {"statistic", num(e.result.statistic)},
                  {"critical", num(e.result.critical)},
                  {"p_value", num(e.result.p_value)}});
  }
  j["ks"] = std::move(ks);
  json v = json::array();
  for (const auto& e : r.verdicts) v.push_back({{"name", e.name}, {"pass", e.pass}, {"detail", e.detail}});
  j["verdicts"] = std::move(v);
  j["pass"] = r.pass();
  return j.dump(2) + "\n";
}

std::string validation_plot_csv(const ValidationReport& r) {
  std::ostringstream os;
  os << "xi,ecf_re,ecf_im,se,target_re,target_im\n";
  for (std::size_t k = 0; k < r.xi_grid.size(); ++k) {
    os << fmt(r.xi_grid[k]) << ',' << fmt(r.ecf.value[k].real()) << ',' << fmt(r.ecf.value[k].imag()) << ','
       << fmt(r.ecf.se(k)) << ',' << fmt(r.target_cf[k].real()) << ',' << fmt(r.target_cf[k].imag()) << "\n";
  }
  return os.str();
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorCode::Io, "cannot open: " + path);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorCode::Io, "cannot open for writing: " + path);
  os << text;
  if (!os) throw Error(ErrorCode::Io, "write failed: " + path);
}

}  // namespace stablediff
