#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stablediff/model.hpp"
#include "stablediff/observable.hpp"
#include "stablediff/slowvar.hpp"

namespace stablediff {

// Tail behaviour asserted by the caller: the ratio
// [σ𝔰']^{-2}|𝔰|^{2-1/α} ℓ(|𝔰|) f  tends to f_± as x → ±∞.
struct TailClaim {
  double alpha = 0;
  SlowVar ell;
  double f_plus = 0;
  double f_minus = 0;
};

struct Preset {
  DiffusionModel model;
  Observable f;
  std::optional<TailClaim> claim;
  std::string description;
};

// heavy_tailed(theta[,alpha,f_plus,f_minus]), kinetic(beta[,c_plus,c_minus]),
// driftless(beta,gamma). A positive cutoff overrides the preset default.
Preset make_preset(const std::string& spec, double cutoff = 0, double quadrature_tol = 1e-10);

struct PresetInfo {
  std::string name;
  std::string signature;
  std::string summary;
};
std::vector<PresetInfo> preset_catalog();

// Splits "name(a,b,c)" into name and numeric arguments.
std::pair<std::string, std::vector<double>> parse_call(const std::string& spec);

}  // namespace stablediff
