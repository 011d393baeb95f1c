#pragma once

#include <string>

#include "stablediff/model.hpp"

namespace stablediff {

struct Observable {
  std::string name;
  RealFn f;
  bool continuous = true;
};

// Names: id, centered_id, power(p) = |x|^p, const(c), table:<path>,
// driftless(gamma) = x/(1+|x|)^{1-gamma},
// stable_tail(theta,alpha,f_plus,f_minus) for the heavy-tailed family.
// centered_id needs the model to compute μ(id).
Observable make_observable(const std::string& spec, const DiffusionModel* model = nullptr);

}  // namespace stablediff
