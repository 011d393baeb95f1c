#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace stablediff {

// Slowly varying ℓ, stored as a function of log v so huge arguments are safe.
struct SlowVar {
  std::string name = "one";
  std::function<double(double)> of_log = [](double) { return 1.0; };

  double operator()(double v) const { return of_log(std::log(std::max(v, 1.0))); }
  double at_log(double s) const { return of_log(std::max(s, 0.0)); }
  bool is_one() const { return name == "one"; }
};

SlowVar slow_one();
// ℓ(v) = (1 + log v)^p for v ≥ 1.
SlowVar slow_log_power(double p);
// "one" or "logpow(p)".
SlowVar make_slowvar(const std::string& spec);

}  // namespace stablediff
