#include "stablediff/slowvar.hpp"

#include "stablediff/error.hpp"
#include "stablediff/presets.hpp"

namespace stablediff {

SlowVar slow_one() { return SlowVar{}; }

SlowVar slow_log_power(double p) {
  if (p == 0) return slow_one();
  SlowVar s;
  s.name = "logpow(" + std::to_string(p) + ")";
  s.of_log = [p](double lv) { return std::pow(1.0 + std::max(lv, 0.0), p); };
  return s;
}

SlowVar make_slowvar(const std::string& spec) {
  if (spec.empty() || spec == "one" || spec == "1") return slow_one();
  auto [name, args] = parse_call(spec);
  if (name == "logpow" && args.size() == 1) return slow_log_power(args[0]);
  throw Error(ErrorCode::InvalidConfig, "unknown slowly varying function: " + spec);
}

}  // namespace stablediff
