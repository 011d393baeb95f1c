#include "stablediff/observable.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "stablediff/error.hpp"
#include "stablediff/presets.hpp"

namespace stablediff {

namespace {

Observable table_observable(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open observable table: " + path);
  std::vector<double> xs, ys;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double x, y;
    if (!(row >> x >> y)) continue;
    xs.push_back(x);
    ys.push_back(y);
  }
  if (xs.size() < 2) throw Error(ErrorCode::InvalidConfig, "observable table needs two rows: " + path);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) throw Error(ErrorCode::InvalidConfig, "observable table x must increase");
  }
  Observable o;
  o.name = "table:" + path;
  o.f = [xs, ys](double x) {
    if (x <= xs.front()) return ys.front();
    if (x >= xs.back()) return ys.back();
    const std::size_t k = std::size_t(std::upper_bound(xs.begin(), xs.end(), x) - xs.begin()) - 1;
    const double t = (x - xs[k]) / (xs[k + 1] - xs[k]);
    return ys[k] + t * (ys[k + 1] - ys[k]);
  };
  return o;
}

}  // namespace

Observable make_observable(const std::string& spec, const DiffusionModel* model) {
  if (spec.rfind("table:", 0) == 0) return table_observable(spec.substr(6));
  if (spec == "id") return {"id", [](double x) { return x; }};
  if (spec == "centered_id") {
    if (!model) throw Error(ErrorCode::InvalidConfig, "centered_id needs a model");
    const double mean = model->invariant_integral([](double x) { return x; }).value;
    return {"centered_id", [mean](double x) { return x - mean; }};
  }
  auto [name, args] = parse_call(spec);
  if (name == "power" && args.size() == 1) {
    const double p = args[0];
    return {spec, [p](double x) { return std::pow(std::fabs(x), p); }};
  }
  if (name == "const" && args.size() == 1) {
    const double c = args[0];
    return {spec, [c](double) { return c; }};
  }
  if (name == "driftless" && args.size() == 1) {
    const double g = args[0];
    return {spec, [g](double x) { return x / std::pow(1 + std::fabs(x), 1 - g); }};
  }
  if (name == "stable_tail" && args.size() == 4) {
    const double theta = args[0], alpha = args[1], fp = args[2], fm = args[3];
    return {spec, [=](double x) {
              const double ax = std::fabs(x);
              const double grow = std::exp(std::pow(ax, theta + 1) / alpha);
              const double damp = std::pow(1 + x * x, -(1 / alpha - 2) * theta / 2);
              const double weight = (fp + fm) / 2 + (fp - fm) / 2 * std::tanh(x);
              return weight * damp * grow;
            }};
  }
  throw Error(ErrorCode::InvalidConfig, "unknown observable: " + spec);
}

}  // namespace stablediff
