#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stablediff::cli {

// Flat key=value settings; blank lines and lines starting with '#' are ignored.
class ExperimentConfig {
 public:
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::string& path);

  // Accepts "key=value"; later assignments win.
  void assign(const std::string& assignment);
  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string text(const std::string& key, const std::string& fallback = "") const;
  double number(const std::string& key, double fallback) const;
  std::size_t count(const std::string& key, std::size_t fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<std::string> texts(const std::string& key) const;
  // InvalidConfig naming the first key outside `allowed`.
  void require_known(const std::vector<std::string>& allowed) const;

 private:
  std::map<std::string, std::string> values_;
};

// Runs one invocation, e.g. {"analyze", "model=kinetic(3)", "--out", "dir"}.
// Exit codes: 0 all verdicts pass, 1 some verdict failed, 2 error (JSON on err).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stablediff::cli
