#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "stablediff/asymptotics.hpp"
#include "stablediff/error.hpp"
#include "stablediff/local_time.hpp"
#include "stablediff/pathsim.hpp"
#include "stablediff/presets.hpp"
#include "stablediff/report.hpp"
#include "stablediff/sample_io.hpp"
#include "stablediff/stable.hpp"
#include "stablediff/validate.hpp"

namespace stablediff::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r\n") - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorCode::InvalidConfig, "invalid value for '" + key + "': " + value);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) bad_value(key, v);
    return d;
  } catch (const std::logic_error&) {
    bad_value(key, v);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct Common {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out = ".";
  std::string config_file;
  std::vector<std::string> settings;
};

struct ModelSetup {
  Preset preset;
  std::optional<TailClaim> claim;
};

const std::vector<std::string> kModelKeys = {"model", "f", "alpha", "ell", "f_plus", "f_minus", "claim", "cutoff"};

Preset base_preset(const ExperimentConfig& cfg) {
  if (!cfg.has("model")) throw Error(ErrorCode::InvalidConfig, "missing key 'model'");
  const std::string spec = cfg.text("model");
  const double cutoff = cfg.number("cutoff", 0);
  if (spec.rfind("table:", 0) != 0) return make_preset(spec, cutoff);
  if (!cfg.has("f")) throw Error(ErrorCode::InvalidConfig, "a table model needs key 'f'");
  ModelOptions opt;
  if (cutoff > 0) opt.domain_cutoff = cutoff;
  DiffusionModel model = model_from_table(spec.substr(6), opt);
  Observable f = make_observable(cfg.text("f"), &model);
  return Preset{std::move(model), std::move(f), std::nullopt, "coefficient table"};
}

ModelSetup build_model(const ExperimentConfig& cfg) {
  ModelSetup s{base_preset(cfg), std::nullopt};
  s.claim = s.preset.claim;
  if (cfg.has("f")) {
    const std::string f = cfg.text("f");
    if (f != s.preset.f.name) {
      s.preset.f = make_observable(f, &s.preset.model);
      // Shifting by a constant keeps the tail ratios of id.
      if (f != "centered_id") s.claim.reset();
    }
  }
  if (cfg.text("claim") == "none") s.claim.reset();
  if (cfg.has("alpha")) {
    TailClaim c;
    c.alpha = cfg.number("alpha", 0);
    c.ell = make_slowvar(cfg.text("ell", "one"));
    c.f_plus = cfg.number("f_plus", 0);
    c.f_minus = cfg.number("f_minus", 0);
    s.claim = c;
  }
  return s;
}

std::string join_path(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create output directory: " + dir);
}

std::string sample_ext(const ExperimentConfig& cfg) {
  const std::string f = cfg.text("format", "csv");
  if (f == "csv") return ".csv";
  if (f == "bin") return ".bin";
  bad_value("format", f);
}

// Scale of the law at time t, used to place the ξ grid.
double law_scale(const StableParams& p, double t) { return std::pow(p.nu * t, 1 / p.alpha); }

std::size_t time_index(const std::vector<double>& times, double t) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::fabs(times[i] - t) <= 1e-12 * std::max(1.0, std::fabs(t))) return i;
  }
  throw Error(ErrorCode::InvalidConfig, "time point not present in the sample", {{"t", t}});
}

ValidationOptions validation_options(const ExperimentConfig& cfg, const Common& c) {
  ValidationOptions opt;
  opt.allowance = cfg.number("allowance", opt.allowance);
  opt.min_points_in_band = int(cfg.count("min_points", std::size_t(opt.min_points_in_band)));
  opt.alpha_tolerance = cfg.number("alpha_tolerance", opt.alpha_tolerance);
  opt.bootstrap = int(cfg.count("bootstrap", std::size_t(opt.bootstrap)));
  opt.seed = c.seed;
  return opt;
}

json verdict_summary(const ValidationReport& r) {
  json v = json::object();
  for (const auto& e : r.verdicts) v[e.name] = e.pass;
  return v;
}

// ---------------------------------------------------------------------------

int cmd_presets(std::ostream& out) {
  json models = json::array();
  for (const auto& p : preset_catalog()) {
    models.push_back({{"name", p.name}, {"signature", p.signature}, {"summary", p.summary}});
  }
  json j{{"schema", 1},
         {"models", models},
         {"observables", {"id", "centered_id", "power(p)", "const(c)", "driftless(gamma)",
                          "stable_tail(theta,alpha,f_plus,f_minus)", "table:<path>"}},
         {"stable", {{{"name", "half"}, {"alpha", 0.5}, {"a", 1}, {"b", 0}},
                     {{"name", "three_halves"}, {"alpha", 1.5}, {"a", 1}, {"b", -1}},
                     {{"name", "one"}, {"alpha", 1}, {"a", 1}, {"b", 1}}}},
         {"slow_variation", {"one", "logpow(p)"}}};
  out << j.dump(2) << "\n";
  return 0;
}

int cmd_analyze(const ExperimentConfig& cfg, const Common& c, std::ostream& out) {
  cfg.require_known(kModelKeys);
  const ModelSetup s = build_model(cfg);
  const RegimeReport rep = classify_regime(s.preset.model, s.preset.f, s.claim);
  const LimitLaw law = limit_law(rep, s.preset.model, s.preset.f);
  const std::string text = analysis_json(rep, law, s.preset.model.name(), s.preset.f.name);
  ensure_dir(c.out);
  write_text_file(join_path(c.out, "analysis.json"), text);
  out << text;
  return 0;
}

int cmd_simulate(const ExperimentConfig& cfg, const Common& c, std::ostream& out) {
  auto keys = kModelKeys;
  keys.insert(keys.end(), {"dt", "epsilon", "times", "n_paths", "scheme", "format", "grade"});
  cfg.require_known(keys);
  const ModelSetup s = build_model(cfg);
  const RegimeReport rep = classify_regime(s.preset.model, s.preset.f, s.claim);
  const LimitLaw law = limit_law(rep, s.preset.model, s.preset.f);

  SimConfig sc;
  sc.dt = cfg.number("dt", sc.dt);
  sc.epsilon = cfg.number("epsilon", sc.epsilon);
  sc.times = cfg.numbers("times", sc.times);
  sc.n_paths = cfg.count("n_paths", sc.n_paths);
  sc.grade = cfg.number("grade", sc.grade);
  sc.seed = c.seed;
  sc.threads = c.threads;
  std::vector<Scheme> schemes;
  const std::string which = cfg.text("scheme", "direct");
  if (which == "both") {
    schemes = {Scheme::Direct, Scheme::TimeChange};
  } else {
    schemes = {parse_scheme(which)};
  }
  ensure_dir(c.out);
  json files = json::array();
  for (Scheme scheme : schemes) {
    sc.scheme = scheme;
    const FunctionalSample smp = rescaled_functional(s.preset.model, s.preset.f, law, sc);
    const std::string path = join_path(c.out, std::string("samples_") + scheme_name(scheme) + sample_ext(cfg));
    write_sample(smp, path);
    files.push_back({{"path", path},
                     {"scheme", scheme_name(scheme)},
                     {"n_paths", smp.n_paths},
                     {"exploded", smp.exploded},
                     {"clipped", smp.clipped}});
  }
  out << json{{"schema", 1}, {"regime", regime_name(law.regime)}, {"files", files}}.dump(2) << "\n";
  return 0;
}

int cmd_validate(const ExperimentConfig& cfg, const Common& c, std::ostream& out) {
  cfg.require_known({"samples", "analysis", "reference", "reference_cms", "t", "check_alpha", "allowance",
                     "min_points", "alpha_tolerance", "bootstrap", "symmetric"});
  if (!cfg.has("samples")) throw Error(ErrorCode::InvalidConfig, "missing key 'samples'");
  if (!cfg.has("analysis")) throw Error(ErrorCode::InvalidConfig, "missing key 'analysis'");
  const std::string sample_path = cfg.text("samples");
  const FunctionalSample smp = read_sample(sample_path);
  const LimitLaw law = law_from_analysis_json(read_text_file(cfg.text("analysis")));
  const double t = cfg.number("t", smp.times.front());
  const std::vector<double> x = smp.column(time_index(smp.times, t));

  ValidationOptions opt = validation_options(cfg, c);
  const bool gaussian = law.regime == Regime::Diffusive || law.regime == Regime::CriticalDiffusive;
  if (cfg.flag("check_alpha", true)) opt.expected_alpha = gaussian ? 2.0 : law.alpha;
  opt.check_symmetric = cfg.flag("symmetric", false);

  std::vector<std::pair<std::string, std::vector<double>>> refs;
  for (const auto& path : cfg.texts("reference")) {
    const FunctionalSample r = read_sample(path);
    refs.emplace_back(fs::path(path).filename().string(), r.column(time_index(r.times, t)));
  }
  const StableParams p = law.params();
  if (cfg.flag("reference_cms", false)) {
    refs.emplace_back("cms", sample_stable(p, t, x.size(), c.seed));
  }
  ValidationReport rep =
      validate_samples(x, [&](double xi) { return law.cf(xi, t); }, law_scale(p, t), opt, refs);
  rep.t = t;
  ensure_dir(c.out);
  const std::string text = validation_json(rep, sample_path);
  write_text_file(join_path(c.out, "validation.json"), text);
  write_text_file(join_path(c.out, "validation_plot.csv"), validation_plot_csv(rep));
  out << text;
  return rep.pass() ? 0 : 1;
}

StableSpec stable_spec(const ExperimentConfig& cfg) {
  StableSpec spec;
  const std::string name = cfg.text("spec", "half");
  if (name == "half") {
    spec = {0.5, 1, 0};
  } else if (name == "three_halves") {
    spec = {1.5, 1, -1};
  } else if (name == "one") {
    spec = {1, 1, 1};
  } else if (name != "custom") {
    bad_value("spec", name);
  }
  spec.alpha = cfg.number("alpha", spec.alpha);
  spec.a = cfg.number("a", spec.a);
  spec.b = cfg.number("b", spec.b);
  return spec;
}

int cmd_stable(const ExperimentConfig& cfg, const Common& c, std::ostream& out) {
  cfg.require_known({"spec", "alpha", "a", "b", "method", "n_paths", "times", "dt", "grade", "format", "validate",
                     "allowance", "min_points", "symmetric", "check_alpha", "alpha_tolerance", "bootstrap"});
  const StableSpec spec = stable_spec(cfg);
  const StableParams p = spec.params();
  const std::string method = cfg.text("method", "cms");
  const std::size_t n = cfg.count("n_paths", 2000);
  const std::vector<double> times = cfg.numbers("times", {1.0});
  FunctionalSample smp;
  std::size_t steps = 0;
  if (method == "cms") {
    smp.times = times;
    smp.n_paths = n;
    smp.values.assign(n * times.size(), 0.0);
    for (std::size_t i = 0; i < times.size(); ++i) {
      // Independent marginals per time point.
      const auto col = sample_stable(p, times[i], n, c.seed + i);
      for (std::size_t k = 0; k < n; ++k) smp.values[k * times.size() + i] = col[k];
    }
    smp.scheme = "cms";
    smp.seed = c.seed;
  } else if (method == "excursion") {
    ExcursionConfig ec;
    ec.dt = cfg.number("dt", ec.dt);
    ec.grade = cfg.number("grade", ec.grade);
    ec.threads = c.threads;
    const ExcursionSample e = stable_via_excursions(spec, times, n, c.seed, ec);
    smp = sample_from_excursions(e, "", c.seed, ec.dt);
    steps = e.steps;
  } else {
    bad_value("method", method);
  }
  char label[96];
  std::snprintf(label, sizeof label, "stable(%.17g,%.17g,%.17g)", spec.alpha, spec.a, spec.b);
  smp.model = label;
  smp.alpha = spec.alpha;
  ensure_dir(c.out);
  const std::string path = join_path(c.out, "stable_" + method + sample_ext(cfg));
  write_sample(smp, path);

  json j{{"schema", 1},
         {"file", path},
         {"method", method},
         {"alpha", spec.alpha},
         {"a", spec.a},
         {"b", spec.b},
         {"c", spec.c()},
         {"skew", spec.skew()},
         {"n_paths", smp.n_paths}};
  if (method == "excursion") j["brownian_steps"] = steps;
  int code = 0;
  if (cfg.flag("validate", true)) {
    ValidationOptions opt = validation_options(cfg, c);
    if (cfg.flag("check_alpha", false)) opt.expected_alpha = spec.alpha;
    opt.check_symmetric = cfg.flag("symmetric", false);
    const double t = times.front();
    ValidationReport rep = validate_samples(
        smp.column(0), [&](double xi) { return p.cf(xi, t); }, law_scale(p, t), opt);
    rep.t = t;
    write_text_file(join_path(c.out, "stable_" + method + "_validation.json"), validation_json(rep, path));
    write_text_file(join_path(c.out, "stable_" + method + "_plot.csv"), validation_plot_csv(rep));
    j["verdicts"] = verdict_summary(rep);
    j["pass"] = rep.pass();
    code = rep.pass() ? 0 : 1;
  }
  out << j.dump(2) << "\n";
  return code;
}

void self_check() {
  const double a = sine_constant_by_quadrature();
  if (!(std::fabs(a - kSineConstantA) <= 1e-9)) {
    throw Error(ErrorCode::QuadratureNonConvergence, "constant A self-check failed",
                {{"quadrature", a}, {"expected", kSineConstantA}});
  }
}

void emit_error(std::ostream& err, const std::string& code, const std::string& message,
                const std::map<std::string, double>& details = {}) {
  json d = json::object();
  for (const auto& [k, v] : details) d[k] = std::isfinite(v) ? json(v) : json(std::to_string(v));
  err << json{{"schema", 1}, {"error", {{"code", code}, {"message", message}, {"details", d}}}}.dump() << "\n";
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    cfg.assign(line);
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  if (!fs::exists(path)) throw Error(ErrorCode::Io, "config file does not exist: " + path);
  return parse(read_text_file(path));
}

void ExperimentConfig::assign(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw Error(ErrorCode::InvalidConfig, "expected key=value, got '" + assignment + "'");
  }
  values_[trim(assignment.substr(0, eq))] = trim(assignment.substr(eq + 1));
}

std::string ExperimentConfig::text(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double ExperimentConfig::number(const std::string& key, double fallback) const {
  return has(key) ? parse_double(key, text(key)) : fallback;
}

std::size_t ExperimentConfig::count(const std::string& key, std::size_t fallback) const {
  if (!has(key)) return fallback;
  const double v = parse_double(key, text(key));
  if (!(v >= 0) || v != std::floor(v) || v > 1e15) bad_value(key, text(key));
  return std::size_t(v);
}

bool ExperimentConfig::flag(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string v = text(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  bad_value(key, v);
}

std::vector<double> ExperimentConfig::numbers(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& item : split(text(key), ',')) out.push_back(parse_double(key, item));
  if (out.empty()) bad_value(key, text(key));
  return out;
}

std::vector<std::string> ExperimentConfig::texts(const std::string& key) const { return split(text(key), ','); }

void ExperimentConfig::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& [k, v] : values_) {
    if (std::find(allowed.begin(), allowed.end(), k) == allowed.end()) {
      throw Error(ErrorCode::InvalidConfig, "unknown key '" + k + "'");
    }
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limit theorems for additive functionals of one-dimensional diffusions", "stablediff"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&c](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "Seed for all stochastic outputs");
    sub->add_option("--threads", c.threads, "Worker threads (default: STABLEDIFF_THREADS or cores)");
    sub->add_option("--out", c.out, "Output directory");
    sub->add_option("--config", c.config_file, "key=value settings file");
    sub->add_option("settings", c.settings, "key=value overrides");
  };
  auto* analyze = app.add_subcommand("analyze", "Classify the regime and compute the limit law");
  auto* simulate = app.add_subcommand("simulate", "Simulate the rescaled additive functional");
  auto* validate = app.add_subcommand("validate", "Compare samples with an analysed limit law");
  auto* stable = app.add_subcommand("stable", "Reference stable samples by CMS or Brownian excursions");
  auto* presets = app.add_subcommand("presets", "List built-in presets");
  for (auto* sub : {analyze, simulate, validate, stable}) add_common(sub);

  std::vector<std::string> argv{args.rbegin(), args.rend()};
  try {
    app.parse(argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    emit_error(err, "UsageError", e.what());
    return 2;
  }

  try {
    self_check();
    if (presets->parsed()) return cmd_presets(out);
    ExperimentConfig cfg = c.config_file.empty() ? ExperimentConfig{} : ExperimentConfig::load(c.config_file);
    for (const auto& s : c.settings) cfg.assign(s);
    if (analyze->parsed()) return cmd_analyze(cfg, c, out);
    if (simulate->parsed()) return cmd_simulate(cfg, c, out);
    if (validate->parsed()) return cmd_validate(cfg, c, out);
    return cmd_stable(cfg, c, out);
  } catch (const Error& e) {
    emit_error(err, error_code_name(e.code()), e.what(), e.details());
  } catch (const std::exception& e) {
    emit_error(err, "InternalError", e.what());
  }
  return 2;
}

}  // namespace stablediff::cli
