#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  Result r;
  r.code = stablediff::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("stablediff_cli_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("analyze reports the regime of each kinetic index") {
  const fs::path dir = scratch("analyze");
  const std::pair<const char*, const char*> cases[] = {{"kinetic(7)", "Diffusive"},
                                                        {"kinetic(5)", "CriticalDiffusive"},
                                                        {"kinetic(3)", "Levy"},
                                                        {"kinetic(2,1,0.5)", "CriticalLevy"}};
  for (const auto& [model, regime] : cases) {
    CAPTURE(model);
    const Result r = invoke({"analyze", std::string("model=") + model, "--out", dir.string()});
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["regime"] == regime);
    CHECK(json::parse(slurp(dir / "analysis.json")) == j);
    if (std::string(regime) == "Diffusive") CHECK(j["limit_law"]["sigma_sq"].get<double>() > 0);
    if (std::string(regime) == "CriticalLevy") {
      CHECK(j["limit_law"]["xi_eps"][0]["exact"].get<double>() != 0);
    }
  }
  fs::remove_all(dir);
}

TEST_CASE("simulate writes one row per path and repeats byte for byte") {
  const fs::path a = scratch("sim_a"), b = scratch("sim_b");
  const std::vector<std::string> base{"simulate", "model=kinetic(3)", "n_paths=30", "times=0.5,1",
                                      "scheme=both", "--seed", "5"};
  auto args = base;
  args.insert(args.end(), {"--out", a.string(), "--threads", "1"});
  REQUIRE(invoke(args).code == 0);
  args = base;
  args.insert(args.end(), {"--out", b.string(), "--threads", "3"});
  REQUIRE(invoke(args).code == 0);
  for (const char* f : {"samples_direct.csv", "samples_timechange.csv"}) {
    CAPTURE(f);
    const std::string text = slurp(a / f);
    CHECK(text == slurp(b / f));
    std::istringstream is(text);
    std::string line;
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 2 + 30);
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("validate passes a matching pair and fails a mismatched one") {
  const fs::path dir = scratch("validate");
  const std::string out = dir.string();
  REQUIRE(invoke({"analyze", "model=kinetic(3)", "--out", (dir / "k3").string()}).code == 0);
  REQUIRE(invoke({"analyze", "model=kinetic(7)", "--out", (dir / "k7").string()}).code == 0);
  REQUIRE(invoke({"simulate", "model=kinetic(3)", "n_paths=400", "epsilon=1e-2", "--out", out}).code == 0);
  const std::string samples = "samples=" + (dir / "samples_direct.csv").string();

  const Result good = invoke({"validate", samples, "analysis=" + (dir / "k3" / "analysis.json").string(),
                              "min_points=17", "reference_cms=true", "check_alpha=false", "--out", out});
  CHECK(good.code == 0);
  CHECK(json::parse(good.out)["pass"] == true);
  CHECK(fs::exists(dir / "validation_plot.csv"));

  const Result bad = invoke({"validate", samples, "analysis=" + (dir / "k7" / "analysis.json").string(),
                             "check_alpha=false", "--out", out});
  CHECK(bad.code == 1);
  CHECK(json::parse(bad.out)["pass"] == false);
  fs::remove_all(dir);
}

TEST_CASE("errors are JSON on stderr with exit code 2") {
  const fs::path dir = scratch("errors");
  fs::create_directories(dir);
  { std::ofstream(dir / "empty.csv"); }
  REQUIRE(invoke({"analyze", "model=kinetic(3)", "--out", dir.string()}).code == 0);
  const Result r = invoke({"validate", "samples=" + (dir / "empty.csv").string(),
                           "analysis=" + (dir / "analysis.json").string(), "--out", dir.string()});
  CHECK(r.code == 2);
  const json e = json::parse(r.err);
  CHECK(e["error"]["code"] == "Io");

  const Result unknown = invoke({"analyze", "model=kinetic(3)", "colour=blue", "--out", dir.string()});
  CHECK(unknown.code == 2);
  CHECK(json::parse(unknown.err)["error"]["code"] == "InvalidConfig");

  const Result usage = invoke({"frobnicate"});
  CHECK(usage.code == 2);
  CHECK(json::parse(usage.err)["error"]["code"] == "UsageError");
  fs::remove_all(dir);
}

TEST_CASE("stable presets pass their own validation") {
  const fs::path dir = scratch("stable");
  for (const char* spec : {"half", "three_halves", "one"}) {
    CAPTURE(spec);
    const Result r = invoke({"stable", std::string("spec=") + spec, "n_paths=3000", "--out", dir.string()});
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["pass"] == true);
  }
  const Result e = invoke({"stable", "spec=three_halves", "method=excursion", "dt=1e-4", "n_paths=200",
                           "symmetric=true", "format=bin", "--out", dir.string()});
  CHECK(e.code == 0);
  CHECK(fs::exists(dir / "stable_excursion.bin"));
  fs::remove_all(dir);
}

TEST_CASE("config files and later overrides") {
  const fs::path dir = scratch("config");
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "run.cfg");
    os << "# kinetic run\nmodel=kinetic(7)\n\n";
  }
  const Result r = invoke({"analyze", "--config", (dir / "run.cfg").string(), "--out", dir.string()});
  CHECK(json::parse(r.out)["regime"] == "Diffusive");
  const Result o =
      invoke({"analyze", "--config", (dir / "run.cfg").string(), "model=kinetic(3)", "--out", dir.string()});
  CHECK(json::parse(o.out)["regime"] == "Levy");
  fs::remove_all(dir);
}

TEST_CASE("presets are listed") {
  const Result r = invoke({"presets"});
  CHECK(r.code == 0);
  CHECK(r.out.find("kinetic") != std::string::npos);
  CHECK(r.out.find("heavy_tailed") != std::string::npos);
}

}  // TEST_SUITE
