#include <cmath>
#include <filesystem>
#include <cstring>
#include <fstream>
#include <limits>

#include "doctest.h"
#include "stablediff/asymptotics.hpp"
#include "stablediff/error.hpp"
#include "stablediff/presets.hpp"
#include "stablediff/report.hpp"
#include "stablediff/sample_io.hpp"

using namespace stablediff;
namespace fs = std::filesystem;

namespace {

FunctionalSample fixture() {
  FunctionalSample s;
  s.times = {0.5, 1, 2};
  s.n_paths = 3;
  s.values = {0.1, -2.5e-17, 1.0 / 3, 1e300, -7, std::nextafter(1.0, 2.0), 0, 5e-324, -0.0};
  s.scheme = "direct";
  s.seed = 0xFFFFFFFFFFFFull;
  s.dt = 0.01;
  s.epsilon = 1e-3;
  s.model = "kinetic(3)";
  s.observable = "centered_id";
  s.regime = "Levy";
  s.alpha = 4.0 / 3;
  s.normalization = 0.1;
  s.exploded = 1;
  return s;
}

void check_same(const FunctionalSample& a, const FunctionalSample& b) {
  CHECK(a.times == b.times);
  CHECK(a.n_paths == b.n_paths);
  REQUIRE(a.values.size() == b.values.size());
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    CHECK(std::memcmp(&a.values[k], &b.values[k], sizeof(double)) == 0);
  }
  CHECK(a.scheme == b.scheme);
  CHECK(a.seed == b.seed);
  CHECK(a.dt == b.dt);
  CHECK(a.epsilon == b.epsilon);
  CHECK(a.model == b.model);
  CHECK(a.regime == b.regime);
  CHECK(a.alpha == b.alpha);
  CHECK(a.normalization == b.normalization);
  CHECK(a.exploded == b.exploded);
}

fs::path temp(const std::string& name) { return fs::temp_directory_path() / ("stablediff_io_" + name); }

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::InvalidConfig;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("CSV round trip is exact") {
  const auto p = temp("a.csv");
  write_sample(fixture(), p.string());
  check_same(fixture(), read_sample(p.string()));
  std::ifstream is(p);
  std::string first, header;
  std::getline(is, first);
  std::getline(is, header);
  CHECK(first.rfind("# {", 0) == 0);
  CHECK(header == "path,t=0.5,t=1,t=2");
  fs::remove(p);
}

TEST_CASE("binary round trip is exact and little-endian") {
  const auto p = temp("a.bin");
  write_sample(fixture(), p.string());
  check_same(fixture(), read_sample(p.string()));
  std::ifstream is(p, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(is)), {});
  CHECK(bytes.substr(0, 8) == "SDFSAMP1");
  const auto len = std::uint32_t(std::uint8_t(bytes[8])) | std::uint32_t(std::uint8_t(bytes[9])) << 8 |
                   std::uint32_t(std::uint8_t(bytes[10])) << 16 | std::uint32_t(std::uint8_t(bytes[11])) << 24;
  CHECK(bytes[12] == '{');
  CHECK(bytes[12 + len - 1] == '}');
  CHECK(bytes.size() == 12 + len + 16 + 8 * (3 + 9));
  fs::remove(p);
}

TEST_CASE("malformed sample files raise Io errors") {
  const auto empty = temp("empty.csv");
  { std::ofstream(empty.string()); }
  CHECK(code_of([&] { (void)read_sample(empty.string()); }) == ErrorCode::Io);

  const auto ragged = temp("ragged.csv");
  {
    std::ofstream os(ragged);
    os << "path,t=1,t=2\n0,1.5\n";
  }
  CHECK(code_of([&] { (void)read_sample(ragged.string()); }) == ErrorCode::Io);

  const auto magic = temp("bad.bin");
  {
    std::ofstream os(magic, std::ios::binary);
    os << "NOTMAGIC0000";
  }
  CHECK(code_of([&] { (void)read_sample(magic.string()); }) == ErrorCode::Io);
  CHECK(code_of([&] { (void)read_sample(temp("missing.csv").string()); }) == ErrorCode::Io);
  for (const auto& p : {empty, ragged, magic}) fs::remove(p);
}

TEST_CASE("analysis JSON restores the limit CF") {
  for (const char* spec : {"kinetic(3)", "kinetic(2,1,0.5)", "kinetic(7)", "heavy_tailed(1,0.5,1,-0.5)"}) {
    CAPTURE(spec);
    const Preset p = make_preset(spec);
    const RegimeReport r = classify_regime(p.model, p.f, p.claim);
    const LimitLaw law = limit_law(r, p.model, p.f);
    const LimitLaw back = law_from_analysis_json(analysis_json(r, law, spec, p.f.name));
    CHECK(back.regime == law.regime);
    for (double xi : {-3.0, 0.2, 1.0, 8.0}) CHECK(std::abs(back.cf(xi, 2) - law.cf(xi, 2)) < 1e-12);
  }
  CHECK(code_of([] { (void)law_from_analysis_json("{\"schema\":1}"); }) == ErrorCode::InvalidConfig);
  CHECK(code_of([] { (void)law_from_analysis_json("not json"); }) == ErrorCode::InvalidConfig);
}

}  // TEST_SUITE
