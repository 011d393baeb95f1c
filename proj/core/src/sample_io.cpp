#include "stablediff/sample_io.hpp"

#include <bit>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "stablediff/error.hpp"

namespace stablediff {

namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'S', 'D', 'F', 'S', 'A', 'M', 'P', '1'};

json metadata(const FunctionalSample& s) {
  return json{{"schema", 1},
              {"scheme", s.scheme},
              {"seed", s.seed},
              {"dt", s.dt},
              {"epsilon", s.epsilon},
              {"model", s.model},
              {"observable", s.observable},
              {"regime", s.regime},
              {"alpha", s.alpha},
              {"normalization", s.normalization},
              {"centering", s.centering},
              {"exploded", s.exploded},
              {"clipped", s.clipped},
              {"n_paths", s.n_paths},
              {"times", s.times}};
}

void apply_metadata(FunctionalSample& s, const json& j) {
  s.scheme = j.value("scheme", "");
  s.seed = j.value("seed", std::uint64_t(0));
  s.dt = j.value("dt", 0.0);
  s.epsilon = j.value("epsilon", 0.0);
  s.model = j.value("model", "");
  s.observable = j.value("observable", "");
  s.regime = j.value("regime", "");
  s.alpha = j.value("alpha", 0.0);
  s.normalization = j.value("normalization", 1.0);
  s.centering = j.value("centering", 0.0);
  s.exploded = j.value("exploded", std::size_t(0));
  s.clipped = j.value("clipped", std::size_t(0));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void io_error(const std::string& what, const std::string& path) {
  throw Error(ErrorCode::Io, what + ": " + path);
}

template <class T>
void put(std::ostream& os, T v) {
  char b[sizeof v];
  for (std::size_t i = 0; i < sizeof v; ++i) b[i] = char((std::uint64_t(v) >> (8 * i)) & 0xff);
  os.write(b, sizeof v);
}

void put_double(std::ostream& os, double d) { put(os, std::bit_cast<std::uint64_t>(d)); }

template <class T>
T get(std::istream& is, const std::string& path) {
  unsigned char b[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(b), sizeof b)) io_error("truncated sample file", path);
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof b; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return T(v);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

void write_sample_csv(const FunctionalSample& s, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) io_error("cannot open for writing", path);
  os << "# " << metadata(s).dump() << "\n";
  os << "path";
  for (double t : s.times) os << ",t=" << fmt(t);
  os << "\n";
  for (std::size_t p = 0; p < s.n_paths; ++p) {
    os << p;
    for (std::size_t i = 0; i < s.times.size(); ++i) os << ',' << fmt(s.at(p, i));
    os << "\n";
  }
  if (!os) io_error("write failed", path);
}

FunctionalSample read_sample_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) io_error("cannot open", path);
  FunctionalSample s;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      try {
        apply_metadata(s, json::parse(line.substr(1)));
      } catch (const json::exception&) {
        io_error("malformed metadata line", path);
      }
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      if (cells.empty() || cells[0] != "path") io_error("missing header row", path);
      s.times.clear();
      for (std::size_t i = 1; i < cells.size(); ++i) {
        if (cells[i].rfind("t=", 0) != 0) io_error("header cells must read t=<time>", path);
        s.times.push_back(std::stod(cells[i].substr(2)));
      }
      have_header = true;
      continue;
    }
    if (cells.size() != s.times.size() + 1) io_error("row width does not match header", path);
    for (std::size_t i = 1; i < cells.size(); ++i) {
      // strtod keeps subnormals that std::stod rejects as out of range.
      char* end = nullptr;
      const double v = std::strtod(cells[i].c_str(), &end);
      if (cells[i].empty() || end != cells[i].c_str() + cells[i].size()) {
        io_error("non-numeric cell", path);
      }
      s.values.push_back(v);
    }
    ++s.n_paths;
  }
  if (!have_header) io_error("empty sample file", path);
  if (s.n_paths == 0) io_error("sample file has no rows", path);
  return s;
}

void write_sample_binary(const FunctionalSample& s, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) io_error("cannot open for writing", path);
  os.write(kMagic, sizeof kMagic);
  const std::string meta = metadata(s).dump();
  put(os, std::uint32_t(meta.size()));
  os.write(meta.data(), std::streamsize(meta.size()));
  put(os, std::uint64_t(s.n_paths));
  put(os, std::uint64_t(s.times.size()));
  for (double t : s.times) put_double(os, t);
  for (double v : s.values) put_double(os, v);
  if (!os) io_error("write failed", path);
}

FunctionalSample read_sample_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) io_error("cannot open", path);
  char magic[8];
  if (!is.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) {
    io_error("not a SDFSAMP1 file", path);
  }
  FunctionalSample s;
  const auto len = get<std::uint32_t>(is, path);
  std::string meta(len, '\0');
  if (!is.read(meta.data(), len)) io_error("truncated metadata", path);
  try {
    apply_metadata(s, json::parse(meta));
  } catch (const json::exception&) {
    io_error("malformed metadata", path);
  }
  s.n_paths = get<std::uint64_t>(is, path);
  const auto m = get<std::uint64_t>(is, path);
  s.times.resize(m);
  for (auto& t : s.times) t = std::bit_cast<double>(get<std::uint64_t>(is, path));
  s.values.resize(s.n_paths * m);
  for (auto& v : s.values) v = std::bit_cast<double>(get<std::uint64_t>(is, path));
  if (s.n_paths == 0) io_error("sample file has no rows", path);
  return s;
}

void write_sample(const FunctionalSample& s, const std::string& path) {
  if (ends_with(path, ".bin")) {
    write_sample_binary(s, path);
  } else {
    write_sample_csv(s, path);
  }
}

FunctionalSample read_sample(const std::string& path) {
  return ends_with(path, ".bin") ? read_sample_binary(path) : read_sample_csv(path);
}

FunctionalSample sample_from_excursions(const ExcursionSample& e, const std::string& label, std::uint64_t seed,
                                        double dt) {
  FunctionalSample s;
  s.times = e.times;
  s.n_paths = e.n_paths;
  s.values = e.values;
  s.scheme = "excursion";
  s.model = label;
  s.seed = seed;
  s.dt = dt;
  return s;
}

FunctionalSample sample_from_values(const std::vector<double>& values, double t, const std::string& scheme,
                                    std::uint64_t seed) {
  FunctionalSample s;
  s.times = {t};
  s.n_paths = values.size();
  s.values = values;
  s.scheme = scheme;
  s.seed = seed;
  return s;
}

}  // namespace stablediff
