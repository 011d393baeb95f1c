#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace stablediff {

// Philox4x32-10 (Salmon et al.), keyed by the 64-bit seed.
class Philox4x32 {
 public:
  using Block = std::array<std::uint32_t, 4>;

  explicit Philox4x32(std::uint64_t seed)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  Block operator()(Block ctr) const {
    std::array<std::uint32_t, 2> key = key_;
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
      key[0] += 0x9E3779B9u;
      key[1] += 0xBB67AE85u;
    }
    return ctr;
  }

 private:
  std::array<std::uint32_t, 2> key_;
};

// Independent stream per (seed, path, stream tag). The draw index is the
// counter, so a path's variates never depend on which thread runs it.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t path, std::uint32_t stream = 0)
      : gen_(seed), path_(path), stream_(stream) {}

  // Uniform on the open interval (0, 1).
  double uniform() {
    if (have_ == 0) refill();
    --have_;
    const std::uint64_t bits = (std::uint64_t(buf_[2 * have_ + 1]) << 32) | buf_[2 * have_];
    return (double(bits >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double exponential() { return -std::log(uniform()); }

  std::uint64_t draws() const { return counter_; }

 private:
  void refill() {
    buf_ = gen_({static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
                 static_cast<std::uint32_t>(path_),
                 static_cast<std::uint32_t>(path_ >> 32) ^ (stream_ << 16)});
    ++counter_;
    have_ = 2;
  }

  Philox4x32 gen_;
  std::uint64_t path_;
  std::uint32_t stream_;
  std::uint64_t counter_ = 0;
  Philox4x32::Block buf_{};
  int have_ = 0;
  double spare_ = 0;
  bool has_spare_ = false;
};

}  // namespace stablediff
