#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace mlqls {

using Qubit = std::int32_t;      // program qubit index
using PhysQubit = std::int32_t;  // physical qubit index
using GateId = std::int32_t;     // position of a gate in its circuit

inline constexpr PhysQubit kNoQubit = -1;

/// prog -> phys. Total and injective for every valid mapping.
using Mapping = std::vector<PhysQubit>;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class InvalidInput : public Error {
 public:
  using Error::Error;
};

class InstanceTooLarge : public Error {
 public:
  using Error::Error;
};

using Rng = std::mt19937_64;

/// Decorrelates consecutive seeds so that stream i and i+1 do not overlap.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
  return Rng(splitmix64(seed ^ splitmix64(stream + 0x51ed27ULL)));
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline double uniform_real(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

/// Search budget expressed in deterministic work units, with a wall-clock
/// backstop at `wall_factor` times the nominal duration. Work units are
/// calibrated so that the unit limit is normally reached first, which keeps
/// results reproducible for a fixed seed.
class WorkBudget {
 public:
  WorkBudget() = default;
  WorkBudget(double seconds, double units_per_second, double wall_factor = 3.0)
      : limit_(static_cast<std::uint64_t>(seconds * units_per_second)),
        wall_limit_(seconds * wall_factor) {}

  static WorkBudget unlimited() { return WorkBudget(); }

  /// Charges `units` and reports whether the budget is exhausted.
  bool charge(std::uint64_t units = 1) {
    used_ += units;
    if (limit_ != 0 && used_ > limit_) exhausted_ = true;
    if (!exhausted_ && wall_limit_ > 0 && (used_ & 0x3ffULL) < units &&
        clock_.seconds() > wall_limit_) {
      exhausted_ = true;
    }
    return exhausted_;
  }
  [[nodiscard]] bool exhausted() const noexcept { return exhausted_; }
  [[nodiscard]] std::uint64_t used() const noexcept { return used_; }
  [[nodiscard]] std::uint64_t limit() const noexcept { return limit_; }

 private:
  std::uint64_t limit_ = 0;  // 0 means unlimited
  double wall_limit_ = 0.0;
  std::uint64_t used_ = 0;
  bool exhausted_ = false;
  Stopwatch clock_;
};

/// Worker cap from MLQLS_THREADS, else the hardware concurrency.
inline unsigned thread_cap() {
  if (const char* env = std::getenv("MLQLS_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace mlqls
