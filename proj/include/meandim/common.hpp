#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace meandim {

// A point in [0,1]^n.
using Point = std::vector<double>;

// Numeric tolerances shared across the library.  Values are pinned here so
// every module and test agrees on the same thresholds.
inline constexpr double kStrictSlack = 1e-12;       // strict "< eps" on distances
inline constexpr double kCoverPackSlack = 1e-9;     // cover/pack cross-check slack
inline constexpr double kLosslessTol = 1e-12;       // max-norm cutoff for exact reproduction
inline constexpr double kHolderSlack = 1e-12;       // certificate check slack
inline constexpr double kBaTol = 1e-9;              // alternating-minimization bracket tolerance
inline constexpr int kBaMaxIter = 10000;
inline constexpr double kSubaddSlack = 1e-6;        // nats
inline constexpr double kRateSlack = 1e-9;          // codec rate-bound slack
inline constexpr std::size_t kExactCoverCap = 24;   // exact covering search budget
inline constexpr std::size_t kGreedyCoverCap = 512; // enumerated cloud budget for greedy covering
inline constexpr std::size_t kWindowCap = 1000000;  // enumerated window budget
inline constexpr double kMarkovStationaryTol = 1e-10;
inline constexpr std::uint64_t kDigitCapacityFloor = 512;

// Invalid configuration or arguments; maps to CLI exit code 2.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration or search exceeded its configured budget.
class cap_exceeded : public std::runtime_error {
 public:
  cap_exceeded(const std::string& what, std::size_t requested, std::size_t cap)
      : std::runtime_error(what + " (requested " + std::to_string(requested) +
                           ", cap " + std::to_string(cap) + ")"),
        requested_(requested),
        cap_(cap) {}
  std::size_t requested() const { return requested_; }
  std::size_t cap() const { return cap_; }

 private:
  std::size_t requested_;
  std::size_t cap_;
};

// A digit-packing codec was asked for more symbols than its capacity allows.
class digit_capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// ceil(1/eps) with a snap to the nearest integer when 1/eps is within 1e-9 of
// one, so that scales like 0.1 or 1/3 stored as doubles land on the intended
// cell count.
inline std::uint64_t ceil_inv(double eps) {
  if (!(eps > 0.0) || eps > 1.0) {
    throw config_error("scale must lie in (0,1], got " + std::to_string(eps));
  }
  double raw = 1.0 / eps;
  double nearest = std::round(raw);
  if (std::abs(raw - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return static_cast<std::uint64_t>(nearest);
  }
  return static_cast<std::uint64_t>(std::ceil(raw));
}

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic random stream.  A (seed, stream) pair always yields the same
// sequence on every platform: seeding, uniform extraction, and the normal
// transform are all spelled out here rather than delegated to distribution
// classes, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) {
    std::uint64_t s = seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
    engine_.seed(splitmix64(s));
    for (int i = 0; i < 8; ++i) (void)engine_();
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform double in [0,1) with 53 random bits.
  double next_uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via the polar Box-Muller transform.
  double next_normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_uniform() - 1.0;
      v = 2.0 * next_uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * factor;
    has_spare_ = true;
    return u * factor;
  }

  // Uniform integer in [0, bound).
  std::uint64_t next_below(std::uint64_t bound) {
    double u = next_uniform();
    auto idx = static_cast<std::uint64_t>(u * static_cast<double>(bound));
    return idx >= bound ? bound - 1 : idx;
  }

 private:
  std::mt19937_64 engine_{0};
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// log(sum(exp(v))) guarded against empty input and -inf entries.
inline double logsumexp(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// Shannon entropy in nats of a probability vector; 0 log 0 = 0.
inline double entropy_nats(const std::vector<double>& p) {
  double h = 0.0;
  for (double q : p) {
    if (q > 0.0) h -= q * std::log(q);
  }
  return h;
}

// Binary entropy in nats.
inline double binary_entropy_nats(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log(1.0 - p);
}

inline double nats_to_bits(double x) { return x / std::log(2.0); }

// Runs fn(i) for i in [0, count) on up to `jobs` threads.  Callers write
// results into pre-sized slots indexed by i, so the merge order never depends
// on scheduling.
inline void parallel_for(int jobs, std::size_t count,
                         const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  std::size_t workers =
      std::min<std::size_t>(count, std::max<std::size_t>(
                                       1, jobs > 0 ? static_cast<std::size_t>(jobs)
                                                   : static_cast<std::size_t>(hw)));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error = nullptr;
  std::mutex error_mutex;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace meandim
