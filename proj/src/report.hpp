#ifndef WSRPT_REPORT_HPP_
#define WSRPT_REPORT_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>

#include "core.hpp"
#include "instances.hpp"

namespace wsrpt {

inline constexpr double kCompetitiveRatio = 1.2259;

struct FuzzOptions {
  std::uint64_t trials = 10000;
  int n_max = 7;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
  std::uint64_t branch_budget = std::uint64_t{1} << 20;
  RandomRanges ranges;
  std::string certificate_path;  // written when non-empty
};

struct FuzzClassStats {
  std::string name;  // "unit-weight" | "zero-release" | "general"
  std::uint64_t trials = 0;
  std::uint64_t skipped = 0;
  std::uint64_t not_one = 0;  // trials whose ratio is not exactly 1
  double max_ratio = 1;
};

struct FuzzReport {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t skipped = 0;
  Rational worst_ratio{1};
  std::optional<Instance> worst_instance;
  std::uint64_t worst_trial = 0;
  std::string certificate_path;
  std::array<FuzzClassStats, 3> classes;
  // Unit-weight and zero-release trials all exactly 1, every ratio within
  // the competitive ratio envelope.
  bool ok = true;
};

/// Ratio of the worst WSRPT tie resolution to the optimum on random
/// instances. Trial i uses class i % 3 and a seed derived from (seed, i).
FuzzReport fuzz(const FuzzOptions& options);

/// Exact WSRPT (worst tie) / optimum ratio of one instance; 0/0 counts as 1.
Rational fuzz_ratio(const Instance& instance, std::uint64_t branch_budget);

std::string fuzz_report_json(const FuzzReport& report);

/// Standalone SVG: one bar per slice on a single machine row.
std::string render_gantt(const Schedule& schedule, const Instance& instance);
/// Standalone SVG: weight/processing of the executing job over time.
std::string render_profile(const Schedule& schedule, const Instance& instance);

}  // namespace wsrpt

#endif  // WSRPT_REPORT_HPP_
