#ifndef WSRPT_ORACLE_HPP_
#define WSRPT_ORACLE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "core.hpp"

namespace wsrpt {

struct OptimalResult {
  Schedule schedule;
  Rational objective;
  std::string method;  // "brute-force" | "dp" | "structured" | "closed-pair"
};

/// Preemptive list schedule: at every instant the released, unfinished job
/// that comes first in `order` runs. `order` must name every job once.
Schedule priority_schedule(const Instance& instance, const std::vector<JobId>& order);

struct BruteForceOptions {
  std::size_t max_n = 10;
};

/// Minimum objective over all priority orders, by depth-first branch and bound.
OptimalResult optimal_bruteforce(const Instance& instance, const BruteForceOptions& options = {});

struct DpOptions {
  std::uint64_t state_budget = 2'000'000;
};

/// Exact optimum over schedules that switch jobs only at multiples of `grid`.
/// Releases and processing times must be multiples of `grid`.
OptimalResult optimal_dp_timeindexed(const Instance& instance, const Rational& grid,
                                     const DpOptions& options = {});

/// Optimal schedule of a generated worst-case instance: priority order by
/// weight/processing descending, then processing ascending, then id.
/// Throws kNotGenerated unless the instance carries generator tags.
OptimalResult structured_optimal(const Instance& instance);

/// Optimum for two long jobs J1 = (0, p1, p1), J2 = (0, p2, p2) plus a block
/// of `pieces` equal small jobs of total length `total` and weight/processing
/// `ratio`, all released at `release`. pieces = 0 means a continuous block.
double closed_pair_optimal(double p1, double p2, double release, double ratio, double total,
                           long pieces = 0);
Rational closed_pair_optimal(const Rational& p1, const Rational& p2, const Rational& release,
                             const Rational& ratio, const Rational& total, long pieces);

}  // namespace wsrpt

#endif  // WSRPT_ORACLE_HPP_
