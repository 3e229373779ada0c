#ifndef WSRPT_CORE_HPP_
#define WSRPT_CORE_HPP_

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wsrpt {

/// Exact time/weight value. All simulation and oracle arithmetic uses this.
using Rational = mpq_class;

using JobId = int;

enum class ErrorCode {
  kInvalidArgument = 1,
  kParse,
  kIo,
  kBudgetExceeded,
  kDomain,
  kNotGenerated,
  kInfeasible,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// num/den in canonical form. Use this instead of mpq_class(num, den), which
// leaves the fraction unreduced.
inline Rational make_rational(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "3", "-2/7", "0.8157", "1e-3", "2.5E+2" exactly.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);
// Nearest rational with denominator `den` (round half away from zero).
Rational rational_from_double(double x, long den);

struct Job {
  JobId id = 0;
  Rational release;
  Rational processing;
  Rational weight;
};

/// One tie-break instruction: at decision time `t`, run `choice`.
struct TieChoice {
  Rational t;
  JobId choice = 0;
};
using TieScript = std::vector<TieChoice>;

/// Provenance of a generated instance. Needed by structured_optimal.
struct GeneratorTags {
  std::string generator;  // "basic" | "nested"
  std::map<std::string, std::string> values;
  std::vector<std::string> warnings;
};

class Instance {
 public:
  Instance() = default;
  // Validates the job invariants; ids must be unique.
  explicit Instance(std::vector<Job> jobs,
                    std::optional<TieScript> tie_script = std::nullopt);

  std::span<const Job> jobs() const { return jobs_; }
  std::size_t size() const { return jobs_.size(); }
  const Job& job(JobId id) const;
  bool contains(JobId id) const { return index_.count(id) != 0; }

  const std::optional<TieScript>& tie_script() const { return tie_script_; }
  void set_tie_script(std::optional<TieScript> script) {
    tie_script_ = std::move(script);
  }
  const std::optional<GeneratorTags>& tags() const { return tags_; }
  void set_tags(std::optional<GeneratorTags> tags) { tags_ = std::move(tags); }

  friend bool operator==(const Instance& a, const Instance& b);

 private:
  std::vector<Job> jobs_;
  std::map<JobId, std::size_t> index_;
  std::optional<TieScript> tie_script_;
  std::optional<GeneratorTags> tags_;
};

struct Slice {
  JobId job = 0;
  Rational start;
  Rational end;
};

inline bool operator==(const Slice& a, const Slice& b) {
  return a.job == b.job && a.start == b.start && a.end == b.end;
}

/// Preemptive single-machine schedule. Adjacent slices of the same job are
/// merged on construction.
class Schedule {
 public:
  Schedule() = default;
  explicit Schedule(std::vector<Slice> slices);

  std::span<const Slice> slices() const { return slices_; }
  bool empty() const { return slices_.empty(); }
  Rational completion(JobId id) const;
  // Processing time minus work executed before t.
  Rational remaining(const Job& job, const Rational& t) const;
  Rational makespan() const;

  // Throws Error(kInfeasible) unless every invariant against `instance` holds:
  // sorted disjoint slices, no slice before release, exact total work.
  void validate(const Instance& instance) const;

  friend bool operator==(const Schedule& a, const Schedule& b) {
    return a.slices_ == b.slices_;
  }

 private:
  std::vector<Slice> slices_;
};

/// Sum of weight times completion time.
Rational objective(const Schedule& schedule, const Instance& instance);

/// weight / remaining; remaining must be positive.
Rational smith_ratio(const Job& job, const Rational& remaining);

/// Shifts all releases so that the earliest one is zero.
Instance normalize_releases(const Instance& instance);

}  // namespace wsrpt

#endif  // WSRPT_CORE_HPP_
