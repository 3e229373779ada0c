#include "core.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace wsrpt {

namespace {

Rational parse_decimal(std::string_view text, std::string_view original) {
  auto fail = [&]() {
    return Error(ErrorCode::kParse,
                 "not a rational numeral: '" + std::string(original) + "'");
  };
  if (text.empty()) throw fail();
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < text.size(); ++pos) {
    char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw fail();
  long exponent = 0;
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') throw fail();
    ++pos;
    std::string exp_text(text.substr(pos));
    if (exp_text.empty()) throw fail();
    std::size_t used = 0;
    try {
      exponent = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      throw fail();
    }
    if (used != exp_text.size() || std::abs(exponent) > 4000) throw fail();
  }
  mpz_class numerator(digits, 10);
  long scale = exponent - frac_digits;
  mpz_class ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(std::abs(scale)));
  Rational out;
  if (scale >= 0) {
    out = Rational(numerator * ten_pow);
  } else {
    out = Rational(numerator, ten_pow);
    out.canonicalize();
  }
  if (negative) out = -out;
  return out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  std::string_view trimmed = text;
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front())))
    trimmed.remove_prefix(1);
  while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back())))
    trimmed.remove_suffix(1);
  auto slash = trimmed.find('/');
  if (slash == std::string_view::npos) return parse_decimal(trimmed, text);
  Rational num = parse_decimal(trimmed.substr(0, slash), text);
  Rational den = parse_decimal(trimmed.substr(slash + 1), text);
  if (den == 0) throw Error(ErrorCode::kParse, "zero denominator in '" + std::string(text) + "'");
  Rational out = num / den;
  return out;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

Rational rational_from_double(double x, long den) {
  if (!std::isfinite(x) || den <= 0)
    throw Error(ErrorCode::kDomain, "cannot convert non-finite value to rational");
  double scaled = std::round(x * static_cast<double>(den));
  Rational out(mpz_class(std::to_string(static_cast<long long>(scaled))), mpz_class(den));
  out.canonicalize();
  return out;
}

Instance::Instance(std::vector<Job> jobs, std::optional<TieScript> tie_script)
    : jobs_(std::move(jobs)), tie_script_(std::move(tie_script)) {
  if (jobs_.empty()) throw Error(ErrorCode::kInvalidArgument, "instance has no jobs");
  for (std::size_t i = 0; i < jobs_.size(); ++i) {
    const Job& j = jobs_[i];
    if (j.processing <= 0)
      throw Error(ErrorCode::kInvalidArgument,
                  "job " + std::to_string(j.id) + " has non-positive processing time");
    if (j.release < 0)
      throw Error(ErrorCode::kInvalidArgument,
                  "job " + std::to_string(j.id) + " has negative release");
    if (j.weight < 0)
      throw Error(ErrorCode::kInvalidArgument,
                  "job " + std::to_string(j.id) + " has negative weight");
    if (!index_.emplace(j.id, i).second)
      throw Error(ErrorCode::kInvalidArgument, "duplicate job id " + std::to_string(j.id));
  }
}

const Job& Instance::job(JobId id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    throw Error(ErrorCode::kInvalidArgument, "unknown job id " + std::to_string(id));
  return jobs_[it->second];
}

bool operator==(const Instance& a, const Instance& b) {
  if (a.jobs_.size() != b.jobs_.size()) return false;
  for (std::size_t i = 0; i < a.jobs_.size(); ++i) {
    const Job& x = a.jobs_[i];
    const Job& y = b.jobs_[i];
    if (x.id != y.id || x.release != y.release || x.processing != y.processing ||
        x.weight != y.weight)
      return false;
  }
  auto script_eq = [](const std::optional<TieScript>& s, const std::optional<TieScript>& t) {
    if (s.has_value() != t.has_value()) return false;
    if (!s) return true;
    if (s->size() != t->size()) return false;
    for (std::size_t i = 0; i < s->size(); ++i)
      if ((*s)[i].t != (*t)[i].t || (*s)[i].choice != (*t)[i].choice) return false;
    return true;
  };
  return script_eq(a.tie_script_, b.tie_script_);
}

Schedule::Schedule(std::vector<Slice> slices) {
  slices_.reserve(slices.size());
  for (auto& s : slices) {
    if (s.start >= s.end)
      throw Error(ErrorCode::kInfeasible, "empty or reversed slice for job " + std::to_string(s.job));
    if (!slices_.empty() && slices_.back().job == s.job && slices_.back().end == s.start) {
      slices_.back().end = s.end;
    } else {
      slices_.push_back(std::move(s));
    }
  }
}

Rational Schedule::completion(JobId id) const {
  for (auto it = slices_.rbegin(); it != slices_.rend(); ++it)
    if (it->job == id) return it->end;
  throw Error(ErrorCode::kInvalidArgument, "job " + std::to_string(id) + " not in schedule");
}

Rational Schedule::remaining(const Job& job, const Rational& t) const {
  Rational left = job.processing;
  for (const Slice& s : slices_) {
    if (s.start >= t) break;
    if (s.job != job.id) continue;
    const Rational& stop = s.end < t ? s.end : t;
    left -= stop - s.start;
  }
  return left;
}

Rational Schedule::makespan() const {
  if (slices_.empty()) return Rational(0);
  return slices_.back().end;
}

void Schedule::validate(const Instance& instance) const {
  std::map<JobId, Rational> work;
  for (std::size_t i = 0; i < slices_.size(); ++i) {
    const Slice& s = slices_[i];
    if (!instance.contains(s.job))
      throw Error(ErrorCode::kInfeasible, "schedule runs unknown job " + std::to_string(s.job));
    if (s.start >= s.end) throw Error(ErrorCode::kInfeasible, "empty slice");
    if (i > 0 && slices_[i - 1].end > s.start)
      throw Error(ErrorCode::kInfeasible, "overlapping or unsorted slices");
    const Job& j = instance.job(s.job);
    if (s.start < j.release)
      throw Error(ErrorCode::kInfeasible,
                  "job " + std::to_string(s.job) + " runs before its release");
    work[s.job] += s.end - s.start;
  }
  for (const Job& j : instance.jobs()) {
    auto it = work.find(j.id);
    if (it == work.end() || it->second != j.processing)
      throw Error(ErrorCode::kInfeasible,
                  "job " + std::to_string(j.id) + " does not receive its processing time");
  }
}

Rational objective(const Schedule& schedule, const Instance& instance) {
  std::map<JobId, Rational> done;
  for (const Slice& s : schedule.slices()) done[s.job] = s.end;
  if (done.size() != instance.size())
    throw Error(ErrorCode::kInvalidArgument, "schedule and instance job sets differ");
  Rational total = 0;
  for (const Job& j : instance.jobs()) {
    auto it = done.find(j.id);
    if (it == done.end())
      throw Error(ErrorCode::kInvalidArgument,
                  "job " + std::to_string(j.id) + " missing from schedule");
    total += j.weight * it->second;
  }
  return total;
}

Rational smith_ratio(const Job& job, const Rational& remaining) {
  if (remaining <= 0)
    throw Error(ErrorCode::kDomain, "Smith ratio needs positive remaining time");
  Rational out = job.weight / remaining;
  return out;
}

Instance normalize_releases(const Instance& instance) {
  Rational shift = instance.jobs().front().release;
  for (const Job& j : instance.jobs()) shift = std::min(shift, j.release);
  if (shift == 0) return instance;
  std::vector<Job> jobs(instance.jobs().begin(), instance.jobs().end());
  for (Job& j : jobs) j.release -= shift;
  std::optional<TieScript> script = instance.tie_script();
  if (script)
    for (TieChoice& c : *script) c.t -= shift;
  Instance out(std::move(jobs), std::move(script));
  out.set_tags(instance.tags());
  return out;
}

}  // namespace wsrpt
