#include "report.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include <json.hpp>

#include "oracle.hpp"
#include "simulator.hpp"

namespace wsrpt {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct Candidate {
  Rational ratio{1};
  std::size_t hash = 0;
  std::uint64_t trial = 0;
  std::optional<Instance> instance;

  bool beats(const Candidate& o) const {
    if (ratio != o.ratio) return ratio > o.ratio;
    if (hash != o.hash) return hash < o.hash;
    return trial < o.trial;
  }
};

struct Partial {
  std::array<FuzzClassStats, 3> classes;
  Candidate worst;
  bool has_worst = false;
};

}  // namespace

Rational fuzz_ratio(const Instance& instance, std::uint64_t branch_budget) {
  Rational online = simulate_exhaustive_worst(instance, Policy::kWsrpt, branch_budget).objective;
  Rational best = optimal_bruteforce(instance).objective;
  if (best == 0) return online == 0 ? Rational(1) : Rational(-1);
  return online / best;
}

FuzzReport fuzz(const FuzzOptions& options) {
  if (options.n_max < 1 || options.n_max > 8)
    throw Error(ErrorCode::kInvalidArgument, "fuzz needs 1 <= n_max <= 8");
  const std::array<const char*, 3> names{"unit-weight", "zero-release", "general"};
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());

  std::atomic<std::uint64_t> next{0};
  std::vector<Partial> partials(threads);
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&](Partial& part) {
    try {
      for (int c = 0; c < 3; ++c) part.classes[c].name = names[c];
      while (true) {
        std::uint64_t trial = next.fetch_add(1);
        if (trial >= options.trials) break;
        int cls = static_cast<int>(trial % 3);
        std::uint64_t key = mix(options.seed ^ mix(trial));
        int n = 1 + static_cast<int>(key % static_cast<std::uint64_t>(options.n_max));
        RandomRanges ranges = options.ranges;
        ranges.unit_weight = cls == 0;
        ranges.zero_release = cls == 1;
        Instance inst = gen_random(n, mix(key), ranges);
        FuzzClassStats& stats = part.classes[cls];
        ++stats.trials;
        Rational ratio;
        try {
          ratio = fuzz_ratio(inst, options.branch_budget);
        } catch (const Error& e) {
          if (e.code() != ErrorCode::kBudgetExceeded) throw;
          ++stats.skipped;
          continue;
        }
        if (ratio != 1) ++stats.not_one;
        stats.max_ratio = std::max(stats.max_ratio, to_double(ratio));
        Candidate cand;
        cand.ratio = ratio;
        cand.trial = trial;
        if (!part.has_worst || ratio >= part.worst.ratio) {
          cand.hash = std::hash<std::string>{}(instance_to_json(inst));
          if (!part.has_worst || cand.beats(part.worst)) {
            cand.instance = inst;
            part.worst = std::move(cand);
            part.has_worst = true;
          }
        }
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!error) error = std::current_exception();
      next.store(options.trials);
    }
  };

  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker, std::ref(partials[t]));
  worker(partials[0]);
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);

  FuzzReport report;
  report.trials = options.trials;
  report.seed = options.seed;
  for (int c = 0; c < 3; ++c) report.classes[c].name = names[c];
  Candidate worst;
  bool has_worst = false;
  for (const Partial& p : partials) {
    for (int c = 0; c < 3; ++c) {
      FuzzClassStats& dst = report.classes[c];
      dst.trials += p.classes[c].trials;
      dst.skipped += p.classes[c].skipped;
      dst.not_one += p.classes[c].not_one;
      dst.max_ratio = std::max(dst.max_ratio, p.classes[c].max_ratio);
    }
    if (p.has_worst && (!has_worst || p.worst.beats(worst))) {
      worst = p.worst;
      has_worst = true;
    }
  }
  for (const FuzzClassStats& c : report.classes) report.skipped += c.skipped;
  if (has_worst) {
    report.worst_ratio = worst.ratio;
    report.worst_instance = worst.instance;
    report.worst_trial = worst.trial;
  }
  report.ok = report.classes[0].not_one == 0 && report.classes[1].not_one == 0 &&
              to_double(report.worst_ratio) <= kCompetitiveRatio + 1e-6 && report.worst_ratio >= 1;
  if (!options.certificate_path.empty() && report.worst_instance) {
    write_instance(*report.worst_instance, options.certificate_path);
    report.certificate_path = options.certificate_path;
  }
  return report;
}

std::string fuzz_report_json(const FuzzReport& r) {
  using nlohmann::json;
  json doc;
  doc["trials"] = r.trials;
  doc["seed"] = r.seed;
  doc["skipped"] = r.skipped;
  doc["worst_ratio"] = to_string(r.worst_ratio);
  doc["worst_ratio_float"] = to_double(r.worst_ratio);
  doc["worst_trial"] = r.worst_trial;
  doc["certificate"] = r.certificate_path;
  doc["ok"] = r.ok;
  doc["classes"] = json::array();
  for (const FuzzClassStats& c : r.classes)
    doc["classes"].push_back({{"name", c.name},
                              {"trials", c.trials},
                              {"skipped", c.skipped},
                              {"not_one", c.not_one},
                              {"max_ratio", c.max_ratio}});
  return doc.dump(1);
}

// ---------------------------------------------------------------------------

namespace {

constexpr double kWidth = 800;
constexpr double kMargin = 40;

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string color(JobId id) {
  return "hsl(" + std::to_string((static_cast<unsigned>(id) * 137u) % 360u) + ",60%,55%)";
}

void require_drawable(const Schedule& schedule, const Instance& instance) {
  if (schedule.empty()) throw Error(ErrorCode::kInvalidArgument, "cannot render an empty schedule");
  for (const Slice& s : schedule.slices())
    if (!instance.contains(s.job))
      throw Error(ErrorCode::kInvalidArgument, "schedule names unknown job " + std::to_string(s.job));
}

std::string svg_open(double height) {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kWidth) + "\" height=\"" +
         fmt(height) + "\" viewBox=\"0 0 " + fmt(kWidth) + " " + fmt(height) + "\">\n";
}

}  // namespace

std::string render_gantt(const Schedule& schedule, const Instance& instance) {
  require_drawable(schedule, instance);
  double t0 = to_double(schedule.slices().front().start);
  double span = std::max(1e-12, to_double(schedule.makespan()) - t0);
  double scale = (kWidth - 2 * kMargin) / span;
  const double height = 120;
  std::string out = svg_open(height);
  out += "<g class=\"slices\">\n";
  for (const Slice& s : schedule.slices()) {
    double x = kMargin + (to_double(s.start) - t0) * scale;
    double w = (to_double(s.end) - to_double(s.start)) * scale;
    out += "<rect x=\"" + fmt(x) + "\" y=\"30.000\" width=\"" + fmt(w) +
           "\" height=\"40.000\" fill=\"" + color(s.job) + "\"><title>job " +
           std::to_string(s.job) + " [" + to_string(s.start) + ", " + to_string(s.end) +
           ")</title></rect>\n";
  }
  out += "</g>\n<line x1=\"" + fmt(kMargin) + "\" y1=\"80.000\" x2=\"" + fmt(kWidth - kMargin) +
         "\" y2=\"80.000\" stroke=\"black\"/>\n";
  out += "<text x=\"" + fmt(kMargin) + "\" y=\"100.000\" font-size=\"12\">" + fmt(t0) + "</text>\n";
  out += "<text x=\"" + fmt(kWidth - kMargin) + "\" y=\"100.000\" font-size=\"12\" text-anchor=\"end\">" +
         fmt(t0 + span) + "</text>\n";
  out += "</svg>\n";
  return out;
}

std::string render_profile(const Schedule& schedule, const Instance& instance) {
  require_drawable(schedule, instance);
  double t0 = to_double(schedule.slices().front().start);
  double span = std::max(1e-12, to_double(schedule.makespan()) - t0);
  double top = 0;
  for (const Slice& s : schedule.slices()) {
    const Job& j = instance.job(s.job);
    top = std::max(top, to_double(j.weight / j.processing));
  }
  if (top <= 0) top = 1;
  const double height = 300;
  double sx = (kWidth - 2 * kMargin) / span;
  double sy = (height - 2 * kMargin) / top;
  std::string out = svg_open(height);
  out += "<g class=\"profile\" stroke-width=\"2\">\n";
  for (const Slice& s : schedule.slices()) {
    const Job& j = instance.job(s.job);
    double y = height - kMargin - to_double(j.weight / j.processing) * sy;
    out += "<line x1=\"" + fmt(kMargin + (to_double(s.start) - t0) * sx) + "\" y1=\"" + fmt(y) +
           "\" x2=\"" + fmt(kMargin + (to_double(s.end) - t0) * sx) + "\" y2=\"" + fmt(y) +
           "\" stroke=\"" + color(s.job) + "\"/>\n";
  }
  out += "</g>\n";
  out += "<line x1=\"" + fmt(kMargin) + "\" y1=\"" + fmt(height - kMargin) + "\" x2=\"" +
         fmt(kWidth - kMargin) + "\" y2=\"" + fmt(height - kMargin) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + fmt(kMargin) + "\" y1=\"" + fmt(kMargin) + "\" x2=\"" + fmt(kMargin) +
         "\" y2=\"" + fmt(height - kMargin) + "\" stroke=\"black\"/>\n";
  out += "<text x=\"4.000\" y=\"" + fmt(kMargin) + "\" font-size=\"12\">" + fmt(top) + "</text>\n";
  out += "</svg>\n";
  return out;
}

}  // namespace wsrpt
