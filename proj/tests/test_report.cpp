#include <doctest.h>

#include <filesystem>

#include "core.hpp"
#include "instances.hpp"
#include "oracle.hpp"
#include "reference.hpp"
#include "report.hpp"
#include "simulator.hpp"

using namespace wsrpt;
using ref::q;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("fuzz classes on a small run") {
  auto cert = std::filesystem::temp_directory_path() / "wsrpt_test_certificate.json";
  FuzzOptions o;
  o.trials = 300;
  o.n_max = 6;
  o.seed = 11;
  o.threads = 2;
  o.certificate_path = cert.string();
  FuzzReport r = fuzz(o);
  CHECK(r.ok);
  CHECK(r.trials == 300);
  CHECK(r.classes[0].name == "unit-weight");
  CHECK(r.classes[1].name == "zero-release");
  CHECK(r.classes[0].not_one == 0);
  CHECK(r.classes[1].not_one == 0);
  CHECK(r.classes[0].trials + r.classes[1].trials + r.classes[2].trials == 300);
  CHECK(r.worst_ratio >= 1);
  CHECK(to_double(r.worst_ratio) <= kCompetitiveRatio + 1e-6);

  // The certificate replays to the reported ratio.
  REQUIRE(r.worst_instance);
  Instance replay = read_instance(cert.string());
  CHECK(replay == *r.worst_instance);
  CHECK(fuzz_ratio(replay, o.branch_budget) == r.worst_ratio);
  std::filesystem::remove(cert);

  // Thread count does not change the result.
  o.threads = 1;
  o.certificate_path.clear();
  FuzzReport s = fuzz(o);
  CHECK(s.worst_ratio == r.worst_ratio);
  CHECK(s.worst_trial == r.worst_trial);
  CHECK(fuzz_report_json(s).find("\"classes\"") != std::string::npos);

  o.n_max = 9;
  CHECK_THROWS_AS(fuzz(o), Error);
}

TEST_CASE("fuzz_ratio matches a direct computation") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Instance inst = gen_random(5, seed);
    Rational on = simulate_exhaustive_worst(inst, Policy::kWsrpt, 1 << 20).objective;
    CHECK(fuzz_ratio(inst, 1 << 20) == on / ref::enumerate_optimum(inst));
  }
  Instance zero = ref::make({{"0", "1", "0"}});
  CHECK(fuzz_ratio(zero, 1 << 20) == 1);
}

TEST_CASE("gantt SVG") {
  Instance one = ref::make({{"0", "2", "1"}});
  Schedule s = simulate(one, Policy::kWsrpt, TieRule::prefer_running());
  std::string svg = render_gantt(s, one);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(count(svg, "<rect") == 1);

  Instance two = ref::make({{"0", "2", "1"}, {"1", "1", "9"}});
  Schedule t = simulate(two, Policy::kWsrpt, TieRule::prefer_running());
  CHECK(count(render_gantt(t, two), "<rect") == 3);

  CHECK_THROWS_AS(render_gantt(Schedule(), one), Error);
  CHECK_THROWS_AS(render_gantt(Schedule({{4, 0, 1}}), one), Error);
  CHECK_THROWS_AS(Schedule({{0, 1, 1}}), Error);
}

TEST_CASE("profile SVG") {
  Instance one = ref::make({{"0", "2", "1"}});
  std::string svg = render_profile(simulate(one, Policy::kWsrpt, TieRule::prefer_running()), one);
  // One horizontal line for the job plus the two axes.
  CHECK(count(svg, "<line") == 3);

  ScenarioParams p;
  p.y = q("0.8157");
  p.v = q("0.7066");
  p.delta = q("1/50");
  Instance basic = gen_basic(p);
  Schedule bs = simulate(basic, Policy::kWsrpt, TieRule::scripted(*basic.tie_script()));
  std::string b = render_profile(bs, basic);
  CHECK(count(b, "<line") == bs.slices().size() + 2);
  CHECK(render_profile(bs, basic) == b);
  CHECK_THROWS_AS(render_profile(Schedule(), basic), Error);
}
