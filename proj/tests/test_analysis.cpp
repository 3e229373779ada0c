#include <doctest.h>

#include <cmath>

#include "analysis.hpp"
#include "core.hpp"
#include "instances.hpp"
#include "oracle.hpp"
#include "reference.hpp"
#include "simulator.hpp"

using namespace wsrpt;
using doctest::Approx;

namespace {

// Composite Simpson on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n = 20000) {
  double h = (b - a) / n, s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4 : 2);
  return s * h / 3;
}

}  // namespace

TEST_CASE("f curve") {
  CHECK(f_curve(0, {0, 1}) == 0);
  double e = 1 - std::exp(-1.0);
  CHECK(f_argmax({0, 1}) == Approx(e).epsilon(1e-7));
  CHECK(f_argmax({1, 1}) < e);
  CHECK(f_argmax({1, 1}) > 0);
  CHECK(f_argmax({-0.5, 1}) > e);
  CHECK(f_argmax({-0.5, 1}) < 1);
  // Concave near the argmax.
  for (FParams p : {FParams{0, 1}, FParams{1, 1}, FParams{-0.5, 1}}) {
    double x = f_argmax(p), h = 1e-3;
    CHECK(f_curve(x + h, p) + f_curve(x - h, p) - 2 * f_curve(x, p) < 0);
  }
}

TEST_CASE("group ratio") {
  CHECK(group_ratio(0, 1) == 1);
  double y = 0.8157, v = 0.7066;
  double r = group_ratio(v, 1 + (y - v) / (1 - y));
  CHECK(r == Approx(1.2259).epsilon(5e-4));
  CHECK(-std::log(1 - v) == Approx(1.2259).epsilon(5e-4));
}

TEST_CASE("basic closed form") {
  ScenarioMetrics m = basic_ratio_closed(0.8157, 0.7066);
  CHECK(m.ratio == Approx(1.2259).epsilon(5e-4));
  CHECK(m.W == Approx(4.7521).epsilon(1e-3));
  CHECK(m.L == Approx(2.2995).epsilon(1e-3));
  // Delta_v = (y - v)/(1 - y) = L - 1 - v.
  double dv = (0.8157 - 0.7066) / (1 - 0.8157);
  CHECK(dv == Approx(0.5920).epsilon(1e-3));
  CHECK(dv == Approx(m.L - 1 - 0.7066).epsilon(1e-9));

  ScenarioMetrics h = basic_ratio_closed(0.5, 0.5);
  CHECK(h.ratio == Approx(1.0906).epsilon(1e-4));
  CHECK(h.L == Approx(1.5));
  CHECK(h.W == Approx(1 + std::log(2.0)));
}

TEST_CASE("profile quadrature matches an independent Simpson rule") {
  double y = 0.75, v = 0.7062, z = 0.3623;
  double s = (1 + z) / (1 - y), R = (1 + z) / (y + z), dv = s * (y - v);
  double C = 1 + z / (1 - y) * (1 + z / 2) +
             simpson([&](double x) { return (1 + z + dv + v - x) / (1 - x); }, 0, v) +
             simpson([&](double x) { return s / (1 - x) * (1 + z + s * (y - x)); }, v, y);
  double Cs = simpson([](double x) { return x / (1 - x); }, 0, y) + z / (1 - y) * (y + z / 2) +
              (1 + v + z + dv) +
              simpson([&](double x) { return (s - 1) / (1 - x) * (y + z + (y - x) / (R - 1)); }, v, y);
  ScenarioMetrics m = profile_metrics(y, v, z);
  CHECK(m.C == Approx(C).epsilon(1e-9));
  CHECK(m.C_star == Approx(Cs).epsilon(1e-9));
  CHECK(m.ratio == Approx(1.2247).epsilon(1e-3));
  CHECK(m.W == Approx(4.5538).epsilon(1e-3));
  CHECK(m.L == Approx(2.3072).epsilon(1e-3));
}

TEST_CASE("profile examples") {
  ScenarioMetrics a = profile_metrics(0.10);
  CHECK(a.C == Approx(1.1105).epsilon(1e-4));
  CHECK(a.C_star == Approx(1.1054).epsilon(1e-4));
  CHECK(a.ratio == Approx(1.0047).epsilon(1e-4));
  ScenarioMetrics b = profile_metrics(0.10, std::nullopt, 1.3270);
  CHECK(b.C == Approx(3.7031).epsilon(1e-4));
  CHECK(b.C_star == Approx(3.5581).epsilon(1e-4));
  CHECK(b.ratio == Approx(1.0407).epsilon(1e-4));
  CHECK(b.W == Approx(2.5798).epsilon(1e-4));
  CHECK(b.L == Approx(2.4270).epsilon(1e-4));
}

TEST_CASE("property: profile and closed form agree when z = 0") {
  for (double y = 0.05; y < 0.96; y += 0.07)
    for (double f = 0.1; f <= 1.0; f += 0.15) {
      double v = y * f;
      ScenarioMetrics p = profile_metrics(y, v), c = basic_ratio_closed(y, v);
      CAPTURE(y);
      CAPTURE(v);
      CHECK(std::abs(p.ratio - c.ratio) < 1e-6);
      CHECK(std::abs(p.W - c.W) < 1e-6);
      CHECK(std::abs(p.L - c.L) < 1e-6);
    }
}

TEST_CASE("profile agrees with a fine discrete simulation") {
  ScenarioParams p;
  p.y = ref::q("1/2");
  p.v = ref::q("3/10");
  p.z = ref::q("1/5");
  p.delta = ref::q("1/500");
  Instance inst = gen_basic(p);
  double on = to_double(objective(simulate(inst, Policy::kWsrpt, TieRule::scripted(*inst.tie_script())), inst));
  double opt = to_double(structured_optimal(inst).objective);
  ScenarioMetrics m = profile_metrics(0.5, 0.3, 0.2);
  CHECK(on == Approx(m.C).epsilon(5e-3));
  CHECK(opt == Approx(m.C_star).epsilon(5e-3));
}

TEST_CASE("basic optimum") {
  BasicOptimum o = optimize_basic();
  CHECK(o.ratio == Approx(1.2259).epsilon(5e-4));
  CHECK(std::abs(o.y - 0.8157) < 5e-3);
  CHECK(std::abs(o.v - 0.7066) < 5e-3);
  CHECK(o.metrics.W / o.metrics.L == Approx(4.7521 / 2.2995).epsilon(1e-3));
  // Both fixed-point forms give the optimum ratio.
  CHECK(-std::log(1 - o.v) == Approx(o.ratio).epsilon(1e-4));
  CHECK(1 / o.y == Approx(o.ratio).epsilon(1e-4));
  // Concave along v at fixed y.
  double h = 1e-3;
  CHECK(basic_ratio_closed(o.y, o.v + h).ratio + basic_ratio_closed(o.y, o.v - h).ratio -
            2 * basic_ratio_closed(o.y, o.v).ratio <
        0);
}

TEST_CASE("floor-only ratio increases in y") {
  double last = 1;
  for (double y = 0.1; y < 0.95; y += 0.1) {
    double r = basic_ratio_closed(y, y).ratio;
    CHECK(r > last);
    last = r;
  }
}

TEST_CASE("nested combination") {
  double rs = 0.5307;
  ScenarioMetrics inner = basic_ratio_closed(0.8157, 0.7066);
  double lim = (1 + rs * (1 - std::log(1 - rs))) / (1 - std::log(1 - rs));
  CHECK(nested_ratio_limit(rs) == Approx(lim).epsilon(1e-12));
  CHECK(nested_ratio(rs, 1e-9, inner) == Approx(lim).epsilon(1e-6));
  CHECK(nested_ratio(rs, 10, inner) < 1.2259);
  CHECK(nested_ratio(rs, 30, inner) < inner.ratio);
  CHECK(nested_ratio(rs, 40, inner) > inner.ratio);
  NestedOptimum o = optimize_nested_ps(rs, inner);
  CHECK(o.ratio == Approx(1.2259).epsilon(5e-4));
  CHECK(o.ratio >= inner.ratio);
  CHECK(o.p_s > 35);
}

TEST_CASE("lower bound formulas") {
  double p2 = 2.3364;
  CHECK(lb_l1(1, p2) == Approx(std::sqrt((2 * p2 * p2 * p2 - 2) / p2)));
  CHECK(lb_l2(1, p2) == Approx(lb_l1(1, p2) / std::sqrt(p2 - 1)));
  CHECK(std::abs(lb_c1(1, p2) - 1.1038) < 1e-4);
  CHECK(lb_l1(1, 1 + 1e-9) < 1e-3);
  CHECK(lb_c1(1, 1 + 1e-9) == Approx(1).epsilon(1e-6));

  // c1 is the online cost (J2, block, J1) over the closed-pair optimum.
  double l = lb_l1(1, p2), rho = p2 / (p2 - 1);
  double online = p2 * p2 + rho * l * (p2 + l / 2) + (p2 + l + 1);
  CHECK(online / closed_pair_optimal(1, p2, 1, rho, l) == Approx(lb_c1(1, p2)).epsilon(1e-9));

  LbOptimum x = lb_intersection();
  CHECK(std::abs(x.p2 - 2.3364) < 1e-3);
  CHECK(std::abs(x.ratio - 1.1038) < 1e-4);
  LbOptimum o = optimize_lb();
  CHECK(std::abs(o.p2 - x.p2) < 1e-3);
  CHECK(o.ratio == Approx(x.ratio).epsilon(1e-5));

  auto curves = lb_curves(1.5, 4, 26);
  REQUIRE(curves.size() == 26);
  for (const LbCurvePoint& c : curves) {
    if (c.p2 < x.p2 - 1e-3) CHECK(c.j1_first < c.j2_first);
    if (c.p2 > x.p2 + 1e-3) CHECK(c.j1_first > c.j2_first);
  }
}

TEST_CASE("middle branch and two-segment bounds") {
  CHECK(lb_middle_bound_first(1, 2.3364) == Approx(1.13853).epsilon(1e-4));
  CHECK(lb_middle_bound_second(1, 2.3364) == Approx(1.13918).epsilon(1e-4));
  CHECK(lb_middle_bound_first(1, 2.3364) > 1.1038);
  CHECK(nested_condition_max(2.08) < 1.2259);
}

TEST_CASE("reference ratio table reproduction") {
  auto rows = reproduce_table1();
  REQUIRE(rows.size() == table1_reference().size());
  int rederived = 0;
  for (const Table1Result& r : rows) {
    CAPTURE(r.reference.y);
    CHECK(r.max_delta < 1e-3);
    rederived += r.rederived;
  }
  CHECK(rederived <= 4);
  const Table1Result& last = rows.back();
  CHECK(last.computed.ratio == Approx(1.2259).epsilon(5e-4));
  std::string csv = table1_csv(rows);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rows.size()) + 1);
}

TEST_CASE("golden search helpers") {
  auto f = [](double x) { return -(x - 0.3) * (x - 0.3); };
  CHECK(golden_max(f, 0, 1) == Approx(0.3).epsilon(1e-8));
  auto g = [](double x) { return std::sin(5 * x); };
  CHECK(grid_golden_max(g, 0, 1, 100) == Approx(M_PI / 10).epsilon(1e-7));
}
