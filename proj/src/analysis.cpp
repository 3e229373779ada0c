#include "analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "core.hpp"
#include "oracle.hpp"

namespace wsrpt {

namespace {

constexpr double kQuadTol = 1e-10;

double integrate(const std::function<double(double)>& f, double a, double b) {
  if (b <= a) return 0;
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 15, kQuadTol);
}

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::kDomain, what);
}

// Compass search maximization in two variables. `f` returns -inf outside
// the feasible region.
std::array<double, 2> compass_max(const std::function<double(double, double)>& f,
                                  std::array<double, 2> x, double step, double min_step) {
  double fx = f(x[0], x[1]);
  while (step > min_step) {
    bool moved = false;
    for (auto [dx, dy] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, -1}, {1, -1},
                          {-1, 1}}) {
      std::array<double, 2> c{x[0] + dx * step, x[1] + dy * step};
      double fc = f(c[0], c[1]);
      if (fc > fx) {
        x = c;
        fx = fc;
        moved = true;
        break;
      }
    }
    if (!moved) step /= 2;
  }
  return x;
}

double derivative(const std::function<double(double)>& f, double x) {
  const double h = 1e-6;
  return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace

double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double g = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return (a + b) / 2;
}

double grid_golden_max(const std::function<double(double)>& f, double lo, double hi, int points,
                       double tol) {
  double h = (hi - lo) / points;
  int best = 0;
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= points; ++i) {
    double v = f(lo + i * h);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  double a = std::max(lo, lo + (best - 1) * h);
  double b = std::min(hi, lo + (best + 1) * h);
  double x = golden_max(f, a, b, tol);
  return f(x) >= best_value ? x : lo + best * h;
}

// ---------------------------------------------------------------------------

double f_curve(double x, const FParams& p) {
  require(x >= 0 && x < 1, "f_curve: x outside [0, 1)");
  require(p.c > 0 && p.k + p.c > 0, "f_curve: need c > 0 and k + c > 0");
  return -(1 - x) * std::log1p(-x) / (p.k * x + p.c);
}

double f_argmax(const FParams& p) {
  return golden_max([&](double x) { return f_curve(x, p); }, 0, 1 - 1e-12, 1e-12);
}

double group_ratio(double x, double denominator) {
  require(x >= 0 && x < 1, "group_ratio: x outside [0, 1)");
  require(denominator > 0, "group_ratio: denominator must be positive");
  return 1 - std::log1p(-x) * (1 - x) / denominator;
}

ScenarioMetrics basic_ratio_closed(double y, double v) {
  require(0 < v && v <= y && y < 1, "basic_ratio_closed: need 0 < v <= y < 1");
  double q = 1 - y;
  ScenarioMetrics m;
  m.C = 1 + (y - v) / (q * q) + v - y * (1 - v) / q * std::log1p(-v);
  m.C_star = -y - std::log1p(-y) + (y * y * y - v * y * y) / (q * q) + (1 - v * y) / q;
  m.ratio = m.C / m.C_star;
  m.W = 1 + std::log((1 - v) / q) / q - std::log1p(-v);
  m.L = (1 - v * y) / q;
  return m;
}

double wall_density(double y, double z) { return (1 + z) / (1 - y); }

ScenarioMetrics profile_metrics(double y, std::optional<double> v_opt, std::optional<double> z_opt) {
  double v = v_opt.value_or(y);
  double z = z_opt.value_or(0);
  require(0 < y && y < 1, "profile_metrics: need 0 < y < 1");
  require(0 < v && v <= y, "profile_metrics: need 0 < v <= y");
  require(z >= 0, "profile_metrics: need z >= 0");

  bool wall = v < y;
  double s = wall ? wall_density(y, z) : 0;
  double R = (1 + z) / (y + z);
  double delta_v = s * (y - v);

  ScenarioMetrics m;
  m.L = 1 + v + z + delta_v;

  m.C = 1 + z / (1 - y) * (1 + z / 2);
  m.C += integrate([&](double x) { return (1 + z + delta_v + v - x) / (1 - x); }, 0, v);

  m.C_star = integrate([](double x) { return x / (1 - x); }, 0, y);
  m.C_star += z / (1 - y) * (y + z / 2) + m.L;

  m.W = 1 - std::log1p(-v) + z / (1 - y);
  if (wall) {
    m.C += integrate([&](double x) { return s / (1 - x) * (1 + z + s * (y - x)); }, v, y);
    m.C_star +=
        integrate([&](double x) { return (s - 1) / (1 - x) * (y + z + (y - x) / (R - 1)); }, v, y);
    m.W += integrate([&](double x) { return s / (1 - x); }, v, y);
  }
  m.ratio = m.C / m.C_star;
  return m;
}

// ---------------------------------------------------------------------------

double nested_ratio(double r_s, double p_s, const ScenarioMetrics& in) {
  require(0 < r_s && r_s < 1, "nested_ratio: need 0 < r_s < 1");
  require(p_s > 0, "nested_ratio: need p_s > 0");
  double w_s = p_s / (1 - r_s);
  double a = 1 - std::log1p(-r_s);
  double num = 1 + r_s * a + w_s * p_s * in.C + r_s * w_s * in.W + p_s * in.L * a;
  double den = a + w_s * p_s * in.C_star + r_s * w_s * in.W + p_s * in.L;
  return num / den;
}

double nested_ratio_limit(double r_s) {
  require(0 < r_s && r_s < 1, "nested_ratio_limit: need 0 < r_s < 1");
  double a = 1 - std::log1p(-r_s);
  return (1 + r_s * a) / a;
}

NestedOptimum optimize_nested_ps(double r_s, const ScenarioMetrics& inner) {
  auto f = [&](double log_ps) { return nested_ratio(r_s, std::exp(log_ps), inner); };
  double best = grid_golden_max(f, 0, std::log(1e5), 400, 1e-10);
  return {std::exp(best), f(best)};
}

BasicOptimum optimize_basic() {
  auto ratio = [](double y, double v) {
    if (!(0 < v && v <= y && y < 1)) return -std::numeric_limits<double>::infinity();
    return basic_ratio_closed(y, v).ratio;
  };
  const int n = 200;
  std::array<double, 2> best{0, 0};
  double best_value = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < n; ++i) {
    double y = static_cast<double>(i) / n;
    for (int j = 1; j <= i; ++j) {
      double v = static_cast<double>(j) / n;
      double r = ratio(y, v);
      if (r > best_value) {
        best_value = r;
        best = {y, v};
      }
    }
  }
  best = compass_max(ratio, best, 1.0 / n, 1e-6);
  BasicOptimum out;
  out.y = best[0];
  out.v = best[1];
  out.metrics = basic_ratio_closed(out.y, out.v);
  out.ratio = out.metrics.ratio;
  return out;
}

// ---------------------------------------------------------------------------

double lb_l1(double p1, double p2) {
  require(p2 > p1 && p1 > 0, "lower bound: need p2 > p1 > 0");
  return std::sqrt((2 * p2 * p2 * p2 - 2 * p1 * p1 * p1) / p2);
}

double lb_l2(double p1, double p2) { return lb_l1(p1, p2) / std::sqrt(p2 - p1); }

double lb_c1(double p1, double p2) {
  double l = lb_l1(p1, p2);
  double rho = p2 / (p2 - p1);
  double num = p2 * p2 + rho * l * (p2 + l / 2) + p1 * (p2 + l + p1);
  double den = p1 * p1 + rho * l * (p1 + l / 2) + p2 * (p2 + l + p1);
  return num / den;
}

double best_response_ratio(double p1, double p2, double release, double r1, double r2,
                           double prefix, double rho, double l) {
  struct Item {
    double ratio;
    double length;
    double weight;  // negative marks the block
  };
  std::vector<Item> items;
  if (r1 > 0) items.push_back({p1 / r1, r1, p1});
  if (r2 > 0) items.push_back({p2 / r2, r2, p2});
  items.push_back({rho, l, -1});
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.ratio > b.ratio; });
  double t = release;
  double online = prefix;
  for (const Item& it : items) {
    if (it.weight < 0) {
      online += rho * l * (t + l / 2);
    } else {
      online += it.weight * (t + it.length);
    }
    t += it.length;
  }
  return online / closed_pair_optimal(p1, p2, release, rho, l, 0);
}

BlockChoice best_block(double p1, double p2, double release, double r1, double r2, double prefix,
                       double rho) {
  auto f = [&](double l) { return best_response_ratio(p1, p2, release, r1, r2, prefix, rho, l); };
  double l = grid_golden_max(f, 1e-9, 4 * p2, 400, 1e-10);
  return {l, f(l)};
}

double lb_curve_j2_first(double p1, double p2) {
  require(p2 > p1 && p1 > 0, "lower bound: need p2 > p1 > 0");
  return best_block(p1, p2, p1, p1, p2 - p1, 0, p2 / (p2 - p1)).ratio;
}

double lb_curve_j1_first(double p1, double p2) {
  require(p2 > p1 && p1 > 0, "lower bound: need p2 > p1 > 0");
  return best_block(p1, p2, p2, 0, p1, p1 * p1, p2 / p1).ratio;
}

std::vector<LbCurvePoint> lb_curves(double p2_min, double p2_max, int points, double p1) {
  require(points >= 2 && p2_min > p1 && p2_max > p2_min, "lb_curves: bad range");
  std::vector<LbCurvePoint> out;
  for (int i = 0; i < points; ++i) {
    double p2 = p2_min + (p2_max - p2_min) * i / (points - 1);
    out.push_back({p2, lb_curve_j1_first(p1, p2), lb_curve_j2_first(p1, p2)});
  }
  return out;
}

LbOptimum lb_intersection(double p1, double lo, double hi) {
  auto d = [&](double p2) { return lb_curve_j2_first(p1, p2) - lb_curve_j1_first(p1, p2); };
  double dlo = d(lo);
  if (dlo * d(hi) > 0) throw Error(ErrorCode::kDomain, "lb curves do not cross in range");
  while (hi - lo > 1e-7) {
    double mid = (lo + hi) / 2;
    double dm = d(mid);
    if ((dm > 0) == (dlo > 0)) {
      lo = mid;
      dlo = dm;
    } else {
      hi = mid;
    }
  }
  double p2 = (lo + hi) / 2;
  return {p2, std::min(lb_curve_j1_first(p1, p2), lb_curve_j2_first(p1, p2))};
}

LbOptimum optimize_lb(double p1) {
  auto f = [&](double p2) { return std::min(lb_curve_j1_first(p1, p2), lb_curve_j2_first(p1, p2)); };
  double p2 = grid_golden_max(f, p1 * 1.0001, 10 * p1, 200, 1e-8);
  return {p2, f(p2)};
}

double lb_middle_bound_first(double p1, double p2) {
  return 1 + p1 * p2 /
                 (p1 * p1 + 2 * p1 * p2 + 2 * p2 * p2 + p2 * p2 * (p2 / 2 - p1) / (p1 + p2));
}

double lb_middle_bound_second(double p1, double p2) {
  return 1 + p1 * p2 / (2.25 * p2 * p2 + 1.5 * p1 * p2 + p1 * p1);
}

double nested_condition_rhs(double r_s, double w_over_l, double w_after) {
  require(0 < r_s && r_s < 1, "nested_condition_rhs: need 0 < r_s < 1");
  return 1 - (1 - r_s) * std::log1p(-r_s) / (r_s * w_over_l + (1 - r_s) * (1 + w_after));
}

double nested_condition_max(double w_over_l) {
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 1; i < 10000; ++i) best = std::max(best, nested_condition_rhs(i * 1e-4, w_over_l));
  return best;
}

// ---------------------------------------------------------------------------

const std::vector<Table1Row>& table1_reference() {
  using O = std::optional<double>;
  auto row = [](double y, O v, O z, double c, double cs, double r, double w, double l) {
    return Table1Row{y, v, z, ScenarioMetrics{c, cs, r, w, l}};
  };
  const O n = std::nullopt;
  static const std::vector<Table1Row> rows = {
      row(0.10, n, n, 1.1105, 1.1054, 1.0047, 1.1054, 1.1000),
      row(0.20, n, n, 1.2446, 1.2231, 1.0176, 1.2231, 1.2000),
      row(0.30, n, n, 1.4070, 1.3567, 1.0371, 1.3567, 1.3000),
      row(0.10, n, 1.3270, 3.7031, 3.5581, 1.0407, 2.5798, 2.4270),
      row(0.40, n, n, 1.6043, 1.5108, 1.0619, 1.5108, 1.4000),
      row(0.20, n, 1.2335, 4.0187, 3.7216, 1.0799, 2.7675, 2.4355),
      row(0.50, n, n, 1.8466, 1.6931, 1.0906, 1.6931, 1.5000),
      row(0.30, n, 1.1384, 4.3650, 3.9086, 1.1168, 2.9830, 2.4384),
      row(0.60, n, n, 2.1498, 1.9163, 1.1218, 1.9163, 1.6000),
      row(0.40, n, 1.0337, 4.7457, 4.1241, 1.1507, 3.2337, 2.4337),
      row(0.70, n, n, 2.5428, 2.2040, 1.1537, 2.2040, 1.7000),
      row(0.50, n, 0.9186, 5.1643, 4.3742, 1.1806, 3.5303, 2.4186),
      row(0.80, n, n, 3.0876, 2.6094, 1.1832, 2.6094, 1.8000),
      row(0.90, n, n, 3.9723, 3.3026, 1.2028, 3.3026, 1.9000),
      row(0.92, n, n, 4.2437, 3.5257, 1.2036, 3.5257, 1.9200),
      row(0.60, n, 0.7884, 5.6201, 4.6643, 1.2049, 3.8873, 2.3884),
      row(0.70, n, 0.6344, 6.0920, 4.9894, 1.2210, 4.3186, 2.3344),
      row(0.71, 0.7043, 0.5922, 6.1372, 5.0223, 1.2220, 4.3656, 2.3273),
      row(0.75, 0.7062, 0.3623, 6.3196, 5.1599, 1.2247, 4.5538, 2.3072),
      row(0.76, 0.7063, 0.3059, 6.3639, 5.1944, 1.2252, 4.5985, 2.3044),
      row(0.77, 0.7064, 0.2485, 6.4055, 5.2270, 1.2255, 4.6404, 2.3023),
      row(0.78, 0.7064, 0.1949, 6.4443, 5.2578, 1.2257, 4.6789, 2.3010),
      row(0.79, 0.7065, 0.1401, 6.4751, 5.2823, 1.2258, 4.7105, 2.2999),
      row(0.80, 0.7065, 0.0855, 6.4996, 5.3020, 1.2259, 4.7352, 2.2995),
      row(0.81, 0.7065, 0.0312, 6.5149, 5.3154, 1.2259, 4.7502, 2.2994),
      row(0.8157, 0.7066, n, 6.5168, 5.3160, 1.2259, 4.7521, 2.2995),
  };
  return rows;
}

namespace {

double max_delta(const ScenarioMetrics& a, const ScenarioMetrics& b) {
  return std::max({std::abs(a.C - b.C), std::abs(a.C_star - b.C_star), std::abs(a.ratio - b.ratio),
                   std::abs(a.W - b.W), std::abs(a.L - b.L)});
}

}  // namespace

std::vector<Table1Result> reproduce_table1() {
  const double half_unit = 5e-5;  // rounding of a 4-decimal printed value
  std::vector<Table1Result> out;
  for (const Table1Row& row : table1_reference()) {
    Table1Result r;
    r.reference = row;
    r.y = row.y;
    r.v = row.v.value_or(row.y);
    r.z = row.z.value_or(0);

    auto L_of = [](double y, double v, double z) { return profile_metrics(y, v, z).L; };
    r.l_error = std::abs(L_of(r.y, r.v, r.z) - row.metrics.L);
    r.l_tolerance = half_unit;
    if (row.v) {
      r.l_tolerance += half_unit * std::abs(derivative([&](double v) { return L_of(r.y, v, r.z); }, r.v));
      // Rows that fix v but not z are the optimum row, whose y is also rounded.
      if (!row.z)
        r.l_tolerance += half_unit * std::abs(derivative([&](double y) { return L_of(y, r.v, r.z); }, r.y));
    }
    if (row.z)
      r.l_tolerance += half_unit * std::abs(derivative([&](double z) { return L_of(r.y, r.v, z); }, r.z));

    if (r.l_error > r.l_tolerance) {
      r.rederived = true;
      if (!row.v) {
        r.z = grid_golden_max([&](double z) { return profile_metrics(r.y, std::nullopt, z).ratio; },
                              0, 3, 300, 1e-10);
      } else if (row.z) {
        double y = r.y;
        auto f = [&](double v, double z) {
          if (!(0 < v && v <= y && z >= 0)) return -std::numeric_limits<double>::infinity();
          return profile_metrics(y, v, z).ratio;
        };
        auto best = compass_max(f, {r.v, r.z}, 1e-2, 1e-8);
        r.v = best[0];
        r.z = best[1];
      } else {
        auto f = [](double y, double v) {
          if (!(0 < v && v <= y && y < 1)) return -std::numeric_limits<double>::infinity();
          return profile_metrics(y, v).ratio;
        };
        auto best = compass_max(f, {r.y, r.v}, 1e-2, 1e-8);
        r.y = best[0];
        r.v = best[1];
      }
    }
    r.computed = profile_metrics(r.y, r.v, r.z);
    r.max_delta = max_delta(r.computed, row.metrics);
    out.push_back(r);
  }
  return out;
}

std::string table1_csv(const std::vector<Table1Result>& rows) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6);
  os << "y,v,z,C,C_star,ratio,W,L,ref_C,ref_C_star,ref_ratio,ref_W,ref_L,"
        "d_C,d_C_star,d_ratio,d_W,d_L,rederived\n";
  for (const Table1Result& r : rows) {
    const ScenarioMetrics& c = r.computed;
    const ScenarioMetrics& p = r.reference.metrics;
    os << r.y << ',' << r.v << ',' << r.z << ',' << c.C << ',' << c.C_star << ',' << c.ratio << ','
       << c.W << ',' << c.L << ',' << p.C << ',' << p.C_star << ',' << p.ratio << ',' << p.W << ','
       << p.L << ',' << c.C - p.C << ',' << c.C_star - p.C_star << ',' << c.ratio - p.ratio << ','
       << c.W - p.W << ',' << c.L - p.L << ',' << (r.rederived ? 1 : 0) << '\n';
  }
  return os.str();
}

}  // namespace wsrpt
