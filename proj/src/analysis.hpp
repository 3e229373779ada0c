#ifndef WSRPT_ANALYSIS_HPP_
#define WSRPT_ANALYSIS_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace wsrpt {

struct ScenarioMetrics {
  double C = 0;
  double C_star = 0;
  double ratio = 0;
  double W = 0;
  double L = 0;
};

struct FParams {
  double k = 0;
  double c = 1;  // c > 0 and k + c > 0
};

/// f(x) = -(1-x) ln(1-x) / (k x + c) on [0, 1).
double f_curve(double x, const FParams& params);
double f_argmax(const FParams& params);

/// 1 - ln(1-x)(1-x) / denominator.
double group_ratio(double x, double denominator);

/// Closed-form ratio of the basic scenario with floor on [0, v) and wall on
/// [v, y), plus the closed forms for W and L.
ScenarioMetrics basic_ratio_closed(double y, double v);

/// Wall mass per unit of release time when a block of length z sits at y.
double wall_density(double y, double z);

/// Continuous profile evaluated by adaptive quadrature. v defaults to y
/// (floor only), z to 0 (no block).
ScenarioMetrics profile_metrics(double y, std::optional<double> v = std::nullopt,
                                std::optional<double> z = std::nullopt);

/// Combined ratio of an outer floor profile on [0, r_s) and an inner segment
/// of scale p_s with the given metrics.
double nested_ratio(double r_s, double p_s, const ScenarioMetrics& inner);
/// Limit of nested_ratio as p_s -> 0.
double nested_ratio_limit(double r_s);

struct NestedOptimum {
  double p_s = 0;
  double ratio = 0;
};
NestedOptimum optimize_nested_ps(double r_s, const ScenarioMetrics& inner);

struct BasicOptimum {
  double y = 0;
  double v = 0;
  double ratio = 0;
  ScenarioMetrics metrics;
};
/// Maximizes basic_ratio_closed over 0 < v <= y < 1: 200x200 grid, then a
/// compass search down to a 1e-6 step.
BasicOptimum optimize_basic();

// ---------------------------------------------------------------------------
// Lower bound game with J1 = (0, p1, p1), J2 = (0, p2, p2).

double lb_l1(double p1, double p2);
double lb_l2(double p1, double p2);
double lb_c1(double p1, double p2);

/// Online cost / optimal cost when, at time `release`, J1 and J2 have
/// remaining work r1, r2 (0 = finished, already charged in `prefix`) and a
/// continuous block of length l and weight/processing rho arrives. Online
/// continues with the best response (Smith-ratio order, no further releases).
double best_response_ratio(double p1, double p2, double release, double r1, double r2,
                           double prefix, double rho, double l);

/// Maximizes best_response_ratio over l in (0, 4 p2].
struct BlockChoice {
  double l = 0;
  double ratio = 0;
};
BlockChoice best_block(double p1, double p2, double release, double r1, double r2, double prefix,
                       double rho);

/// Realized ratio against the two pure strategies.
double lb_curve_j1_first(double p1, double p2);
double lb_curve_j2_first(double p1, double p2);

struct LbCurvePoint {
  double p2 = 0;
  double j1_first = 0;
  double j2_first = 0;
};
std::vector<LbCurvePoint> lb_curves(double p2_min, double p2_max, int points, double p1 = 1);

struct LbOptimum {
  double p2 = 0;
  double ratio = 0;
};
/// Crossing of the two curves by bisection to 1e-6.
LbOptimum lb_intersection(double p1 = 1, double lo = 1.5, double hi = 4);
/// Maximizes the smaller curve over p2 in (1, 10].
LbOptimum optimize_lb(double p1 = 1);

/// Lower bounds on the ratio when the online policy equalizes before
/// (p1+p2)/2, for the two sub-cases of the middle branch.
double lb_middle_bound_first(double p1, double p2);
double lb_middle_bound_second(double p1, double p2);

/// Right-hand side of the two-segment condition for outer release r_s, inner
/// weight/length ratio w_over_l and weight w_after submitted after the inner
/// segment.
double nested_condition_rhs(double r_s, double w_over_l, double w_after = 0);
/// Maximum of nested_condition_rhs over r_s in (0, 1) on a 1e-4 grid.
double nested_condition_max(double w_over_l);

// ---------------------------------------------------------------------------
// Reference ratio table

struct Table1Row {
  double y = 0;
  std::optional<double> v;
  std::optional<double> z;
  ScenarioMetrics metrics;
};

const std::vector<Table1Row>& table1_reference();

struct Table1Result {
  Table1Row reference;
  double y = 0;  // parameters actually evaluated
  double v = 0;
  double z = 0;
  bool rederived = false;  // printed parameters failed the L consistency test
  double l_error = 0;      // |L(printed) - printed L|
  double l_tolerance = 0;  // rounding tolerance for that error
  ScenarioMetrics computed;
  double max_delta = 0;
};

std::vector<Table1Result> reproduce_table1();
std::string table1_csv(const std::vector<Table1Result>& rows);

// ---------------------------------------------------------------------------
// Small deterministic optimizers shared by the modules above.

/// Golden-section maximization of a unimodal function on [lo, hi].
double golden_max(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-10);
/// Grid scan with `points` samples followed by golden refinement around the
/// best sample.
double grid_golden_max(const std::function<double(double)>& f, double lo, double hi, int points,
                       double tol = 1e-10);

}  // namespace wsrpt

#endif  // WSRPT_ANALYSIS_HPP_
