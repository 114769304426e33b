#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "elicit/dataset.hpp"

namespace elicit {

struct Confusion {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  bool operator==(const Confusion&) const = default;
};

Confusion confusion(std::span<const Label> y_true, std::span<const Label> y_pred);

double accuracy(const Confusion& c);
// nullopt when the denominator is zero; never coerced to 0.
std::optional<double> precision(const Confusion& c);
std::optional<double> recall(const Confusion& c);

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  // Score at or above which rows are called positive; +inf for (0,0).
  double threshold = 0.0;
};

// One point per distinct score (descending) plus the (0,0) anchor. Tied
// scores move the curve diagonally in a single step.
std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const Label> y_true);

// Trapezoidal area under a curve sorted by fpr.
double auc(std::span<const RocPoint> points);

// Normalized Mann-Whitney U with ties counted as 1/2.
double mann_whitney_auc(std::span<const double> scores, std::span<const Label> y_true);

struct RocHull {
  std::vector<RocPoint> points;
  double auch = 0.0;
};

// Upper convex hull of the points together with (0,0) and (1,1); collinear
// interior points are dropped.
RocHull roc_convex_hull(std::span<const RocPoint> points);

struct RocAnalysis {
  std::vector<RocPoint> points;
  std::vector<RocPoint> hull;
  double auc = 0.0;
  double auch = 0.0;
};

RocAnalysis analyze_roc(std::span<const double> scores, std::span<const Label> y_true);

// Upper envelope height of a piecewise-linear hull at fpr x.
double hull_height(std::span<const RocPoint> hull, double x);

enum class Dominance { A, B, Neither };

const char* to_string(Dominance d);

// A when hull_a is at least as high as hull_b at every fpr and strictly higher
// somewhere; B symmetrically; otherwise Neither.
Dominance dominates(std::span<const RocPoint> hull_a, std::span<const RocPoint> hull_b);

// Regularized incomplete beta I_x(a, b).
double incomplete_beta(double a, double b, double x);

// P(T <= t) for Student's t with `df` degrees of freedom.
double student_t_cdf(double t, double df);

struct TTestResult {
  double statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

// Two-tailed paired t-test on a - b.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

// Relative change (after - before) / before, as a percentage.
std::optional<double> relative_improvement(double before, double after);

// `fpr,tpr,threshold,on_hull` with a header row.
std::string roc_to_csv(const RocAnalysis& roc);

}  // namespace elicit
