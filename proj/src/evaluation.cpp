#include "elicit/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "elicit/error.hpp"

namespace elicit {

Confusion confusion(std::span<const Label> y_true, std::span<const Label> y_pred) {
  if (y_true.size() != y_pred.size()) throw ValidationError("confusion: length mismatch");
  if (y_true.empty()) throw ValidationError("confusion: empty input");
  Confusion c;
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    if (y_true[i] == 1)
      ++(y_pred[i] == 1 ? c.tp : c.fn);
    else
      ++(y_pred[i] == 1 ? c.fp : c.tn);
  }
  return c;
}

double accuracy(const Confusion& c) {
  if (c.total() == 0) throw ValidationError("accuracy: empty confusion matrix");
  return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

std::optional<double> precision(const Confusion& c) {
  if (c.tp + c.fp == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

std::optional<double> recall(const Confusion& c) {
  if (c.tp + c.fn == 0) return std::nullopt;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

namespace {

std::pair<std::size_t, std::size_t> class_totals(std::span<const double> scores,
                                                 std::span<const Label> y) {
  if (scores.size() != y.size()) throw ValidationError("ROC: scores and labels differ in length");
  const auto pos = static_cast<std::size_t>(std::count(y.begin(), y.end(), Label{1}));
  const auto neg = y.size() - pos;
  if (pos == 0 || neg == 0) throw ValidationError("ROC: single-class labels");
  return {pos, neg};
}

}  // namespace

std::vector<RocPoint> roc_curve(std::span<const double> scores, std::span<const Label> y_true) {
  const auto [pos, neg] = class_totals(scores, y_true);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  std::vector<RocPoint> points{{0.0, 0.0, std::numeric_limits<double>::infinity()}};
  std::size_t tp = 0, fp = 0;
  for (std::size_t k = 0; k < order.size();) {
    const double s = scores[order[k]];
    while (k < order.size() && scores[order[k]] == s) {
      ++(y_true[order[k]] == 1 ? tp : fp);
      ++k;
    }
    points.push_back({static_cast<double>(fp) / static_cast<double>(neg),
                      static_cast<double>(tp) / static_cast<double>(pos), s});
  }
  return points;
}

double auc(std::span<const RocPoint> points) {
  double area = 0.0;
  for (std::size_t k = 1; k < points.size(); ++k)
    area += (points[k].fpr - points[k - 1].fpr) * (points[k].tpr + points[k - 1].tpr) * 0.5;
  return area;
}

double mann_whitney_auc(std::span<const double> scores, std::span<const Label> y_true) {
  const auto [pos, neg] = class_totals(scores, y_true);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double rank_sum = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t end = k;
    while (end < order.size() && scores[order[end]] == scores[order[k]]) ++end;
    const double mid_rank = 0.5 * static_cast<double>(k + 1 + end);
    for (std::size_t q = k; q < end; ++q)
      if (y_true[order[q]] == 1) rank_sum += mid_rank;
    k = end;
  }
  const double p = static_cast<double>(pos);
  return (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(neg));
}

RocHull roc_convex_hull(std::span<const RocPoint> points) {
  std::vector<RocPoint> all(points.begin(), points.end());
  all.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  all.push_back({1.0, 1.0, -std::numeric_limits<double>::infinity()});
  std::stable_sort(all.begin(), all.end(), [](const RocPoint& a, const RocPoint& b) {
    if (a.fpr != b.fpr) return a.fpr < b.fpr;
    return a.tpr < b.tpr;
  });

  auto cross = [](const RocPoint& o, const RocPoint& a, const RocPoint& b) {
    return (a.fpr - o.fpr) * (b.tpr - o.tpr) - (a.tpr - o.tpr) * (b.fpr - o.fpr);
  };
  // Rates are ratios of counts, so collinear points can show a cross
  // product of a few ulps either side of zero.
  constexpr double kCollinear = 1e-12;
  std::vector<RocPoint> hull;
  for (const auto& p : all) {
    if (!hull.empty() && hull.back().fpr == p.fpr && hull.back().tpr == p.tpr) continue;
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), p) >= -kCollinear)
      hull.pop_back();
    hull.push_back(p);
  }
  return {hull, auc(hull)};
}

RocAnalysis analyze_roc(std::span<const double> scores, std::span<const Label> y_true) {
  RocAnalysis r;
  r.points = roc_curve(scores, y_true);
  r.auc = auc(r.points);
  auto hull = roc_convex_hull(r.points);
  r.hull = std::move(hull.points);
  r.auch = hull.auch;
  return r;
}

double hull_height(std::span<const RocPoint> hull, double x) {
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < hull.size(); ++k) {
    const auto& a = hull[k - 1];
    const auto& b = hull[k];
    if (x < a.fpr || x > b.fpr) continue;
    if (a.fpr == b.fpr) {
      best = std::max({best, a.tpr, b.tpr});
    } else {
      best = std::max(best, a.tpr + (b.tpr - a.tpr) * (x - a.fpr) / (b.fpr - a.fpr));
    }
  }
  if (hull.size() == 1 && hull[0].fpr == x) best = hull[0].tpr;
  return best;
}

const char* to_string(Dominance d) {
  switch (d) {
    case Dominance::A:
      return "A";
    case Dominance::B:
      return "B";
    default:
      return "neither";
  }
}

Dominance dominates(std::span<const RocPoint> hull_a, std::span<const RocPoint> hull_b) {
  constexpr double tol = 1e-12;
  std::vector<double> xs;
  for (const auto& p : hull_a) xs.push_back(p.fpr);
  for (const auto& p : hull_b) xs.push_back(p.fpr);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  bool a_above = false, b_above = false;
  for (double x : xs) {
    const double diff = hull_height(hull_a, x) - hull_height(hull_b, x);
    if (diff > tol) a_above = true;
    if (diff < -tol) b_above = true;
  }
  if (a_above && !b_above) return Dominance::A;
  if (b_above && !a_above) return Dominance::B;
  return Dominance::Neither;
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 500;
  constexpr double kEps = 1e-15;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  throw Error("incomplete beta: continued fraction did not converge");
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw ValidationError("incomplete beta: a and b must be positive");
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("incomplete beta: x must lie in [0, 1]");
  if (x == 0.0 || x == 1.0) return x;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("student t: degrees of freedom must be positive");
  if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
  const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
  return t > 0.0 ? 1.0 - tail : tail;
}

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ValidationError("paired t-test: length mismatch");
  if (a.size() < 2) throw ValidationError("paired t-test: need at least two pairs");
  const auto n = static_cast<double>(a.size());
  std::vector<double> diff(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
  const double mean = std::accumulate(diff.begin(), diff.end(), 0.0) / n;
  double ss = 0.0;
  for (double d : diff) ss += (d - mean) * (d - mean);
  const double sd = std::sqrt(ss / (n - 1.0));

  TTestResult r;
  r.df = n - 1.0;
  if (sd == 0.0) {
    r.statistic = mean == 0.0 ? 0.0
                              : std::copysign(std::numeric_limits<double>::infinity(), mean);
    r.p_value = mean == 0.0 ? 1.0 : 0.0;
    return r;
  }
  r.statistic = mean / (sd / std::sqrt(n));
  r.p_value = std::clamp(
      incomplete_beta(0.5 * r.df, 0.5, r.df / (r.df + r.statistic * r.statistic)), 0.0, 1.0);
  return r;
}

std::optional<double> relative_improvement(double before, double after) {
  if (before == 0.0) return std::nullopt;
  return 100.0 * (after - before) / before;
}

namespace {

void append_number(std::string& out, double v) {
  if (std::isinf(v)) {
    out += v > 0 ? "inf" : "-inf";
    return;
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

std::string roc_to_csv(const RocAnalysis& roc) {
  std::string out = "fpr,tpr,threshold,on_hull\n";
  for (const auto& p : roc.points) {
    const bool on_hull = std::any_of(roc.hull.begin(), roc.hull.end(), [&](const RocPoint& h) {
      return h.fpr == p.fpr && h.tpr == p.tpr;
    });
    append_number(out, p.fpr);
    out += ',';
    append_number(out, p.tpr);
    out += ',';
    append_number(out, p.threshold);
    out += on_hull ? ",1\n" : ",0\n";
  }
  return out;
}

}  // namespace elicit
