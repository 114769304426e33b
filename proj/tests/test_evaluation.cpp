#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "elicit/error.hpp"
#include "elicit/evaluation.hpp"
#include "oracles.hpp"

using namespace elicit;

namespace {

std::vector<RocPoint> pts(std::initializer_list<std::pair<double, double>> xy) {
  std::vector<RocPoint> out;
  for (auto [x, y] : xy) out.push_back({x, y, 0.0});
  return out;
}

void expect_points(const std::vector<RocPoint>& got,
                   std::initializer_list<std::pair<double, double>> want) {
  ASSERT_EQ(got.size(), want.size());
  std::size_t k = 0;
  for (auto [x, y] : want) {
    EXPECT_NEAR(got[k].fpr, x, 1e-15) << "point " << k;
    EXPECT_NEAR(got[k].tpr, y, 1e-15) << "point " << k;
    ++k;
  }
}

}  // namespace

TEST(Confusion, Examples) {
  EXPECT_EQ(confusion(std::vector<Label>{1, 0}, std::vector<Label>{1, 0}), (Confusion{1, 0, 1, 0}));
  EXPECT_EQ(confusion(std::vector<Label>{1, 0}, std::vector<Label>{0, 1}), (Confusion{0, 1, 0, 1}));
  EXPECT_EQ(confusion(std::vector<Label>{1, 1, 0, 0}, std::vector<Label>{1, 0, 0, 1}),
            (Confusion{1, 1, 1, 1}));
  EXPECT_THROW(confusion(std::vector<Label>{1}, std::vector<Label>{1, 0}), ValidationError);
  EXPECT_THROW(confusion(std::vector<Label>{}, std::vector<Label>{}), ValidationError);
}

TEST(Metrics, Examples) {
  const Confusion perfect{1, 0, 1, 0};
  EXPECT_EQ(accuracy(perfect), 1.0);
  EXPECT_EQ(*precision(perfect), 1.0);
  EXPECT_EQ(*recall(perfect), 1.0);

  const Confusion c{3, 1, 4, 2};
  EXPECT_DOUBLE_EQ(accuracy(c), 0.7);
  EXPECT_DOUBLE_EQ(*precision(c), 0.75);
  EXPECT_DOUBLE_EQ(*recall(c), 0.6);

  EXPECT_FALSE(precision(Confusion{0, 0, 5, 1}));
  EXPECT_FALSE(recall(Confusion{0, 2, 5, 0}));
}

TEST(RocCurve, Examples) {
  const std::vector<Label> y2{1, 0};
  expect_points(roc_curve(std::vector<double>{0.9, 0.1}, y2), {{0, 0}, {0, 1}, {1, 1}});
  expect_points(roc_curve(std::vector<double>{0.3, 0.3, 0.3}, std::vector<Label>{1, 0, 1}),
                {{0, 0}, {1, 1}});
  const auto curve =
      roc_curve(std::vector<double>{0.8, 0.6, 0.4, 0.2}, std::vector<Label>{1, 0, 1, 0});
  expect_points(curve, {{0, 0}, {0, 0.5}, {0.5, 0.5}, {0.5, 1}, {1, 1}});
  EXPECT_DOUBLE_EQ(auc(curve), 0.75);
  EXPECT_TRUE(std::isinf(curve.front().threshold));
  EXPECT_EQ(curve[1].threshold, 0.8);
  EXPECT_THROW(roc_curve(std::vector<double>{0.1, 0.2}, std::vector<Label>{1, 1}), ValidationError);
}

TEST(Auc, Examples) {
  EXPECT_DOUBLE_EQ(analyze_roc(std::vector<double>{0.9, 0.8, 0.1}, std::vector<Label>{1, 1, 0}).auc,
                   1.0);
  EXPECT_DOUBLE_EQ(analyze_roc(std::vector<double>{0.5, 0.5, 0.5, 0.5},
                               std::vector<Label>{1, 0, 0, 1})
                       .auc,
                   0.5);
  const std::vector<double> s{0.8, 0.4, 0.6, 0.2};
  const std::vector<Label> y{1, 1, 0, 0};
  EXPECT_DOUBLE_EQ(auc(roc_curve(s, y)), 0.75);
  EXPECT_DOUBLE_EQ(mann_whitney_auc(s, y), 0.75);
}

TEST(Auc, TrapezoidEqualsRankStatisticAndPairOracle) {
  std::mt19937 gen(42);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + gen() % 80;
    const int buckets = 1 + static_cast<int>(gen() % 10);  // forces ties
    std::vector<double> s(n);
    std::vector<Label> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(gen() % static_cast<unsigned>(buckets)) / buckets;
      y[i] = static_cast<Label>(gen() % 2);
    }
    y[0] = 0;
    y[1] = 1;
    const double a = auc(roc_curve(s, y));
    EXPECT_NEAR(a, mann_whitney_auc(s, y), 1e-9);
    EXPECT_NEAR(a, oracle::pairwise_auc(s, y), 1e-9);
  }
}

TEST(RocCurve, InvariantUnderMonotoneTransform) {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> s(40), t(40);
    std::vector<Label> y(40);
    for (std::size_t i = 0; i < 40; ++i) {
      s[i] = std::round(u(gen) * 8) / 8;
      t[i] = std::exp(3.0 * s[i]) - 7.0;
      y[i] = static_cast<Label>(i % 3 == 0);
    }
    const auto a = roc_curve(s, y);
    const auto b = roc_curve(t, y);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
      EXPECT_EQ(a[k].fpr, b[k].fpr);
      EXPECT_EQ(a[k].tpr, b[k].tpr);
    }
  }
}

TEST(ConvexHull, Examples) {
  const auto concave = pts({{0, 0}, {0.1, 0.5}, {0.4, 0.9}, {1, 1}});
  expect_points(roc_convex_hull(concave).points, {{0, 0}, {0.1, 0.5}, {0.4, 0.9}, {1, 1}});

  const auto hull = roc_convex_hull(pts({{0, 0}, {0.2, 0.4}, {0.4, 0.3}, {1, 1}}));
  expect_points(hull.points, {{0, 0}, {0.2, 0.4}, {1, 1}});
  EXPECT_NEAR(hull.auch, 0.5 * 0.2 * 0.4 + 0.8 * (0.4 + 1.0) * 0.5, 1e-15);

  const auto perfect = analyze_roc(std::vector<double>{0.9, 0.1}, std::vector<Label>{1, 0});
  EXPECT_EQ(perfect.auch, 1.0);
  EXPECT_EQ(perfect.auc, 1.0);

  // Collinear points on the diagonal are dropped.
  expect_points(roc_convex_hull(pts({{0, 0}, {0.5, 0.5}, {1, 1}})).points, {{0, 0}, {1, 1}});
}

TEST(ConvexHull, DropsPointsCollinearUpToRounding) {
  // Computed as count ratios, these three are collinear in exact arithmetic.
  const auto hull = roc_convex_hull(
      pts({{0, 0}, {2.0 / 6.0, 3.0 / 7.0}, {5.0 / 6.0, 6.0 / 7.0}, {6.0 / 6.0, 7.0 / 7.0}}));
  expect_points(hull.points, {{0, 0}, {2.0 / 6.0, 3.0 / 7.0}, {1, 1}});
}

TEST(ConvexHull, PropertiesOnRandomCurves) {
  std::mt19937 gen(77);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + gen() % 60;
    std::vector<double> s(n);
    std::vector<Label> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(gen() % 20);
      y[i] = static_cast<Label>(gen() % 2);
    }
    y[0] = 0;
    y[1] = 1;
    const auto r = analyze_roc(s, y);
    EXPECT_GE(r.auch, r.auc - 1e-12);
    for (std::size_t k = 2; k < r.hull.size(); ++k) {
      const double s1 = (r.hull[k - 1].tpr - r.hull[k - 2].tpr) / (r.hull[k - 1].fpr - r.hull[k - 2].fpr);
      const double s2 = (r.hull[k].tpr - r.hull[k - 1].tpr) / (r.hull[k].fpr - r.hull[k - 1].fpr);
      EXPECT_GT(s1, s2);
    }
    for (const auto& p : r.points) EXPECT_LE(p.tpr, hull_height(r.hull, p.fpr) + 1e-12);
  }
}

TEST(Dominance, Examples) {
  const auto diag = pts({{0, 0}, {1, 1}});
  const auto perfect = pts({{0, 0}, {0, 1}, {1, 1}});
  EXPECT_EQ(dominates(diag, diag), Dominance::Neither);
  EXPECT_EQ(dominates(perfect, diag), Dominance::A);
  EXPECT_EQ(dominates(diag, perfect), Dominance::B);
  const auto early = pts({{0, 0}, {0.1, 0.6}, {1, 1}});
  const auto late = pts({{0, 0}, {0.5, 0.95}, {1, 1}});
  EXPECT_EQ(dominates(early, late), Dominance::Neither);
  EXPECT_EQ(dominates(late, early), Dominance::Neither);
}

TEST(TTest, ReferencePrecisionAndRecallRows) {
  const auto prec = paired_t_test(std::vector<double>{0.89, 0.88, 0.81, 0.78},
                                  std::vector<double>{0.936, 0.899, 0.831, 0.818});
  EXPECT_NEAR(prec.p_value, 0.018, 0.001);
  EXPECT_EQ(prec.df, 3.0);
  EXPECT_NEAR(prec.p_value, oracle::t_two_tailed_p(prec.statistic, prec.df), 1e-6);

  const auto rec = paired_t_test(std::vector<double>{1, 0.96, 0.9, 0.88},
                                 std::vector<double>{1, 1, 0.922, 0.9});
  EXPECT_NEAR(rec.p_value, 0.087, 0.002);
  EXPECT_NEAR(rec.p_value, oracle::t_two_tailed_p(rec.statistic, rec.df), 1e-6);
}

TEST(TTest, DegenerateAndSymmetricCases) {
  const std::vector<double> a{0.1, 0.5, 0.7};
  EXPECT_EQ(paired_t_test(a, a).p_value, 1.0);
  const std::vector<double> b{1.0, 2.0, 3.0};
  const std::vector<double> shifted{1.5, 2.5, 3.5};
  EXPECT_EQ(paired_t_test(b, shifted).p_value, 0.0);
  EXPECT_THROW(paired_t_test(std::vector<double>{1}, std::vector<double>{2}), ValidationError);
  EXPECT_THROW(paired_t_test(a, std::vector<double>{1, 2}), ValidationError);

  std::mt19937 gen(9);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + gen() % 20;
    std::vector<double> x(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = z(gen);
      w[i] = x[i] + 0.3 * z(gen) + 0.2;
    }
    const auto ab = paired_t_test(x, w);
    const auto ba = paired_t_test(w, x);
    EXPECT_NEAR(ab.statistic, -ba.statistic, 1e-12);
    EXPECT_NEAR(ab.p_value, ba.p_value, 1e-12);
    EXPECT_GE(ab.p_value, 0.0);
    EXPECT_LE(ab.p_value, 1.0);
    EXPECT_NEAR(ab.p_value, oracle::t_two_tailed_p(ab.statistic, ab.df), 1e-6);
  }
}

TEST(IncompleteBeta, KnownValues) {
  EXPECT_NEAR(incomplete_beta(1.0, 1.0, 0.3), 0.3, 1e-14);
  EXPECT_NEAR(incomplete_beta(2.0, 1.0, 0.5), 0.25, 1e-14);
  EXPECT_EQ(incomplete_beta(2.0, 3.0, 0.0), 0.0);
  EXPECT_EQ(incomplete_beta(2.0, 3.0, 1.0), 1.0);
  EXPECT_NEAR(student_t_cdf(0.0, 5.0), 0.5, 1e-15);
  // df = 1 is the Cauchy distribution.
  EXPECT_NEAR(student_t_cdf(1.0, 1.0), 0.75, 1e-12);
}

TEST(RelativeImprovement, Percentages) {
  EXPECT_NEAR(*relative_improvement(0.72, 0.97), 34.722222222222, 1e-9);
  EXPECT_EQ(*relative_improvement(0.5, 0.5), 0.0);
  EXPECT_FALSE(relative_improvement(0.0, 0.5));
}

TEST(RocCsv, MarksHullPoints) {
  const auto r =
      analyze_roc(std::vector<double>{0.8, 0.6, 0.4, 0.2}, std::vector<Label>{1, 0, 1, 0});
  const auto text = roc_to_csv(r);
  EXPECT_EQ(text.substr(0, text.find('\n')), "fpr,tpr,threshold,on_hull");
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
            r.points.size() + 1);
}
