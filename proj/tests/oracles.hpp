#pragma once

// Independent reference computations used only by the tests. None of these
// call into the code paths they check.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "elicit/dataset.hpp"

namespace elicit::oracle {

// P(positive outranks negative), ties counted 1/2, by enumerating all pairs.
inline double pairwise_auc(std::span<const double> scores, std::span<const Label> y) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1.0;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  return wins / pairs;
}

// Two-tailed p-value of Student's t by composite Simpson integration of the
// density over [0, |t|].
inline double t_two_tailed_p(double t, double df, int intervals = 200000) {
  const double norm =
      std::exp(std::lgamma(0.5 * (df + 1.0)) - std::lgamma(0.5 * df)) / std::sqrt(df * std::numbers::pi);
  auto pdf = [&](double x) { return norm * std::pow(1.0 + x * x / df, -0.5 * (df + 1.0)); };
  const double upper = std::fabs(t);
  const double h = upper / intervals;
  double sum = pdf(0.0) + pdf(upper);
  for (int k = 1; k < intervals; ++k) sum += (k % 2 ? 4.0 : 2.0) * pdf(k * h);
  const double central = sum * h / 3.0;
  return 1.0 - 2.0 * central;
}

struct BruteSplit {
  std::size_t feature = 0;
  double threshold = 0.0;
  double quality = 0.0;
};

inline double brute_gini(double n0, double n1) {
  const double n = n0 + n1;
  return 1.0 - (n0 / n) * (n0 / n) - (n1 / n) * (n1 / n);
}

// Tries every feature and every midpoint between distinct observed codes by
// direct partitioning; ties resolved to the first (feature, threshold) seen.
inline std::optional<BruteSplit> brute_force_split(const Dataset& d,
                                                   std::span<const std::size_t> rows) {
  std::optional<BruteSplit> best;
  for (std::size_t f = 0; f < d.cols(); ++f) {
    std::vector<Code> values;
    for (std::size_t i : rows) values.push_back(d.code(i, f));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t k = 0; k + 1 < values.size(); ++k) {
      const double threshold = 0.5 * (values[k] + values[k + 1]);
      double l0 = 0, l1 = 0, r0 = 0, r1 = 0;
      for (std::size_t i : rows) {
        const bool left = d.code(i, f) <= threshold;
        const bool positive = d.label(i) == 1;
        (left ? (positive ? l1 : l0) : (positive ? r1 : r0)) += 1.0;
      }
      const double n = l0 + l1 + r0 + r1;
      const double q =
          (l0 + l1) / n * brute_gini(l0, l1) + (r0 + r1) / n * brute_gini(r0, r1);
      if (!best || q < best->quality - 1e-12) best = BruteSplit{f, threshold, q};
    }
  }
  return best;
}

}  // namespace elicit::oracle
