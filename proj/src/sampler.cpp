#include "elicit/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "elicit/error.hpp"
#include "elicit/kernels.hpp"
#include "elicit/random.hpp"

namespace elicit {

namespace {

Label minority_label_of(const Dataset& d) { return summarize(d).majority_label == 1 ? 0 : 1; }

std::vector<std::size_t> rows_with_label(const Dataset& d, Label c) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < d.rows(); ++i)
    if (d.label(i) == c) out.push_back(i);
  return out;
}

// Neighbors of `self` among `pool`, given codes of the pool rows packed
// row-major in `pool_codes`.
std::vector<std::size_t> nearest_in_pool(const Dataset& d, std::size_t self,
                                         std::span<const std::size_t> pool,
                                         std::span<const Code> pool_codes, std::size_t k) {
  std::vector<double> dist(pool.size());
  kernels::squared_distances(d.row(self), pool_codes, dist);
  std::vector<std::size_t> order;
  order.reserve(pool.size());
  for (std::size_t q = 0; q < pool.size(); ++q)
    if (pool[q] != self) order.push_back(q);
  const std::size_t take = std::min(k, order.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(take), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (dist[a] != dist[b]) return dist[a] < dist[b];
                      return pool[a] < pool[b];
                    });
  std::vector<std::size_t> out;
  out.reserve(take);
  for (std::size_t q = 0; q < take; ++q) out.push_back(pool[order[q]]);
  return out;
}

std::vector<Code> pack_rows(const Dataset& d, std::span<const std::size_t> pool) {
  std::vector<Code> codes;
  codes.reserve(pool.size() * d.cols());
  for (std::size_t i : pool) {
    auto r = d.row(i);
    codes.insert(codes.end(), r.begin(), r.end());
  }
  return codes;
}

}  // namespace

std::vector<std::size_t> minority_neighbors(const Dataset& d, std::size_t i, std::size_t k) {
  if (i >= d.rows()) throw ValidationError("row index out of range");
  const Label minority = minority_label_of(d);
  if (d.label(i) != minority) throw ValidationError("query row is not in the minority class");
  const auto pool = rows_with_label(d, minority);
  if (pool.size() < 2) throw ValidationError("insufficient minority samples: need at least 2");
  const auto codes = pack_rows(d, pool);
  return nearest_in_pool(d, i, pool, codes, k);
}

SyntheticSample synthesize(std::span<const Code> x, std::span<const Code> x_r, double k_draw,
                           const std::vector<FeatureSchema>& schema) {
  if (x.size() != x_r.size() || x.size() != schema.size())
    throw ValidationError("synthesize: vector length mismatch");
  if (!(k_draw >= 0.0 && k_draw <= 1.0))
    throw ValidationError("synthesize: interpolation factor must lie in [0, 1]");
  SyntheticSample s;
  s.k_draw = k_draw;
  s.values.resize(x.size());
  s.rounded.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double v = x[j] + k_draw * static_cast<double>(x_r[j] - x[j]);
    s.values[j] = v;
    const double nearest = std::ceil(v - 0.5);
    const double top = static_cast<double>(schema[j].levels.size() - 1);
    s.rounded[j] = static_cast<Code>(std::clamp(nearest, 0.0, top));
  }
  return s;
}

SmoteResult smote_oversample_detailed(const Dataset& d, const SmoteConfig& cfg) {
  if (cfg.k_neighbors < 1) throw ValidationError("SMOTE: k_neighbors must be at least 1");
  if (!(cfg.target_ratio > 0.0 && cfg.target_ratio <= 1.0))
    throw ValidationError("SMOTE: target_ratio must lie in (0, 1]");

  const auto summary = summarize(d);
  const Label minority = summary.majority_label == 1 ? 0 : 1;
  const auto goal = static_cast<std::size_t>(
      std::lround(cfg.target_ratio * static_cast<double>(summary.n_majority)));
  if (goal <= summary.n_minority) return {d, {}};
  const std::size_t needed = goal - summary.n_minority;

  const auto pool = rows_with_label(d, minority);
  if (pool.size() < 2) throw ValidationError("insufficient minority samples: need at least 2");
  const auto pool_codes = pack_rows(d, pool);

  std::vector<std::vector<std::size_t>> neighbors(pool.size());
  for (std::size_t q = 0; q < pool.size(); ++q)
    neighbors[q] = nearest_in_pool(d, pool[q], pool, pool_codes, cfg.k_neighbors);

  Rng rng(cfg.seed);
  std::vector<SyntheticSample> samples;
  samples.reserve(needed);
  std::vector<Code> codes(d.codes().begin(), d.codes().end());
  std::vector<Label> labels(d.labels().begin(), d.labels().end());
  std::vector<std::uint8_t> provenance(d.provenance().begin(), d.provenance().end());
  codes.reserve(codes.size() + needed * d.cols());

  for (std::size_t s = 0; s < needed; ++s) {
    const std::size_t q = s % pool.size();
    const auto& candidates = neighbors[q];
    const std::size_t neighbor = candidates[rng.uniform_index(candidates.size())];
    const double k_draw = rng.uniform_closed();
    auto sample = synthesize(d.row(pool[q]), d.row(neighbor), k_draw, d.schema());
    sample.parent_index = pool[q];
    sample.neighbor_index = neighbor;
    codes.insert(codes.end(), sample.rounded.begin(), sample.rounded.end());
    labels.push_back(minority);
    provenance.push_back(1);
    samples.push_back(std::move(sample));
  }

  Dataset balanced(d.schema(), d.target_name(), d.target_labels(), std::move(codes),
                   std::move(labels), std::move(provenance), d.target_position());
  return {std::move(balanced), std::move(samples)};
}

Dataset smote_oversample(const Dataset& d, const SmoteConfig& cfg) {
  return smote_oversample_detailed(d, cfg).balanced;
}

}  // namespace elicit
