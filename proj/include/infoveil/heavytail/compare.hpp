// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "infoveil/heavytail/fit.hpp"

namespace infoveil::heavytail {

struct Comparison {
  Model model_a = Model::power_law;
  Model model_b = Model::power_law;
  double R = 0.0;                 // Σ ln p_a − ln p_b over the tail
  double normalized_ratio = 0.0;  // R / (σ √n)
  double p = 1.0;
  bool identical = false;
  std::size_t n = 0;
};

/// Normalized log-likelihood-ratio test. σ² uses the 1/n variance.
inline Comparison compare(const Sample& s, const FitResult& a, const FitResult& b) {
  if (a.xmin != b.xmin) throw Error(ErrorCode::validation, "compared fits must share xmin");
  Comparison c;
  c.model_a = a.model;
  c.model_b = b.model;
  Density da(a), db(b);
  std::vector<std::pair<double, double>> diffs;  // (difference, multiplicity)
  double n = 0.0, sum = 0.0;
  for (auto [x, count] : s.histogram(a.xmin)) {
    double d = da.log_pmf(double(x)) - db.log_pmf(double(x));
    diffs.emplace_back(d, double(count));
    n += double(count);
    sum += d * double(count);
  }
  c.n = std::size_t(n);
  if (n == 0.0) throw Error(ErrorCode::too_few_tail_points, "empty tail");
  double mean = sum / n, var = 0.0;
  for (auto [d, w] : diffs) var += w * (d - mean) * (d - mean);
  var /= n;
  if (!(var > 0.0)) {
    c.identical = true;
    return c;
  }
  c.R = sum;
  double sigma = std::sqrt(var);
  c.normalized_ratio = sum / (sigma * std::sqrt(n));
  c.p = std::erfc(std::abs(sum) / (sigma * std::sqrt(2.0 * n)));
  return c;
}

struct RankEntry {
  Model model = Model::power_law;
  double log_likelihood = 0.0;
  int rank = 1;
  bool tied_with_previous = false;  // p > 0.1 against the model ranked just above
};

struct ModelOrdering {
  std::vector<FitResult> fits;          // power law first, then the alternatives
  std::vector<Comparison> comparisons;  // all six unordered pairs
  std::vector<RankEntry> ranking;
};

inline constexpr double indistinguishable_p = 0.1;

inline const Comparison& find_comparison(const std::vector<Comparison>& cs, Model a, Model b, Comparison& scratch) {
  for (const auto& c : cs) {
    if (c.model_a == a && c.model_b == b) return c;
    if (c.model_a == b && c.model_b == a) {
      scratch = c;
      std::swap(scratch.model_a, scratch.model_b);
      scratch.R = -scratch.R;
      scratch.normalized_ratio = -scratch.normalized_ratio;
      return scratch;
    }
  }
  throw Error(ErrorCode::validation, "missing comparison");
}

inline ModelOrdering model_ordering(const Sample& s) {
  ModelOrdering out;
  out.fits.push_back(fit_power_law(s));
  for (auto& f : fit_alternatives(s, out.fits.front().xmin)) out.fits.push_back(std::move(f));
  for (std::size_t i = 0; i < out.fits.size(); ++i)
    for (std::size_t j = i + 1; j < out.fits.size(); ++j) out.comparisons.push_back(compare(s, out.fits[i], out.fits[j]));

  std::vector<const FitResult*> order;
  for (const auto& f : out.fits) order.push_back(&f);
  std::stable_sort(order.begin(), order.end(),
                   [](const FitResult* a, const FitResult* b) { return a->log_likelihood > b->log_likelihood; });
  for (std::size_t i = 0; i < order.size(); ++i) {
    RankEntry e;
    e.model = order[i]->model;
    e.log_likelihood = order[i]->log_likelihood;
    e.rank = int(i) + 1;
    if (i > 0) {
      Comparison scratch;
      const auto& c = find_comparison(out.comparisons, order[i - 1]->model, e.model, scratch);
      if (c.p > indistinguishable_p) {
        e.tied_with_previous = true;
        e.rank = out.ranking.back().rank;
      }
    }
    out.ranking.push_back(e);
  }
  return out;
}

}  // namespace infoveil::heavytail
