// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "infoveil/error.hpp"
#include "infoveil/heavytail/special.hpp"

namespace infoveil::heavytail {

enum class Model { power_law, lognormal, exponential, truncated_power_law };

inline constexpr std::array<Model, 4> all_models{Model::power_law, Model::lognormal, Model::exponential,
                                                 Model::truncated_power_law};

inline std::string to_string(Model m) {
  switch (m) {
    case Model::power_law: return "power_law";
    case Model::lognormal: return "lognormal";
    case Model::exponential: return "exponential";
    case Model::truncated_power_law: return "truncated_power_law";
  }
  return "?";
}

inline Model parse_model(std::string_view s) {
  for (Model m : all_models)
    if (to_string(m) == s) return m;
  throw Error(ErrorCode::validation, "unknown model: " + std::string(s));
}

/// Convergence tolerance of every likelihood search, in log-likelihood units.
inline constexpr double loglik_tolerance = 1e-8;
inline constexpr int max_iterations = 2000;
inline constexpr std::size_t min_tail = 10;

/// A multiset of positive integers, kept sorted.
class Sample {
 public:
  Sample() = default;
  explicit Sample(std::vector<std::int64_t> values) : values_(std::move(values)) {
    for (auto v : values_)
      if (v < 1) throw Error(ErrorCode::validation, "sample values must be positive integers");
    std::sort(values_.begin(), values_.end());
  }

  const std::vector<std::int64_t>& values() const { return values_; }
  std::size_t n() const { return values_.size(); }

  /// Distinct values with their multiplicities, restricted to x ≥ xmin.
  std::vector<std::pair<std::int64_t, std::size_t>> histogram(std::int64_t xmin = 1) const {
    std::vector<std::pair<std::int64_t, std::size_t>> out;
    auto it = std::lower_bound(values_.begin(), values_.end(), xmin);
    for (; it != values_.end(); ++it) {
      if (out.empty() || out.back().first != *it)
        out.emplace_back(*it, 1);
      else
        ++out.back().second;
    }
    return out;
  }

 private:
  std::vector<std::int64_t> values_;
};

/// Parameters of a fitted model. Unused members stay NaN.
struct Params {
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double lambda = std::numeric_limits<double>::quiet_NaN();
  double mu = std::numeric_limits<double>::quiet_NaN();
  double sigma = std::numeric_limits<double>::quiet_NaN();
};

struct FitResult {
  Model model = Model::power_law;
  Params params;
  std::int64_t xmin = 1;
  std::size_t n_tail = 0;
  double ks_distance = 0.0;
  double log_likelihood = 0.0;  // over the tail x ≥ xmin
  bool converged = true;
  int iterations = 0;
};

/// Tail-conditioned discrete distribution on x ≥ xmin.
class Density {
 public:
  Density(Model model, const Params& p, std::int64_t xmin) : model_(model), p_(p), xmin_(double(xmin)) {
    switch (model_) {
      case Model::power_law: log_norm_ = std::log(hurwitz_zeta(p_.alpha, xmin_)); break;
      case Model::truncated_power_law: log_norm_ = std::log(truncated_zeta(p_.alpha, p_.lambda, xmin_)); break;
      case Model::lognormal: log_norm_ = log_normal_sf(z(xmin_ - 0.5)); break;
      case Model::exponential: log_norm_ = std::log1p(-std::exp(-p_.lambda)); break;
    }
  }
  explicit Density(const FitResult& f) : Density(f.model, f.params, f.xmin) {}

  double log_pmf(double x) const {
    switch (model_) {
      case Model::power_law: return -p_.alpha * std::log(x) - log_norm_;
      case Model::truncated_power_law: return -p_.alpha * std::log(x) - p_.lambda * x - log_norm_;
      case Model::lognormal: return log_normal_interval(z(x - 0.5), z(x + 0.5)) - log_norm_;
      case Model::exponential: return log_norm_ - p_.lambda * (x - xmin_);
    }
    return 0.0;
  }
  double pmf(double x) const { return std::exp(log_pmf(x)); }

  /// P(X ≥ x | X ≥ xmin) for integer x ≥ xmin.
  double sf(double x) const {
    if (x <= xmin_) return 1.0;
    switch (model_) {
      case Model::power_law: return hurwitz_zeta(p_.alpha, x) / std::exp(log_norm_);
      case Model::truncated_power_law:
        return std::exp(std::log(truncated_zeta(p_.alpha, p_.lambda, x)) - log_norm_);
      case Model::lognormal: return std::exp(log_normal_sf(z(x - 0.5)) - log_norm_);
      case Model::exponential: return std::exp(-p_.lambda * (x - xmin_));
    }
    return 0.0;
  }

 private:
  double z(double y) const { return (std::log(y) - p_.mu) / p_.sigma; }

  Model model_;
  Params p_;
  double xmin_;
  double log_norm_ = 0.0;
};

namespace detail {

struct Tail {
  std::int64_t xmin = 1;
  std::vector<double> x;
  std::vector<double> count;
  double n = 0.0;
  double sum_log = 0.0;
  double sum_x = 0.0;
};

inline Tail make_tail(const Sample& s, std::int64_t xmin) {
  Tail t;
  t.xmin = xmin;
  for (auto [v, c] : s.histogram(xmin)) {
    t.x.push_back(double(v));
    t.count.push_back(double(c));
    t.n += double(c);
    t.sum_log += double(c) * std::log(double(v));
    t.sum_x += double(c) * double(v);
  }
  return t;
}

inline double log_likelihood(const Density& d, const Tail& t) {
  double ll = 0.0;
  for (std::size_t i = 0; i < t.x.size(); ++i) ll += t.count[i] * d.log_pmf(t.x[i]);
  return ll;
}

/// Supremum over integers x ≥ xmin of |S(x) − F(x)|. Between data points the
/// empirical CDF is flat, so the extremes sit at each point and just before it.
inline double ks_distance(const Density& d, const Tail& t) {
  double cum = 0.0, worst = 0.0;
  for (std::size_t i = 0; i < t.x.size(); ++i) {
    double before = cum / t.n;
    double f_before = 1.0 - d.sf(t.x[i]);
    cum += t.count[i];
    double after = cum / t.n;
    double f_after = 1.0 - d.sf(t.x[i] + 1.0);
    worst = std::max({worst, std::abs(before - f_before), std::abs(after - f_after)});
  }
  return std::min(worst, 1.0);
}

inline int brent_bits() { return std::numeric_limits<double>::digits / 2; }

/// Minimizes f on [lo, hi], widening the upper edge while the minimum sticks to it.
template <class F>
std::pair<double, double> minimize_1d(F f, double lo, double hi, double hard_hi, int& iterations, bool& converged) {
  for (int widen = 0;; ++widen) {
    std::uintmax_t it = max_iterations;
    auto [x, fx] = boost::math::tools::brent_find_minima(f, lo, hi, brent_bits(), it);
    iterations += int(it);
    if (it >= std::uintmax_t(max_iterations)) converged = false;
    bool at_edge = hi - x < 1e-6 * (1.0 + std::abs(hi));
    if (!at_edge || hi >= hard_hi || widen >= 12) return {x, fx};
    hi = std::min(hard_hi, hi + 2.0 * (hi - lo));
  }
}

/// Nelder–Mead on a 2-D objective with restarts until a restart stops improving.
template <class F>
std::pair<std::array<double, 2>, double> nelder_mead(F f, std::array<double, 2> start, std::array<double, 2> step,
                                                     int& iterations, bool& converged) {
  using P = std::array<double, 2>;
  P best = start;
  double best_f = f(start);
  converged = false;
  for (int restart = 0; restart < 6; ++restart) {
    std::array<P, 3> s{best, P{best[0] + step[0], best[1]}, P{best[0], best[1] + step[1]}};
    std::array<double, 3> fs{best_f, f(s[1]), f(s[2])};
    bool settled = false;
    for (int it = 0; it < max_iterations; ++it) {
      ++iterations;
      std::array<int, 3> o{0, 1, 2};
      std::sort(o.begin(), o.end(), [&](int a, int b) { return fs[a] < fs[b]; });
      std::array<P, 3> ss{s[o[0]], s[o[1]], s[o[2]]};
      std::array<double, 3> ff{fs[o[0]], fs[o[1]], fs[o[2]]};
      s = ss;
      fs = ff;
      if (fs[2] - fs[0] < loglik_tolerance) {
        settled = true;
        break;
      }
      P c{(s[0][0] + s[1][0]) / 2, (s[0][1] + s[1][1]) / 2};
      auto along = [&](double t) { return P{c[0] + t * (s[2][0] - c[0]), c[1] + t * (s[2][1] - c[1])}; };
      P r = along(-1.0);
      double fr = f(r);
      if (fr < fs[0]) {
        P e = along(-2.0);
        double fe = f(e);
        if (fe < fr) s[2] = e, fs[2] = fe;
        else s[2] = r, fs[2] = fr;
      } else if (fr < fs[1]) {
        s[2] = r, fs[2] = fr;
      } else {
        P k = fr < fs[2] ? along(-0.5) : along(0.5);
        double fk = f(k);
        if (fk < std::min(fr, fs[2])) {
          s[2] = k, fs[2] = fk;
        } else {
          for (int j = 1; j < 3; ++j) {
            s[j] = P{(s[0][0] + s[j][0]) / 2, (s[0][1] + s[j][1]) / 2};
            fs[j] = f(s[j]);
          }
        }
      }
    }
    int lowest = int(std::min_element(fs.begin(), fs.end()) - fs.begin());
    double gain = best_f - fs[lowest];
    if (fs[lowest] <= best_f) best = s[lowest], best_f = fs[lowest];
    if (settled && gain < loglik_tolerance) {
      converged = true;
      break;
    }
    step = {std::max(std::abs(step[0]) * 0.5, 1e-3), std::max(std::abs(step[1]) * 0.5, 1e-3)};
  }
  return {best, best_f};
}

}  // namespace detail

struct PowerLawCandidate {
  std::int64_t xmin = 1;
  std::size_t n_tail = 0;
  double alpha_approx = 0.0;
  double alpha = 0.0;
  double ks_distance = 0.0;
};

namespace detail {

inline FitResult finish(Model model, const Params& p, const Tail& t, bool converged, int iterations) {
  FitResult r;
  r.model = model;
  r.params = p;
  r.xmin = t.xmin;
  r.n_tail = std::size_t(t.n);
  Density d(model, p, t.xmin);
  r.log_likelihood = log_likelihood(d, t);
  r.ks_distance = ks_distance(d, t);
  r.converged = converged;
  r.iterations = iterations;
  return r;
}

/// Exact discrete MLE of alpha on a fixed tail, bracketed around the
/// closed-form approximation.
inline double power_law_alpha(const Tail& t, double approx, int& iterations, bool& converged) {
  auto nll = [&](double a) { return t.n * std::log(hurwitz_zeta(a, double(t.xmin))) + a * t.sum_log; };
  double lo = std::max(1.0 + 1e-9, approx - 0.5);
  double hi = std::max(lo + 0.5, approx + 0.5);
  return minimize_1d(nll, lo, hi, 50.0, iterations, converged).first;
}

inline double power_law_approx(const Tail& t) {
  double denom = 0.0;
  double shift = double(t.xmin) - 0.5;
  for (std::size_t i = 0; i < t.x.size(); ++i) denom += t.count[i] * std::log(t.x[i] / shift);
  return 1.0 + t.n / denom;
}

}  // namespace detail

/// Every candidate xmin with its fitted alpha and KS distance.
inline std::vector<PowerLawCandidate> scan_power_law(const Sample& s) {
  std::vector<PowerLawCandidate> out;
  auto hist = s.histogram();
  std::size_t remaining = s.n();
  for (std::size_t i = 0; i + 1 < hist.size(); ++i) {
    if (remaining < min_tail) break;
    auto t = detail::make_tail(s, hist[i].first);
    PowerLawCandidate c;
    c.xmin = hist[i].first;
    c.n_tail = remaining;
    c.alpha_approx = detail::power_law_approx(t);
    int iterations = 0;
    bool converged = true;
    c.alpha = detail::power_law_alpha(t, c.alpha_approx, iterations, converged);
    Params p;
    p.alpha = c.alpha;
    c.ks_distance = detail::ks_distance(Density(Model::power_law, p, c.xmin), t);
    out.push_back(c);
    remaining -= hist[i].second;
  }
  return out;
}

/// Discrete power law with xmin chosen by minimum KS distance.
inline FitResult fit_power_law(const Sample& s) {
  if (s.n() < min_tail) throw Error(ErrorCode::too_few_tail_points, "sample has fewer than 10 values");
  if (s.values().front() == s.values().back())
    throw Error(ErrorCode::degenerate_sample, "all sample values are equal");
  auto candidates = scan_power_law(s);
  if (candidates.empty())
    throw Error(ErrorCode::too_few_tail_points, "no xmin leaves 10 tail points with two distinct values");
  auto best = std::min_element(candidates.begin(), candidates.end(),
                               [](const auto& a, const auto& b) { return a.ks_distance < b.ks_distance; });
  auto t = detail::make_tail(s, best->xmin);
  int iterations = 0;
  bool converged = true;
  Params p;
  p.alpha = detail::power_law_alpha(t, best->alpha_approx, iterations, converged);
  return detail::finish(Model::power_law, p, t, converged, iterations);
}

namespace detail {

inline Tail checked_tail(const Sample& s, std::int64_t xmin) {
  auto t = make_tail(s, xmin);
  if (t.n < double(min_tail)) throw Error(ErrorCode::too_few_tail_points, "fewer than 10 points above xmin");
  if (t.x.size() < 2) throw Error(ErrorCode::degenerate_sample, "tail holds a single distinct value");
  return t;
}

}  // namespace detail

inline FitResult fit_exponential(const Sample& s, std::int64_t xmin) {
  auto t = detail::checked_tail(s, xmin);
  double excess = t.sum_x / t.n - double(xmin);
  double seed = std::log1p(1.0 / excess);
  auto nll = [&](double l) { return -t.n * std::log1p(-std::exp(-l)) + l * excess * t.n; };
  int iterations = 0;
  bool converged = true;
  Params p;
  p.lambda = detail::minimize_1d(nll, seed * 0.5, seed * 2.0, 1e3, iterations, converged).first;
  return detail::finish(Model::exponential, p, t, converged, iterations);
}

inline FitResult fit_lognormal(const Sample& s, std::int64_t xmin) {
  auto t = detail::checked_tail(s, xmin);
  double m = t.sum_log / t.n, v = 0.0;
  for (std::size_t i = 0; i < t.x.size(); ++i) v += t.count[i] * std::pow(std::log(t.x[i]) - m, 2);
  double sd = std::max(std::sqrt(v / t.n), 0.1);
  auto nll = [&](const std::array<double, 2>& q) {
    Params p;
    p.mu = q[0];
    p.sigma = std::exp(q[1]);
    if (!(p.sigma > 1e-6) || !(p.sigma < 1e3) || std::abs(p.mu) > 1e3) return std::numeric_limits<double>::infinity();
    double ll = detail::log_likelihood(Density(Model::lognormal, p, xmin), t);
    return std::isfinite(ll) ? -ll : std::numeric_limits<double>::infinity();
  };
  int iterations = 0;
  bool converged = false;
  auto [q, f] = detail::nelder_mead(nll, {m, std::log(sd)}, {1.0, 0.5}, iterations, converged);
  Params p;
  p.mu = q[0];
  p.sigma = std::exp(q[1]);
  return detail::finish(Model::lognormal, p, t, converged, iterations);
}

/// p(x) ∝ x^(-alpha) e^(-lambda x), lambda ≥ 0. The profile likelihood in
/// lambda is concave (exponential family), so nested 1-D searches suffice.
inline FitResult fit_truncated_power_law(const Sample& s, std::int64_t xmin) {
  auto t = detail::checked_tail(s, xmin);
  const double q = double(xmin);
  int iterations = 0;
  bool converged = true;
  auto inner = [&](double lambda) {
    auto nll = [&](double a) {
      double z = truncated_zeta(a, lambda, q);
      if (!(z > 0.0) || !std::isfinite(z)) return std::numeric_limits<double>::infinity();
      return t.n * std::log(z) + a * t.sum_log + lambda * t.sum_x;
    };
    double lo = lambda > 0.0 ? -5.0 : 1.0 + 1e-9;
    std::uintmax_t it = max_iterations;
    auto r = boost::math::tools::brent_find_minima(nll, lo, 50.0, detail::brent_bits(), it);
    iterations += int(it);
    if (it >= std::uintmax_t(max_iterations)) converged = false;
    return r;
  };
  auto profile = [&](double lambda) { return inner(lambda).second; };

  double lambda_exp = std::log1p(1.0 / (t.sum_x / t.n - q));
  double hi = 5.0 * lambda_exp + 0.1;
  auto [lambda, f] = detail::minimize_1d(profile, 0.0, hi, 1e3, iterations, converged);
  auto at_zero = inner(0.0);
  Params p;
  if (at_zero.second <= f) {
    p.alpha = at_zero.first;
    p.lambda = 0.0;
  } else {
    p.alpha = inner(lambda).first;
    p.lambda = lambda;
  }
  return detail::finish(Model::truncated_power_law, p, t, converged, iterations);
}

/// Lognormal, exponential and truncated power law on the shared tail.
inline std::vector<FitResult> fit_alternatives(const Sample& s, std::int64_t xmin) {
  return {fit_lognormal(s, xmin), fit_exponential(s, xmin), fit_truncated_power_law(s, xmin)};
}

inline FitResult fit_model(const Sample& s, Model m, std::int64_t xmin) {
  switch (m) {
    case Model::power_law: {
      auto t = detail::checked_tail(s, xmin);
      int iterations = 0;
      bool converged = true;
      Params p;
      p.alpha = detail::power_law_alpha(t, detail::power_law_approx(t), iterations, converged);
      return detail::finish(Model::power_law, p, t, converged, iterations);
    }
    case Model::lognormal: return fit_lognormal(s, xmin);
    case Model::exponential: return fit_exponential(s, xmin);
    case Model::truncated_power_law: return fit_truncated_power_law(s, xmin);
  }
  throw Error(ErrorCode::validation, "unknown model");
}

}  // namespace infoveil::heavytail
