#ifndef BELLCHSH_OPTIMIZER_HPP
#define BELLCHSH_OPTIMIZER_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "bellchsh/correlators.hpp"
#include "bellchsh/errors.hpp"
#include "bellchsh/observables.hpp"
#include "bellchsh/tolerances.hpp"

namespace bellchsh {

/// One coordinate of a scenario's parameter domain.
/// A `phase` wraps into [lower, lower + 2 pi). A `polar` angle lives in [0, pi];
/// reflecting it through pi shifts its partner phase by pi, which leaves the
/// underlying observable unchanged.
struct Interval {
  enum class Kind { phase, polar };
  double lower = 0.0;
  double upper = 2.0 * std::numbers::pi;
  Kind kind = Kind::phase;
  std::optional<std::size_t> partner;

  static Interval phase() { return {}; }
  static Interval polar(std::size_t partner_phase) {
    return {0.0, std::numbers::pi, Kind::polar, partner_phase};
  }
};

struct Scenario {
  std::string name;
  std::function<double(std::span<const double>)> evaluator;
  std::vector<Interval> domain;
  std::vector<std::pair<std::string, double>> state_parameters;
  std::vector<std::string> setting_names;
  Bounds bounds = kChshBounds;

  void validate() const {
    if (domain.empty()) throw DomainError("scenario '" + name + "': empty parameter domain");
    if (!evaluator) throw DomainError("scenario '" + name + "': no evaluator");
    if (!setting_names.empty() && setting_names.size() != domain.size()) {
      throw DimensionError("scenario '" + name + "': setting names do not match the domain");
    }
    for (const auto& iv : domain) {
      if (!(iv.upper > iv.lower)) throw DomainError("scenario '" + name + "': empty interval");
      if (iv.kind == Interval::Kind::polar &&
          (!iv.partner || *iv.partner >= domain.size() ||
           domain[*iv.partner].kind != Interval::Kind::phase)) {
        throw DomainError("scenario '" + name + "': polar angle without a phase partner");
      }
    }
  }

  /// Maps any real point to the canonical representative of its observables.
  std::vector<double> canonicalize(std::span<const double> x) const {
    if (x.size() != domain.size()) {
      throw DimensionError("scenario '" + name + "': expected " + std::to_string(domain.size()) +
                           " settings, got " + std::to_string(x.size()));
    }
    std::vector<double> out(x.begin(), x.end());
    constexpr double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (domain[i].kind != Interval::Kind::polar) continue;
      double t = detail::wrap_two_pi(out[i]);
      if (t > std::numbers::pi) {
        t = two_pi - t;
        out[*domain[i].partner] += std::numbers::pi;
      }
      out[i] = t;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (domain[i].kind != Interval::Kind::phase) continue;
      const double width = domain[i].upper - domain[i].lower;
      double r = std::fmod(out[i] - domain[i].lower, width);
      if (r < 0.0) r += width;
      if (r >= width) r = 0.0;
      out[i] = domain[i].lower + r;
    }
    return out;
  }

  /// Evaluates at the canonical form of `x`.
  double evaluate(std::span<const double> x) const {
    const auto c = canonicalize(x);
    return evaluator(c);
  }

  AngleSet settings(std::span<const double> x) const {
    AngleSet s;
    for (std::size_t i = 0; i < x.size(); ++i) {
      s.add(i < setting_names.size() ? setting_names[i] : "x" + std::to_string(i + 1), x[i]);
    }
    return s;
  }
};

struct OptimizerOptions {
  std::size_t grid_points_per_dim = 8;
  std::size_t max_grid_points = 1'000'000;
  std::size_t random_samples = 65'536;
  double tolerance = tol::kOptimizer;
  std::size_t max_iterations = 2000;
  unsigned workers = 0;  // 0: hardware concurrency
};

struct OptimizationResult {
  double best_value = 0.0;   // |correlator| at best_settings
  double signed_value = 0.0;
  std::vector<double> best_settings;
  std::size_t evaluations = 0;
  bool converged = false;
};

namespace detail {

struct NelderMeadOutcome {
  std::vector<double> x;
  double value = 0.0;  // maximized objective
  std::size_t evaluations = 0;
  bool converged = false;
};

/// Maximizes `f` from `start` with an axis-aligned initial simplex.
inline NelderMeadOutcome nelder_mead(const std::function<double(std::span<const double>)>& f,
                                     std::vector<double> start, std::span<const double> step,
                                     double tolerance, std::size_t max_iterations) {
  const std::size_t n = start.size();
  std::vector<std::vector<double>> pts(n + 1, start);
  for (std::size_t i = 0; i < n; ++i) pts[i + 1][i] += step[i];
  std::vector<double> val(n + 1);
  NelderMeadOutcome out;
  auto eval = [&](const std::vector<double>& x) {
    ++out.evaluations;
    return -f(x);  // minimize the negative
  };
  for (std::size_t i = 0; i <= n; ++i) val[i] = eval(pts[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    for (std::size_t i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    const std::size_t best = order.front();
    const std::size_t worst = order.back();
    const std::size_t second = order[n - 1];

    double diameter = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) diameter = std::max(diameter, std::fabs(pts[i][k] - pts[best][k]));
    }
    if (val[worst] - val[best] <= tolerance && diameter <= std::sqrt(tolerance)) {
      out.converged = true;
      break;
    }

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < n; ++k) centroid[k] += pts[i][k] / static_cast<double>(n);
    }
    for (std::size_t k = 0; k < n; ++k) trial[k] = centroid[k] + (centroid[k] - pts[worst][k]);
    const double fr = eval(trial);
    if (fr < val[best]) {
      for (std::size_t k = 0; k < n; ++k) trial2[k] = centroid[k] + 2.0 * (centroid[k] - pts[worst][k]);
      const double fe = eval(trial2);
      if (fe < fr) {
        pts[worst] = trial2;
        val[worst] = fe;
      } else {
        pts[worst] = trial;
        val[worst] = fr;
      }
      continue;
    }
    if (fr < val[second]) {
      pts[worst] = trial;
      val[worst] = fr;
      continue;
    }
    const bool outside = fr < val[worst];
    for (std::size_t k = 0; k < n; ++k) {
      trial2[k] = outside ? centroid[k] + 0.5 * (trial[k] - centroid[k])
                          : centroid[k] + 0.5 * (pts[worst][k] - centroid[k]);
    }
    const double fc = eval(trial2);
    if (fc < std::min(fr, val[worst])) {
      pts[worst] = trial2;
      val[worst] = fc;
      continue;
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k) pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
      val[i] = eval(pts[i]);
    }
  }
  const auto it = std::min_element(val.begin(), val.end());
  out.x = pts[static_cast<std::size_t>(it - val.begin())];
  out.value = -*it;
  return out;
}

struct Candidate {
  double score;  // |value|
  std::vector<double> x;
};

/// Larger score first; equal scores fall back to the lexicographically smaller point.
inline bool better(const Candidate& a, const Candidate& b) {
  if (a.score != b.score) return a.score > b.score;
  return std::lexicographical_compare(a.x.begin(), a.x.end(), b.x.begin(), b.x.end());
}

inline unsigned resolve_workers(unsigned requested, std::size_t jobs) {
  unsigned w = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(w, std::max<std::size_t>(1, jobs)));
}

}  // namespace detail

/// Coarse search (full grid when it fits the budget, seeded uniform sampling
/// otherwise) followed by Nelder-Mead from the `restarts` best coarse points.
/// Maximizes |value|; the result is reproducible from (scenario, restarts, seed).
inline OptimizationResult maximize_violation(const Scenario& s, std::size_t restarts, std::uint64_t seed,
                                             const OptimizerOptions& opt = {}) {
  s.validate();
  if (restarts == 0) restarts = 1;
  const std::size_t d = s.domain.size();

  // Total grid size, saturating once past the cap.
  std::size_t grid = 1;
  bool use_grid = true;
  for (std::size_t i = 0; i < d; ++i) {
    if (grid > opt.max_grid_points / opt.grid_points_per_dim) {
      use_grid = false;
      break;
    }
    grid *= opt.grid_points_per_dim;
  }
  use_grid = use_grid && grid <= opt.max_grid_points;

  std::vector<detail::Candidate> coarse;
  std::size_t evaluations = 0;
  auto score_point = [&](std::vector<double> x) {
    auto c = s.canonicalize(x);
    const double v = std::fabs(s.evaluator(c));
    ++evaluations;
    coarse.push_back({v, std::move(c)});
  };
  if (use_grid) {
    coarse.reserve(grid);
    std::vector<std::size_t> idx(d, 0);
    for (std::size_t g = 0; g < grid; ++g) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) {
        const auto& iv = s.domain[i];
        x[i] = iv.lower + (iv.upper - iv.lower) * static_cast<double>(idx[i]) /
                              static_cast<double>(opt.grid_points_per_dim);
      }
      score_point(std::move(x));
      for (std::size_t i = d; i-- > 0;) {
        if (++idx[i] < opt.grid_points_per_dim) break;
        idx[i] = 0;
      }
    }
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    coarse.reserve(opt.random_samples);
    for (std::size_t k = 0; k < opt.random_samples; ++k) {
      std::vector<double> x(d);
      for (std::size_t i = 0; i < d; ++i) {
        const auto& iv = s.domain[i];
        x[i] = iv.lower + (iv.upper - iv.lower) * unit(rng);
      }
      score_point(std::move(x));
    }
  }

  const std::size_t starts = std::min(restarts, coarse.size());
  std::partial_sort(coarse.begin(), coarse.begin() + static_cast<std::ptrdiff_t>(starts), coarse.end(),
                    detail::better);

  std::vector<double> step(d);
  for (std::size_t i = 0; i < d; ++i) {
    step[i] = (s.domain[i].upper - s.domain[i].lower) / (2.0 * static_cast<double>(opt.grid_points_per_dim));
  }
  const std::function<double(std::span<const double>)> objective = [&s](std::span<const double> x) {
    return std::fabs(s.evaluate(x));
  };

  std::vector<detail::NelderMeadOutcome> runs(starts);
  const unsigned workers = detail::resolve_workers(opt.workers, starts);
  auto work = [&](unsigned w) {
    for (std::size_t r = w; r < starts; r += workers) {
      runs[r] = detail::nelder_mead(objective, coarse[r].x, step, opt.tolerance, opt.max_iterations);
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }

  // Merge in restart order; the coarse winner stays a candidate as well.
  detail::Candidate best = coarse.front();
  bool converged = false;
  for (const auto& run : runs) {
    evaluations += run.evaluations;
    detail::Candidate c{0.0, s.canonicalize(run.x)};
    c.score = std::fabs(s.evaluator(c.x));
    if (detail::better(c, best)) {
      best = std::move(c);
      converged = run.converged;
    } else if (c.x == best.x) {
      converged = converged || run.converged;
    }
  }

  OptimizationResult res;
  res.best_settings = best.x;
  res.signed_value = s.evaluator(best.x);
  res.best_value = std::fabs(res.signed_value);
  res.evaluations = evaluations;
  res.converged = converged;
  return res;
}

}  // namespace bellchsh

#endif  // BELLCHSH_OPTIMIZER_HPP
