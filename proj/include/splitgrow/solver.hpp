#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "splitgrow/weights.hpp"

namespace splitgrow {

enum class Method { FixedPoint, Linear, ClosedForm };
std::string to_string(Method method);

struct ResidualReport {
  /// r[k-1] = a_k (w_2 + w_k) - sum_{i=k-1} i w_{k,i-k+2} a_i
  std::vector<double> r;
  double max_abs = 0.0;
  double sum_deviation = 0.0;     // |sum a - 1|
  double moment_deviation = 0.0;  // |sum k a - 2|
  double tail_mass = 0.0;         // mass beyond K
};

/// Mass and first moment of the densities beyond the truncation K.
struct TailSums {
  double mass = 0.0;
  double moment = 0.0;
};

struct DensitySolution {
  Method method = Method::FixedPoint;
  int K = 0;
  std::vector<double> a;  // a[k-1] = a_k
  std::size_t iterations = 0;
  double last_step = 0.0;
  bool converged = false;
  /// Forced past a failed convergence hypothesis (Case II); no guarantee attached.
  bool unsupported = false;
  /// Tail beyond K represented exactly through the model's TailClosure.
  bool tail_closed = false;
  TailSums tail;
  /// Leaf shift actually used: s, the truncated s_K, or alpha for bounded models.
  double s_used = 0.0;
  /// Sums including the tail when it is closed.
  double sum = 0.0;
  double moment = 0.0;
  /// Largest a_k^{(j)} - a_k^{(j+1)} seen; <= 0 up to rounding for a monotone run.
  double max_decrease = 0.0;
  /// Largest partial sums sum_{k<=K} a_k^{(j)} and sum k a_k^{(j)} over all iterates.
  double max_iterate_sum = 0.0;
  double max_iterate_moment = 0.0;
  ResidualReport residuals;
  std::vector<std::string> warnings;
  std::string note;

  double at(int k) const {
    return k >= 1 && static_cast<std::size_t>(k) <= a.size() ? a[static_cast<std::size_t>(k - 1)] : 0.0;
  }
};

struct FixedPointOptions {
  int K = 512;
  double tol = 1e-13;
  std::size_t max_iter = 1'000'000;
  /// Run Case II models anyway (result flagged unsupported).
  bool force_unsupported = false;
  bool use_tail_closure = true;
  /// Bounded models: shift the leaf row by the constant s instead of the
  /// degree-dependent shift. The iterates then need not be monotone.
  bool constant_shift = false;
  /// Called with (j, a^{(j)}) after every iteration j >= 1.
  std::function<void(std::size_t, std::span<const double>)> observer;
};

/// Monotone fixed-point iteration from a^{(0)} = 0 with the s-augmented leaf
/// equation, truncated at K (K = d_max for bounded models). When the model
/// carries a TailClosure the densities beyond K enter through exact tail sums;
/// otherwise a_i = 0 for i > K.
///
/// Throws RegimeError when the model is in Case II or has s = 0 (unless
/// forced), NoConvergence after max_iter iterations, UnknownTail when the
/// regime cannot be classified.
DensitySolution fixed_point_densities(const WeightModel& model, const FixedPointOptions& options = {});

/// Repeats fixed_point_densities with K, 2K, ... until entries k <= K move by
/// less than `stability_tol` or K exceeds max_K.
DensitySolution fixed_point_adaptive(const WeightModel& model, FixedPointOptions options,
                                     double stability_tol = 1e-10, int max_K = 1 << 14);

/// Direct solve of the stationary system for a bounded model: the d_max
/// homogeneous equations stacked with sum rho = 1, solved in the least-squares
/// sense (exactly, when consistent). Throws RankDeficient when the homogeneous
/// part has rank below d_max - 1 and NonPositive for a component below -tol.
DensitySolution solve_finite(const WeightModel& model, double tol = 1e-10);

/// Tail sums implied by a_K under the model's TailClosure, if it has one that applies at K.
std::optional<TailSums> closure_tail(const WeightModel& model, int K, double a_K);

/// Gains sum_{i>K} i w_{1,i+1} a_i and sum_{i>K} i w_{2,i} a_i carried by a closed tail.
struct TailGains {
  double leaf = 0.0;
  double second = 0.0;
};
TailGains closure_tail_gains(const WeightModel& model, const TailSums& tail);

/// Residuals of the stationary system over k <= K. When `close_tail` is set
/// and the model has an applicable TailClosure, the terms from degrees beyond K
/// are included through closure_tail().
ResidualReport residuals(const WeightModel& model, std::span<const double> a, int K,
                         bool close_tail = true);

}  // namespace splitgrow
