#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "splitgrow/growth.hpp"
#include "splitgrow/rng.hpp"
#include "splitgrow/sampler.hpp"
#include "splitgrow/solver.hpp"
#include "splitgrow/weights.hpp"

namespace splitgrow {

enum class Colour { White = 0, Black = 1 };

/// Black/white splitting weights w_white_k = c k + a and w_black_k = c k + b
/// with c = a - 3b/2, and white partitioning weights from a one-colour model
/// whose splitting weights must equal w_white.
class TwoColourModel {
 public:
  TwoColourModel(double a, double b, WeightModel white);

  double a() const { return a_; }
  double b() const { return b_; }
  double slope() const { return a_ - 1.5 * b_; }
  /// a - b = w_black_2 / 2 = w_white_2 / 3.
  double growth_rate() const { return a_ - b_; }
  double white_weight(int k) const { return slope() * k + a_; }
  double black_weight(int k) const { return slope() * k + b_; }
  double weight(Colour c, int k) const {
    return c == Colour::White ? white_weight(k) : black_weight(k);
  }
  const WeightModel& white() const { return white_; }
  const std::optional<int>& d_max() const { return white_.d_max(); }

 private:
  double a_;
  double b_;
  WeightModel white_;
};

/// The RNA folding weights: a = 1, b = 0, uniform white partitioning.
TwoColourModel rna_model();

struct TwoColourCensus {
  std::uint64_t t = 0;  // event clock
  std::vector<std::uint64_t> white{0};
  std::vector<std::uint64_t> black{0};

  std::uint64_t n(Colour c, int k) const;
  int max_degree() const;
  std::uint64_t vertex_count() const;
  /// sum (3 n_white + 2 n_black); equals t + 2.
  std::uint64_t weighted_count() const;
  double weight_sum(const TwoColourModel& m) const;
  bool operator==(const TwoColourCensus&) const = default;
};

/// sum (3 n_white + 2 n_black) = t + 2 and total weight = (a - b) t + b (relative 1e-9).
bool two_colour_identities_hold(const TwoColourCensus& c, const TwoColourModel& m);

struct TwoColourEvent {
  Colour colour = Colour::Black;
  int degree = 0;
  int k = 0;  // first child degree for a white split, 0 for a recolouring
};

// Census-level engine: a selected black vertex turns white; a selected white
// vertex of degree i becomes two black vertices of degrees k and i + 2 - k.
class TwoColourGrowth {
 public:
  /// Single edge with two black endpoints at t = 2.
  explicit TwoColourGrowth(TwoColourModel model);
  TwoColourGrowth(TwoColourModel model, TwoColourCensus initial);

  const TwoColourModel& model() const { return model_; }
  const TwoColourCensus& census() const { return census_; }
  std::uint64_t t() const { return census_.t; }
  double total_weight() const { return sampler_.total(); }
  double expected_total_weight() const;

  TwoColourEvent step(Rng& rng);

 private:
  static std::size_t item(Colour c, int k) { return 2 * static_cast<std::size_t>(k) + static_cast<std::size_t>(c); }
  void bump(Colour c, int k, std::int64_t delta);

  TwoColourModel model_;
  TwoColourCensus census_;
  WeightedSampler sampler_;
  SplitSizeSampler split_sampler_;
};

std::vector<TwoColourCensus> run_two_colour(const TwoColourModel& model, std::uint64_t t_final,
                                            Rng& rng, std::uint64_t thinning = 0);

/// One-colour model with w_i = w_black_i and w_{j,i+2-j} = (w_black_i / w_white_i) w_white_{j,i+2-j}.
WeightModel reduce_to_one_colour(const TwoColourModel& model);

enum class TwoColourMethod { Reduction, Direct };

struct TwoColourSolution {
  TwoColourMethod method = TwoColourMethod::Reduction;
  int K = 0;
  std::vector<double> e_white, e_black;      // index k-1
  std::vector<double> rho_white, rho_black;  // index k-1
  /// Reduced one-colour solution (Reduction method only).
  DensitySolution reduced;
  /// Max |residual| of the black-balance and white-balance equation families.
  double black_residual = 0.0;
  double white_residual = 0.0;
  /// |sum (3 e_white + 2 e_black) - 1| and |sum (w_white e_white + w_black e_black) - w_black_2 / 2|.
  double count_deviation = 0.0;
  double weight_deviation = 0.0;
  std::vector<std::string> warnings;

  double white(int k) const { return at(e_white, k); }
  double black(int k) const { return at(e_black, k); }

 private:
  static double at(const std::vector<double>& v, int k) {
    return k >= 1 && static_cast<std::size_t>(k) <= v.size() ? v[static_cast<std::size_t>(k - 1)] : 0.0;
  }
};

/// Reduction: solve the reduced one-colour model, split each a_k in the ratio
/// e_white_k / e_black_k = w_black_k / (w_white_k + w_white_2 / 3) and scale to
/// sum (3 e_white + 2 e_black) = 1. Direct: least-squares solve of both
/// equation families truncated at K together with that normalization.
TwoColourSolution solve_two_colour(const TwoColourModel& model, const FixedPointOptions& options = {},
                                   TwoColourMethod method = TwoColourMethod::Reduction);

/// rho = e / sum (e_white + e_black), returned as (rho_white, rho_black).
std::pair<std::vector<double>, std::vector<double>> densities_from_e(const std::vector<double>& e_white,
                                                                     const std::vector<double>& e_black);

}  // namespace splitgrow
