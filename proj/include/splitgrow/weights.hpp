#pragma once

#include <functional>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace splitgrow {

/// Linear splitting weights w_i = a*i + b.
struct SplittingWeights {
  double a = 1.0;
  double b = 0.0;

  double operator()(int i) const { return a * i + b; }
  /// Normalized offset x = b/a of the w_i = i + x parameterization; requires a != 0.
  double offset() const { return b / a; }
};

/// Symmetric partitioning weights w_{i,j}, i, j >= 1.
///
/// The backing function is only ever called with i <= j, so symmetry holds by
/// construction. Indices below 1 or beyond d_max read as zero.
class PartitionWeights {
 public:
  using Fn = std::function<double(int, int)>;

  PartitionWeights() = default;
  PartitionWeights(Fn fn, std::optional<int> d_max)
      : fn_(std::move(fn)), d_max_(d_max) {}

  double operator()(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 1 || !fn_) return 0.0;
    if (d_max_ && j > *d_max_) return 0.0;
    return fn_(i, j);
  }

  const std::optional<int>& d_max() const { return d_max_; }
  bool bounded() const { return d_max_.has_value(); }

 private:
  Fn fn_;
  std::optional<int> d_max_;
};

enum class Family { Preferential, Uniform, AlphaClass, Grafting, Table, Custom };
enum class Regime { CaseI, CaseII, CaseIII };

std::string to_string(Family family);
std::string to_string(Regime regime);

struct RegimeInfo {
  Regime regime = Regime::CaseIII;
  /// inf{ i * w_{1,i+1} : 1 <= i < d_max }
  double s = 0.0;
};

// For every degree i >= from_degree the only nonzero splits are (1, i+1) and
// (2, i) together with their mirrors, and i * w_{1,i+1} = slope * i + intercept.
// Under that shape the limiting densities beyond any truncation K >= from_degree
// follow a two-term recursion whose tail sums are available in closed form.
struct TailClosure {
  int from_degree = 2;
  double slope = 0.0;
  double intercept = 0.0;

  double leaf_split(int i) const { return slope * i + intercept; }
};

struct CustomModelOptions {
  std::string name = "custom";
  /// lim_{i->inf} i * w_{1,i+1}; required to classify unbounded custom models.
  std::optional<double> leaf_split_limit;
  std::optional<TailClosure> tail_closure;
};

class WeightModel {
 public:
  /// Wraps arbitrary partition weights. The regime is classified numerically
  /// (scan up to kRegimeScan plus the supplied tail limit); for unbounded
  /// models without a limit hint the classification stays unknown and
  /// classify_regime() throws UnknownTail.
  static WeightModel custom(PartitionWeights pw, SplittingWeights sw,
                            CustomModelOptions options = {});

  const PartitionWeights& partition() const { return pw_; }
  const SplittingWeights& splitting() const { return sw_; }
  double w(int i) const { return sw_(i); }
  double w(int i, int j) const { return pw_(i, j); }
  const std::optional<int>& d_max() const { return pw_.d_max(); }

  Family family() const { return family_; }
  const std::string& name() const { return name_; }
  const std::optional<RegimeInfo>& regime_info() const { return regime_; }
  const std::optional<TailClosure>& tail_closure() const { return closure_; }
  const std::optional<double>& leaf_split_limit() const { return leaf_limit_; }

  static constexpr int kRegimeScan = 4096;

 private:
  friend WeightModel make_preferential(SplittingWeights);
  friend WeightModel make_uniform_linear(SplittingWeights);
  friend WeightModel make_uniform(double);
  friend WeightModel make_alpha_class(SplittingWeights, std::vector<double>, int,
                                      PartitionWeights);
  friend WeightModel make_grafting(double, double);
  friend WeightModel make_table(int, const std::vector<std::tuple<int, int, double>>&);

  WeightModel() = default;

  PartitionWeights pw_;
  SplittingWeights sw_;
  Family family_ = Family::Custom;
  std::string name_;
  std::optional<RegimeInfo> regime_;
  std::optional<TailClosure> closure_;
  std::optional<double> leaf_limit_;
};

/// w_i = (i/2) * sum_{j=1}^{i+1} w_{j,i+2-j} for i = 1..i_max (index 0 of the result is w_1).
std::vector<double> derive_splitting_weights(const PartitionWeights& pw, int i_max);

enum class CheckStatus { Pass, Fail, NotChecked, NotApplicable };
std::string to_string(CheckStatus status);

struct ConditionCheck {
  std::string name;
  CheckStatus status = CheckStatus::NotChecked;
  std::string detail;
};

struct ValidationReport {
  std::vector<ConditionCheck> checks;
  /// (a, b) fitted from the first two derived splitting weights.
  SplittingWeights fitted;
  double linearity_residual = 0.0;

  bool ok() const;
  const ConditionCheck* find(const std::string& name) const;
  CheckStatus status(const std::string& name) const;
};

/// Checks linearity of the derived splitting weights (A1), leaf reachability
/// (A2) and splittability of maximal-degree vertices (A3). Diagonalizability
/// (A4) is reported as not checked. Violations are reported, never thrown.
ValidationReport validate_model(const WeightModel& m, double tol = 1e-9);

/// Throws UnknownTail when the model is unbounded, not a built-in family and
/// no leaf-split limit was supplied.
RegimeInfo classify_regime(const WeightModel& m);

WeightModel make_preferential(SplittingWeights sw);
/// Uniform partitioning w_{i,k+2-i} = 2 w_k / (k (k+1)) for arbitrary linear
/// splitting weights (covers the constant-weight Case II example).
WeightModel make_uniform_linear(SplittingWeights sw);
/// Uniform partitioning with w_i = i + x, x > -1.
WeightModel make_uniform(double x);
/// i w_{1,i+1} = alpha_i w_i and i w_{2,i} = (1 - alpha_i) w_i for i >= M;
/// alpha[0] is alpha_M and the last entry repeats forever. The head table
/// supplies every split of a vertex of degree below M.
WeightModel make_alpha_class(SplittingWeights sw, std::vector<double> alpha, int M,
                             PartitionWeights head);
/// Attachment-and-grafting weights with parameters alpha in [0,1), gamma in [alpha/2, 1].
WeightModel make_grafting(double alpha, double gamma);
/// Finite table; entries are (i, j, w_{i,j}) and are mirrored automatically.
WeightModel make_table(int d_max, const std::vector<std::tuple<int, int, double>>& entries);

}  // namespace splitgrow
