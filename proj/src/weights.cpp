#include "splitgrow/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <sstream>

#include "splitgrow/errors.hpp"

namespace splitgrow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_params(const char* family, std::initializer_list<std::pair<const char*, double>> ps) {
  std::ostringstream os;
  os.precision(17);
  os << family << '(';
  bool first = true;
  for (const auto& [key, value] : ps) {
    if (!first) os << ", ";
    os << key << '=' << value;
    first = false;
  }
  os << ')';
  return os.str();
}

void require_linear_nonnegative(const SplittingWeights& sw, const char* who) {
  if (!std::isfinite(sw.a) || !std::isfinite(sw.b)) {
    throw InvalidParameter(std::string(who) + ": splitting weights must be finite");
  }
  // Unbounded degrees: w_i = a i + b >= 0 for all i >= 1 iff a >= 0 and w_1 >= 0.
  if (sw.a < 0 || sw.a + sw.b < 0) {
    throw InvalidParameter(std::string(who) + ": splitting weights must be nonnegative for all i >= 1");
  }
  if (sw(2) <= 0) {
    throw InvalidParameter(std::string(who) + ": w_2 must be positive");
  }
}

// Regime of a model from the values i * w_{1,i+1}.
std::optional<RegimeInfo> classify_numeric(const PartitionWeights& pw,
                                           std::optional<double> leaf_limit) {
  if (pw.d_max()) {
    const int d_max = *pw.d_max();
    double s = d_max > 1 ? kInf : 0.0;
    for (int i = 1; i < d_max; ++i) s = std::min(s, i * pw(1, i + 1));
    // w_{1,d_max+1} = 0 always, so a bounded model is Case I.
    return RegimeInfo{Regime::CaseI, s};
  }
  if (!leaf_limit) return std::nullopt;
  double s = *leaf_limit;
  bool zero = false;
  for (int i = 1; i <= WeightModel::kRegimeScan; ++i) {
    const double v = i * pw(1, i + 1);
    if (v <= 0) zero = true;
    s = std::min(s, v);
  }
  if (zero) return RegimeInfo{Regime::CaseI, 0.0};
  if (s <= 0) return RegimeInfo{Regime::CaseII, 0.0};
  return RegimeInfo{Regime::CaseIII, s};
}

// Partition weights of the attachment-and-grafting class for degrees >= M.
// alpha_of(i) gives alpha_i for i >= M.
PartitionWeights alpha_class_partition(SplittingWeights sw, std::function<double(int)> alpha_of,
                                       int M, PartitionWeights head) {
  auto fn = [sw, alpha_of = std::move(alpha_of), M, head = std::move(head)](int lo, int hi) {
    const int degree = lo + hi - 2;
    if (degree < M) return head(lo, hi);
    const double wi = sw(degree);
    const double alpha = alpha_of(degree);
    if (lo == 1) return alpha * wi / degree;
    if (lo == 2) {
      // The (2,2) split of a degree-2 vertex is a single ordered pair.
      if (degree == 2) return (1.0 - alpha) * wi;
      return (1.0 - alpha) * wi / degree;
    }
    return 0.0;
  };
  return PartitionWeights(std::move(fn), std::nullopt);
}

void check_a1_or_throw(const WeightModel& m, const char* who) {
  const auto report = validate_model(m);
  if (report.status("A1") == CheckStatus::Fail || report.status("nonnegative") == CheckStatus::Fail) {
    const auto* a1 = report.find("A1");
    throw InvalidParameter(std::string(who) + ": " + (a1 ? a1->detail : "invalid weights"));
  }
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::Preferential: return "preferential";
    case Family::Uniform: return "uniform";
    case Family::AlphaClass: return "alpha_class";
    case Family::Grafting: return "grafting";
    case Family::Table: return "table";
    case Family::Custom: return "custom";
  }
  return "unknown";
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::CaseI: return "CaseI";
    case Regime::CaseII: return "CaseII";
    case Regime::CaseIII: return "CaseIII";
  }
  return "unknown";
}

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::NotChecked: return "not checked";
    case CheckStatus::NotApplicable: return "n/a";
  }
  return "unknown";
}

WeightModel WeightModel::custom(PartitionWeights pw, SplittingWeights sw, CustomModelOptions options) {
  WeightModel m;
  m.pw_ = std::move(pw);
  m.sw_ = sw;
  m.family_ = Family::Custom;
  m.name_ = std::move(options.name);
  m.leaf_limit_ = options.leaf_split_limit;
  m.closure_ = options.tail_closure;
  m.regime_ = classify_numeric(m.pw_, m.leaf_limit_);
  return m;
}

std::vector<double> derive_splitting_weights(const PartitionWeights& pw, int i_max) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(i_max, 0)));
  for (int i = 1; i <= i_max; ++i) {
    double sum = 0.0;
    for (int j = 1; j <= i + 1; ++j) sum += pw(j, i + 2 - j);
    out.push_back(0.5 * i * sum);
  }
  return out;
}

bool ValidationReport::ok() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const ConditionCheck& c) { return c.status == CheckStatus::Fail; });
}

const ConditionCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

CheckStatus ValidationReport::status(const std::string& name) const {
  const auto* c = find(name);
  return c ? c->status : CheckStatus::NotChecked;
}

ValidationReport validate_model(const WeightModel& m, double tol) {
  ValidationReport report;
  const auto& pw = m.partition();
  const auto d_max = m.d_max();
  const int n = d_max ? *d_max : 200;

  // Nonnegativity and finiteness over the probed range.
  {
    ConditionCheck c{"nonnegative", CheckStatus::Pass, ""};
    const int probe = d_max ? *d_max + 1 : 64;
    for (int i = 1; i <= probe && c.status == CheckStatus::Pass; ++i) {
      for (int j = i; j <= probe; ++j) {
        const double v = pw(i, j);
        if (!std::isfinite(v) || v < 0) {
          std::ostringstream os;
          os << "w_{" << i << ',' << j << "} = " << v;
          c = {"nonnegative", CheckStatus::Fail, os.str()};
          break;
        }
      }
    }
    report.checks.push_back(c);
  }

  // A1: derived splitting weights are linear and match the declared (a, b).
  {
    const auto derived = derive_splitting_weights(pw, std::max(n, 2));
    SplittingWeights fit{derived[1] - derived[0], 2.0 * derived[0] - derived[1]};
    double residual = 0.0;
    for (int i = 1; i <= n; ++i) {
      const double scale = std::max(1.0, std::abs(derived[i - 1]));
      residual = std::max(residual, std::abs(derived[i - 1] - fit(i)) / scale);
    }
    const double scale_a = std::max(1.0, std::abs(m.splitting().a));
    const double scale_b = std::max(1.0, std::abs(m.splitting().b));
    const double mismatch = std::max(std::abs(fit.a - m.splitting().a) / scale_a,
                                     std::abs(fit.b - m.splitting().b) / scale_b);
    report.fitted = fit;
    report.linearity_residual = residual;
    std::ostringstream os;
    os.precision(6);
    os << "fit a=" << fit.a << " b=" << fit.b << ", residual " << residual
       << ", declared mismatch " << mismatch;
    bool positive = true;
    for (int i = 1; i <= n; ++i) {
      const double wi = derived[i - 1];
      if (wi < -tol || (i >= 2 && i <= n - 1 && wi <= 0)) positive = false;
    }
    if (!positive) os << ", derived weights not positive on 2..d_max-1";
    const bool pass = residual <= tol && mismatch <= tol && positive;
    report.checks.push_back({"A1", pass ? CheckStatus::Pass : CheckStatus::Fail, os.str()});
  }

  // A2: every degree up to d_max is reachable from a leaf split.
  if (d_max) {
    ConditionCheck c{"A2", CheckStatus::Pass, "w_{1,k} > 0 for 2 <= k <= d_max"};
    for (int k = 2; k <= *d_max; ++k) {
      if (!(pw(1, k) > 0)) {
        c = {"A2", CheckStatus::Fail, "w_{1," + std::to_string(k) + "} = 0"};
        break;
      }
    }
    report.checks.push_back(c);
  } else {
    report.checks.push_back({"A2", CheckStatus::NotApplicable, "unbounded degrees"});
  }

  // A3: vertices of maximal degree can split.
  if (d_max) {
    ConditionCheck c{"A3", CheckStatus::Fail, "no w_{i,d_max+2-i} > 0 with 2 <= i <= d_max-1"};
    for (int i = 2; i <= *d_max - 1; ++i) {
      if (pw(i, *d_max + 2 - i) > 0) {
        c = {"A3", CheckStatus::Pass, "w_{" + std::to_string(i) + "," +
                                          std::to_string(*d_max + 2 - i) + "} > 0"};
        break;
      }
    }
    report.checks.push_back(c);
  } else {
    report.checks.push_back({"A3", CheckStatus::NotApplicable, "unbounded degrees"});
  }

  report.checks.push_back({"A4", CheckStatus::NotChecked, "diagonalizability is not required"});
  return report;
}

RegimeInfo classify_regime(const WeightModel& m) {
  if (!m.regime_info()) {
    throw UnknownTail("model '" + m.name() +
                      "' is unbounded and has no leaf-split limit; supply one to classify it");
  }
  return *m.regime_info();
}

WeightModel make_preferential(SplittingWeights sw) {
  require_linear_nonnegative(sw, "make_preferential");
  WeightModel m;
  m.sw_ = sw;
  m.family_ = Family::Preferential;
  m.name_ = fmt_params("preferential", {{"a", sw.a}, {"b", sw.b}});
  m.pw_ = PartitionWeights(
      [sw](int lo, int hi) { return lo == 1 && hi >= 2 ? sw(hi - 1) / (hi - 1) : 0.0; },
      std::nullopt);
  // i w_{1,i+1} = w_i, nondecreasing because a >= 0.
  const double w1 = sw(1);
  m.regime_ = w1 > 0 ? RegimeInfo{Regime::CaseIII, w1} : RegimeInfo{Regime::CaseI, 0.0};
  m.leaf_limit_ = sw.a > 0 ? kInf : sw.b;
  m.closure_ = TailClosure{2, sw.a, sw.b};
  return m;
}

WeightModel make_uniform_linear(SplittingWeights sw) {
  require_linear_nonnegative(sw, "make_uniform_linear");
  WeightModel m;
  m.sw_ = sw;
  m.family_ = Family::Uniform;
  m.name_ = fmt_params("uniform", {{"a", sw.a}, {"b", sw.b}});
  m.pw_ = PartitionWeights(
      [sw](int lo, int hi) {
        const int k = lo + hi - 2;
        if (k < 1) return 0.0;
        return 2.0 * sw(k) / (static_cast<double>(k) * (k + 1));
      },
      std::nullopt);
  // i w_{1,i+1} = 2 (a i + b) / (i + 1) is monotone in i, from a + b at i = 1 toward 2a.
  const double first = sw.a + sw.b;
  const double limit = 2.0 * sw.a;
  if (first <= 0) {
    m.regime_ = RegimeInfo{Regime::CaseI, 0.0};
  } else if (limit <= 0) {
    m.regime_ = RegimeInfo{Regime::CaseII, 0.0};
  } else {
    m.regime_ = RegimeInfo{Regime::CaseIII, std::min(first, limit)};
  }
  m.leaf_limit_ = limit;
  return m;
}

WeightModel make_uniform(double x) {
  if (!(x > -1.0) || !std::isfinite(x)) throw InvalidParameter("make_uniform: x must exceed -1");
  auto m = make_uniform_linear({1.0, x});
  m.name_ = fmt_params("uniform", {{"x", x}});
  return m;
}

WeightModel make_alpha_class(SplittingWeights sw, std::vector<double> alpha, int M,
                             PartitionWeights head) {
  require_linear_nonnegative(sw, "make_alpha_class");
  if (M < 2) throw InvalidParameter("make_alpha_class: M must be at least 2");
  if (alpha.empty()) throw InvalidParameter("make_alpha_class: alpha sequence is empty");
  for (double a : alpha) {
    if (!(a > 0.0 && a <= 1.0)) throw InvalidParameter("make_alpha_class: alpha_i must lie in (0,1]");
  }
  for (int i = M; i < M + static_cast<int>(alpha.size()); ++i) {
    if (!(sw(i) > 0)) throw InvalidParameter("make_alpha_class: w_i must be positive for i >= M");
  }
  const int last_degree = M + static_cast<int>(alpha.size()) - 1;
  const double alpha_tail = alpha.back();
  auto alpha_of = [alpha, M](int i) {
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(i - M), alpha.size() - 1);
    return alpha[idx];
  };
  WeightModel m;
  m.sw_ = sw;
  m.family_ = Family::AlphaClass;
  {
    std::ostringstream os;
    os.precision(17);
    os << "alpha_class(a=" << sw.a << ", b=" << sw.b << ", M=" << M << ", alpha=[";
    for (std::size_t i = 0; i < alpha.size(); ++i) os << (i ? "," : "") << alpha[i];
    os << "])";
    m.name_ = os.str();
  }
  m.pw_ = alpha_class_partition(sw, alpha_of, M, std::move(head));
  m.leaf_limit_ = sw.a > 0 ? kInf : alpha_tail * sw.b;
  m.closure_ = TailClosure{std::max(last_degree, 2), alpha_tail * sw.a, alpha_tail * sw.b};
  m.regime_ = classify_numeric(m.pw_, m.leaf_limit_);
  check_a1_or_throw(m, "make_alpha_class");
  return m;
}

WeightModel make_grafting(double alpha, double gamma) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw InvalidParameter("make_grafting: alpha must lie in [0,1) so that alpha_2 > 0");
  }
  if (!(gamma >= alpha / 2 && gamma <= 1.0)) {
    throw InvalidParameter("make_grafting: gamma must lie in [alpha/2, 1] so that w_1 >= 0");
  }
  const SplittingWeights sw{alpha / 2 + 1.0 - gamma, 2.0 * gamma - alpha - 1.0};
  // alpha_i w_i = w_i - alpha i / 2 is itself linear in i.
  auto alpha_of = [sw, alpha](int i) { return 1.0 - alpha * i / (2.0 * sw(i)); };
  PartitionWeights head([sw](int lo, int hi) { return lo == 1 && hi == 2 ? sw(1) : 0.0; },
                        std::nullopt);
  WeightModel m;
  m.sw_ = sw;
  m.family_ = Family::Grafting;
  m.name_ = fmt_params("grafting", {{"alpha", alpha}, {"gamma", gamma}});
  m.pw_ = alpha_class_partition(sw, alpha_of, 2, std::move(head));
  // i w_{1,i+1}: w_1 = gamma - alpha/2 at i = 1, then (1-gamma) i + 2 gamma - alpha - 1,
  // which is 1 - alpha at i = 2 and nondecreasing.
  const double first = gamma - alpha / 2;
  const double second = 1.0 - alpha;
  m.regime_ = first > 0 ? RegimeInfo{Regime::CaseIII, std::min(first, second)}
                        : RegimeInfo{Regime::CaseI, 0.0};
  m.leaf_limit_ = gamma < 1.0 ? kInf : 1.0 - alpha;
  m.closure_ = TailClosure{2, 1.0 - gamma, 2.0 * gamma - alpha - 1.0};
  return m;
}

WeightModel make_table(int d_max, const std::vector<std::tuple<int, int, double>>& entries) {
  if (d_max < 2) throw InvalidParameter("make_table: d_max must be at least 2");
  const auto dim = static_cast<std::size_t>(d_max + 1);
  auto table = std::make_shared<std::vector<double>>(dim * dim, 0.0);
  std::map<std::pair<int, int>, double> seen;
  for (const auto& [i0, j0, weight] : entries) {
    const int i = std::min(i0, j0);
    const int j = std::max(i0, j0);
    if (i < 1 || j > d_max) {
      throw InvalidParameter("make_table: entry (" + std::to_string(i0) + "," + std::to_string(j0) +
                             ") outside 1..d_max");
    }
    if (!std::isfinite(weight) || weight < 0) {
      throw InvalidParameter("make_table: weights must be finite and nonnegative");
    }
    auto [it, inserted] = seen.emplace(std::pair{i, j}, weight);
    if (!inserted && it->second != weight) {
      throw InvalidParameter("make_table: conflicting values for w_{" + std::to_string(i) + "," +
                             std::to_string(j) + "}");
    }
    (*table)[static_cast<std::size_t>(i) * dim + j] = weight;
  }
  PartitionWeights pw([table, dim](int lo, int hi) { return (*table)[static_cast<std::size_t>(lo) * dim + hi]; },
                      d_max);
  const auto derived = derive_splitting_weights(pw, 2);
  WeightModel m;
  m.pw_ = std::move(pw);
  m.sw_ = {derived[1] - derived[0], 2.0 * derived[0] - derived[1]};
  m.family_ = Family::Table;
  m.name_ = "table(d_max=" + std::to_string(d_max) + ")";
  m.regime_ = classify_numeric(m.pw_, std::nullopt);
  check_a1_or_throw(m, "make_table");
  return m;
}

}  // namespace splitgrow
