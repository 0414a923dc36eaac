#include "splitgrow/twocolour.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "splitgrow/errors.hpp"

namespace splitgrow {

TwoColourModel::TwoColourModel(double a, double b, WeightModel white)
    : a_(a), b_(b), white_(std::move(white)) {
  if (!(a - b > 0)) throw InvalidParameter("two-colour model needs a - b > 0");
  const auto& sw = white_.splitting();
  const double scale = std::max({1.0, std::abs(a), std::abs(b)});
  if (std::abs(sw.a - slope()) > 1e-12 * scale || std::abs(sw.b - a) > 1e-12 * scale) {
    throw InvalidParameter("white partition weights imply w_k = " + std::to_string(sw.a) + " k + " +
                           std::to_string(sw.b) + ", expected " + std::to_string(slope()) + " k + " +
                           std::to_string(a));
  }
  const int top = d_max() ? *d_max() : 2;
  // Both weights are linear, so checking the ends of the range suffices when unbounded.
  if (!d_max() && slope() < 0) throw InvalidParameter("two-colour weights turn negative for large degree");
  for (int k = 1; k <= top; ++k) {
    if (white_weight(k) < 0 || black_weight(k) < 0) {
      throw InvalidParameter("two-colour weights negative at degree " + std::to_string(k));
    }
  }
}

TwoColourModel rna_model() { return TwoColourModel(1.0, 0.0, make_uniform(1.0)); }

std::uint64_t TwoColourCensus::n(Colour c, int k) const {
  const auto& v = c == Colour::White ? white : black;
  return k >= 0 && static_cast<std::size_t>(k) < v.size() ? v[static_cast<std::size_t>(k)] : 0;
}

int TwoColourCensus::max_degree() const {
  for (auto k = static_cast<int>(std::max(white.size(), black.size())) - 1; k > 0; --k) {
    if (n(Colour::White, k) || n(Colour::Black, k)) return k;
  }
  return 0;
}

std::uint64_t TwoColourCensus::vertex_count() const {
  std::uint64_t total = 0;
  for (auto x : white) total += x;
  for (auto x : black) total += x;
  return total;
}

std::uint64_t TwoColourCensus::weighted_count() const {
  std::uint64_t total = 0;
  for (auto x : white) total += 3 * x;
  for (auto x : black) total += 2 * x;
  return total;
}

double TwoColourCensus::weight_sum(const TwoColourModel& m) const {
  double total = 0.0;
  for (std::size_t k = 1; k < white.size(); ++k) total += m.white_weight(static_cast<int>(k)) * white[k];
  for (std::size_t k = 1; k < black.size(); ++k) total += m.black_weight(static_cast<int>(k)) * black[k];
  return total;
}

bool two_colour_identities_hold(const TwoColourCensus& c, const TwoColourModel& m) {
  if (c.weighted_count() != c.t + 2) return false;
  const double expected = m.growth_rate() * static_cast<double>(c.t) + m.b();
  return std::abs(c.weight_sum(m) - expected) <= 1e-9 * std::max(1.0, std::abs(expected));
}

TwoColourGrowth::TwoColourGrowth(TwoColourModel model)
    : TwoColourGrowth(model, [] {
        TwoColourCensus c;
        c.t = 2;
        c.black = {0, 2};
        return c;
      }()) {}

TwoColourGrowth::TwoColourGrowth(TwoColourModel model, TwoColourCensus initial)
    : model_(std::move(model)), census_(std::move(initial)), split_sampler_(model_.white()) {
  if (census_.white.empty()) census_.white.push_back(0);
  if (census_.black.empty()) census_.black.push_back(0);
  if (census_.weighted_count() != census_.t + 2) {
    throw InvalidParameter("initial two-colour census violates sum (3 n_white + 2 n_black) = t + 2");
  }
  const int top = census_.max_degree();
  sampler_.resize(item(Colour::Black, top) + 1);
  for (int k = 1; k <= top; ++k) {
    sampler_.set(item(Colour::White, k), model_.white_weight(k) * census_.n(Colour::White, k));
    sampler_.set(item(Colour::Black, k), model_.black_weight(k) * census_.n(Colour::Black, k));
  }
}

double TwoColourGrowth::expected_total_weight() const {
  return model_.growth_rate() * static_cast<double>(census_.t) + model_.b();
}

void TwoColourGrowth::bump(Colour c, int k, std::int64_t delta) {
  auto& v = c == Colour::White ? census_.white : census_.black;
  const auto kk = static_cast<std::size_t>(k);
  if (kk >= v.size()) v.resize(kk + 1, 0);
  v[kk] = static_cast<std::uint64_t>(static_cast<std::int64_t>(v[kk]) + delta);
  sampler_.set(item(c, k), model_.weight(c, k) * static_cast<double>(v[kk]));
}

TwoColourEvent TwoColourGrowth::step(Rng& rng) {
  const std::size_t idx = sampler_.sample(rng);
  TwoColourEvent ev;
  ev.colour = static_cast<Colour>(idx % 2);
  ev.degree = static_cast<int>(idx / 2);
  if (ev.colour == Colour::Black) {
    bump(Colour::Black, ev.degree, -1);
    bump(Colour::White, ev.degree, +1);
  } else {
    ev.k = split_sampler_.sample(ev.degree, rng);
    bump(Colour::White, ev.degree, -1);
    bump(Colour::Black, ev.k, +1);
    bump(Colour::Black, ev.degree + 2 - ev.k, +1);
  }
  ++census_.t;
  return ev;
}

std::vector<TwoColourCensus> run_two_colour(const TwoColourModel& model, std::uint64_t t_final,
                                            Rng& rng, std::uint64_t thinning) {
  TwoColourGrowth g(model);
  if (t_final < g.t()) throw InvalidParameter("t_final is below the initial time");
  std::vector<TwoColourCensus> out;
  if (thinning) out.push_back(g.census());
  while (g.t() < t_final) {
    g.step(rng);
    if (thinning && g.t() % thinning == 0 && g.t() != t_final) out.push_back(g.census());
  }
  out.push_back(g.census());
  return out;
}

WeightModel reduce_to_one_colour(const TwoColourModel& model) {
  const WeightModel& white = model.white();
  const int scan = white.d_max() ? *white.d_max() : WeightModel::kRegimeScan;
  for (int i = 1; i <= scan; ++i) {
    if (model.white_weight(i) != 0) continue;
    for (int j = 1; j <= i + 1; ++j) {
      if (white.w(j, i + 2 - j) != 0) {
        throw DivisionByZero("w_white_" + std::to_string(i) + " = 0 but degree-" + std::to_string(i) +
                             " white vertices have partition mass");
      }
    }
  }
  const double c = model.slope(), a = model.a(), b = model.b();
  auto pw = PartitionWeights(
      [white, c, a, b](int j, int l) {
        const int i = j + l - 2;
        const double wo = c * i + a;
        return wo == 0 ? 0.0 : (c * i + b) / wo * white.w(j, l);
      },
      white.d_max());

  CustomModelOptions opts;
  opts.name = "reduced(" + white.name() + ")";
  if (const auto& lim = white.leaf_split_limit()) {
    // w_black_i / w_white_i -> 1 when c != 0 and equals b/a otherwise.
    opts.leaf_split_limit = c != 0 ? *lim : (b == 0 ? 0.0 : *lim * b / a);
  }
  if (const auto& wc = white.tail_closure(); wc && !white.d_max()) {
    // The ratio scaling keeps i w_{1,i+1} linear only when the white leaf-split
    // weights are proportional to w_white.
    const double lambda = c != 0 ? wc->slope / c : wc->intercept / a;
    if (std::abs(wc->slope - lambda * c) <= 1e-12 && std::abs(wc->intercept - lambda * a) <= 1e-12) {
      opts.tail_closure = TailClosure{wc->from_degree, lambda * c, lambda * b};
    }
  }
  WeightModel reduced = WeightModel::custom(std::move(pw), SplittingWeights{c, b}, std::move(opts));
  const auto report = validate_model(reduced);
  if (report.status("A1") == CheckStatus::Fail || report.status("nonnegative") == CheckStatus::Fail) {
    throw ReductionInvalid("reduced one-colour model fails validation: " +
                           (report.status("A1") == CheckStatus::Fail ? report.find("A1")->detail
                                                                     : report.find("nonnegative")->detail));
  }
  return reduced;
}

std::pair<std::vector<double>, std::vector<double>> densities_from_e(const std::vector<double>& e_white,
                                                                     const std::vector<double>& e_black) {
  double total = 0.0;
  for (double x : e_white) total += x;
  for (double x : e_black) total += x;
  if (!(total > 0)) throw DegeneracyError("densities_from_e: all e vanish");
  std::vector<double> rw(e_white.size()), rb(e_black.size());
  std::transform(e_white.begin(), e_white.end(), rw.begin(), [total](double x) { return x / total; });
  std::transform(e_black.begin(), e_black.end(), rb.begin(), [total](double x) { return x / total; });
  return {std::move(rw), std::move(rb)};
}

namespace {

// Residuals of (w_black_k + w_black_2/2) e_black_k = sum_i i w_white_{k,i-k+2} e_white_i
// and (w_white_k + w_white_2/3) e_white_k = w_black_k e_black_k, plus the two global sums.
void fill_diagnostics(const TwoColourModel& m, TwoColourSolution& sol, const TailGains& white_tail,
                      double tail_count, double tail_weight) {
  const int K = sol.K;
  const double d = m.growth_rate();
  sol.black_residual = sol.white_residual = 0.0;
  double count = tail_count, weight = tail_weight;
  for (int k = 1; k <= K; ++k) {
    double gain = 0.0;
    for (int i = std::max(k - 1, 1); i <= K; ++i) gain += i * m.white().w(k, i - k + 2) * sol.white(i);
    if (k == 1) gain += white_tail.leaf;
    if (k == 2) gain += white_tail.second;
    sol.black_residual =
        std::max(sol.black_residual, std::abs((m.black_weight(k) + d) * sol.black(k) - gain));
    sol.white_residual = std::max(
        sol.white_residual, std::abs((m.white_weight(k) + d) * sol.white(k) - m.black_weight(k) * sol.black(k)));
    count += 3 * sol.white(k) + 2 * sol.black(k);
    weight += m.white_weight(k) * sol.white(k) + m.black_weight(k) * sol.black(k);
  }
  sol.count_deviation = std::abs(count - 1.0);
  sol.weight_deviation = std::abs(weight - d);
}

TwoColourSolution solve_by_reduction(const TwoColourModel& m, const FixedPointOptions& options) {
  const WeightModel reduced = reduce_to_one_colour(m);
  TwoColourSolution sol;
  sol.method = TwoColourMethod::Reduction;
  sol.reduced = fixed_point_densities(reduced, options);
  sol.warnings = sol.reduced.warnings;
  const int K = sol.K = sol.reduced.K;

  // Since w_white + w_black + w_white_2/3 = 2 w_white, the white share of
  // rho_k = a_k is w_black_k / (2 w_white_k).
  const auto share = [&m](int k) { return m.black_weight(k) / (2 * m.white_weight(k)); };
  std::vector<double> rho_w(static_cast<std::size_t>(K)), rho_b(rho_w.size());
  double white_mass = 0.0;
  for (int k = 1; k <= K; ++k) {
    const double a = sol.reduced.at(k);
    rho_w[static_cast<std::size_t>(k - 1)] = a * share(k);
    rho_b[static_cast<std::size_t>(k - 1)] = a - a * share(k);
    white_mass += a * share(k);
  }
  const TailSums& tail = sol.reduced.tail;
  if (sol.reduced.tail_closed) {
    // share(i) is monotone in i; its value at K+1 bounds the tail's share up
    // to a relative O(1/K) correction on an already small mass.
    white_mass += tail.mass * share(K + 1);
    if (m.slope() != 0) sol.warnings.push_back("white tail mass approximated from share at K+1");
  }
  // sum (3 e_white + 2 e_black) = 1 with e = c rho and sum rho = 1 gives c = 1/(2 + sum rho_white).
  const double scale = 1.0 / (2.0 + white_mass);
  sol.e_white.resize(rho_w.size());
  sol.e_black.resize(rho_b.size());
  for (std::size_t i = 0; i < rho_w.size(); ++i) {
    sol.e_white[i] = scale * rho_w[i];
    sol.e_black[i] = scale * rho_b[i];
  }
  sol.rho_white = std::move(rho_w);
  sol.rho_black = std::move(rho_b);

  // Tail contributions to the diagnostics. The white gains map exactly onto
  // the reduced model's gains: i w_white_{k,.} e_white_i = (scale/2) i w_{k,.} a_i.
  TailGains gains;
  double tail_count = 0.0, tail_weight = 0.0;
  if (sol.reduced.tail_closed) {
    const TailGains g = closure_tail_gains(reduced, tail);
    gains = {scale / 2 * g.leaf, scale / 2 * g.second};
    const double tail_white = tail.mass * share(K + 1);
    tail_count = scale * (2 * tail.mass + tail_white);
    // w_white e_white + w_black e_black = scale a_i w_black_i (1 + d / (2 w_white_i)).
    const double black_moment = m.slope() * tail.moment + m.b() * tail.mass;
    tail_weight = scale * black_moment * (1 + m.growth_rate() / (2 * m.white_weight(K + 1)));
  }
  fill_diagnostics(m, sol, gains, tail_count, tail_weight);
  return sol;
}

TwoColourSolution solve_direct(const TwoColourModel& m, const FixedPointOptions& options) {
  const int K = m.d_max() ? *m.d_max() : options.K;
  if (K < 2) throw InvalidParameter("solve_two_colour: K must be at least 2");
  const double d = m.growth_rate();
  // Columns 0..K-1 are e_white_k, K..2K-1 are e_black_k.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * K + 1, 2 * K);
  for (int k = 1; k <= K; ++k) {
    const int r = k - 1;
    A(r, K + k - 1) = m.black_weight(k) + d;
    for (int i = std::max(k - 1, 1); i <= K; ++i) A(r, i - 1) -= i * m.white().w(k, i - k + 2);
    A(K + r, k - 1) = m.white_weight(k) + d;
    A(K + r, K + k - 1) = -m.black_weight(k);
    A(2 * K, k - 1) = 3.0;
    A(2 * K, K + k - 1) = 2.0;
  }
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * K + 1);
  rhs(2 * K) = 1.0;
  const Eigen::VectorXd x = A.colPivHouseholderQr().solve(rhs);

  TwoColourSolution sol;
  sol.method = TwoColourMethod::Direct;
  sol.K = K;
  sol.e_white.assign(x.data(), x.data() + K);
  sol.e_black.assign(x.data() + K, x.data() + 2 * K);
  for (int k = 1; k <= K; ++k) {
    if (sol.white(k) < -options.tol || sol.black(k) < -options.tol) {
      throw NonPositive("direct two-colour solve produced a negative density at degree " + std::to_string(k));
    }
  }
  auto [rw, rb] = densities_from_e(sol.e_white, sol.e_black);
  sol.rho_white = std::move(rw);
  sol.rho_black = std::move(rb);
  if (!m.d_max()) sol.warnings.push_back("direct solve truncates e_i = 0 for i > K");
  fill_diagnostics(m, sol, {}, 0.0, 0.0);
  return sol;
}

}  // namespace

TwoColourSolution solve_two_colour(const TwoColourModel& model, const FixedPointOptions& options,
                                   TwoColourMethod method) {
  return method == TwoColourMethod::Reduction ? solve_by_reduction(model, options)
                                              : solve_direct(model, options);
}

}  // namespace splitgrow
