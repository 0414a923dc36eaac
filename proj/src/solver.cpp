#include "splitgrow/solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "splitgrow/errors.hpp"

namespace splitgrow {

namespace {

struct Term {
  int i;
  double coef;
};

// Row k of the system as sparse (i, i * w_{k,i-k+2}) terms for k-1 <= i <= K.
std::vector<std::vector<Term>> build_rows(const WeightModel& m, int K) {
  std::vector<std::vector<Term>> rows(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    auto& row = rows[static_cast<std::size_t>(k - 1)];
    for (int i = std::max(k - 1, 1); i <= K; ++i) {
      const double w = m.w(k, i - k + 2);
      if (w != 0.0) row.push_back({i, i * w});
    }
  }
  return rows;
}

}  // namespace

TailGains closure_tail_gains(const WeightModel& m, const TailSums& tail) {
  const auto& c = *m.tail_closure();
  const auto& sw = m.splitting();
  // Beyond the closure degree i w_{2,i} = w_i - i w_{1,i+1}.
  return {c.slope * tail.moment + c.intercept * tail.mass,
          (sw.a - c.slope) * tail.moment + (sw.b - c.intercept) * tail.mass};
}

std::string to_string(Method method) {
  switch (method) {
    case Method::FixedPoint: return "fixed-point";
    case Method::Linear: return "linear";
    case Method::ClosedForm: return "closed-form";
  }
  return "unknown";
}

std::optional<TailSums> closure_tail(const WeightModel& m, int K, double a_K) {
  if (m.d_max() || !m.tail_closure()) return std::nullopt;
  const auto& c = *m.tail_closure();
  const double w2 = m.w(2);
  if (K < std::max(c.from_degree, 2) || !(w2 - c.slope > 0)) return std::nullopt;
  // Beyond K: (w_2 + u_m) a_m = u_{m-1} a_{m-1} with u_m = slope m + intercept.
  // Summing that recursion, and summing it weighted by m, telescopes to
  //   w_2 S0 = u_K a_K,   (w_2 - slope) S1 = (K+1) u_K a_K + intercept S0.
  const double uK = c.leaf_split(K);
  TailSums t;
  t.mass = uK * a_K / w2;
  t.moment = ((K + 1) * uK * a_K + c.intercept * t.mass) / (w2 - c.slope);
  return t;
}

ResidualReport residuals(const WeightModel& m, std::span<const double> a, int K, bool close_tail) {
  if (K < 1 || a.size() < static_cast<std::size_t>(K)) {
    throw InvalidParameter("residuals: density vector shorter than K");
  }
  const double w2 = m.w(2);
  ResidualReport rep;
  rep.r.resize(static_cast<std::size_t>(K));
  const auto rows = build_rows(m, K);
  for (int k = 1; k <= K; ++k) {
    double gain = 0.0;
    for (const auto& term : rows[static_cast<std::size_t>(k - 1)]) {
      gain += term.coef * a[static_cast<std::size_t>(term.i - 1)];
    }
    rep.r[static_cast<std::size_t>(k - 1)] = a[static_cast<std::size_t>(k - 1)] * (w2 + m.w(k)) - gain;
  }
  double sum = 0.0, moment = 0.0;
  for (int k = 1; k <= K; ++k) {
    sum += a[static_cast<std::size_t>(k - 1)];
    moment += k * a[static_cast<std::size_t>(k - 1)];
  }
  std::optional<TailSums> tail;
  if (close_tail) tail = closure_tail(m, K, a[static_cast<std::size_t>(K - 1)]);
  if (tail) {
    const auto tt = closure_tail_gains(m, *tail);
    rep.r[0] -= tt.leaf;
    if (K >= 2) rep.r[1] -= tt.second;
    sum += tail->mass;
    moment += tail->moment;
    rep.tail_mass = tail->mass;
  } else {
    rep.tail_mass = std::max(0.0, 1.0 - sum);
  }
  for (double r : rep.r) rep.max_abs = std::max(rep.max_abs, std::abs(r));
  rep.sum_deviation = std::abs(sum - 1.0);
  rep.moment_deviation = std::abs(moment - 2.0);
  return rep;
}

DensitySolution fixed_point_densities(const WeightModel& m, const FixedPointOptions& options) {
  const RegimeInfo regime = classify_regime(m);
  DensitySolution sol;
  sol.method = Method::FixedPoint;
  sol.note = "minimal solution (monotone limit)";

  int K = m.d_max() ? *m.d_max() : options.K;
  if (K < 2) throw InvalidParameter("fixed_point_densities: K must be at least 2");
  const double w2 = m.w(2);
  if (!(w2 > 0)) throw InvalidParameter("fixed_point_densities: w_2 must be positive");

  double s = regime.s;
  if (regime.regime == Regime::CaseII || !(s > 0)) {
    if (!options.force_unsupported) {
      throw RegimeError("model '" + m.name() + "' is in " + to_string(regime.regime) +
                        " with s = 0; the convergence hypothesis inf i w_{1,i+1} > 0 fails");
    }
    // Use the infimum over the truncated range, which keeps every coefficient
    // of the truncated system nonnegative.
    s = std::numeric_limits<double>::infinity();
    for (int i = 1; i < K; ++i) s = std::min(s, i * m.w(1, i + 1));
    if (!(s > 0)) throw RegimeError("forced run impossible: some leaf-split weight vanishes below K");
    sol.unsupported = true;
    sol.warnings.push_back("unsupported: " + to_string(regime.regime) +
                           ", solved with truncated infimum s_K = " + std::to_string(s));
  }
  sol.s_used = s;

  bool closed = options.use_tail_closure && !m.d_max() && m.tail_closure().has_value();
  if (closed) {
    K = std::max(K, std::max(m.tail_closure()->from_degree, 2));
    if (!closure_tail(m, K, 0.0)) {
      closed = false;
      sol.warnings.push_back("tail closure unusable (w_2 <= closure slope); plain truncation");
    }
  }
  sol.tail_closed = closed;
  sol.K = K;

  // Leaf row: w_2 a_1 = sum_{i>=2} i w_{1,i+1} a_i, shifted by sum_i lambda_i a_i = sigma.
  // Unbounded models use lambda_i = s, sigma = s. Bounded ones (d >= 3) use
  // lambda_i = alpha (1 - i/d), sigma = alpha (1 - 2/d), which vanishes at i = d
  // where w_{1,d+1} = 0, so every coefficient stays nonnegative.
  std::vector<double> lambda(static_cast<std::size_t>(K) + 1, s);
  double sigma = s;
  if (m.d_max() && K >= 3 && !options.constant_shift) {
    double alpha = std::numeric_limits<double>::infinity();
    for (int i = 1; i < K; ++i) alpha = std::min(alpha, i * m.w(1, i + 1) * K / static_cast<double>(K - i));
    for (int i = 1; i <= K; ++i) lambda[static_cast<std::size_t>(i)] = alpha * (1.0 - static_cast<double>(i) / K);
    sigma = alpha * (1.0 - 2.0 / K);
    sol.s_used = alpha;
  }

  auto rows = build_rows(m, K);
  {
    auto& leaf = rows[0];
    std::vector<Term> shifted;
    for (const auto& term : leaf) {
      if (term.i >= 2) shifted.push_back({term.i, term.coef - lambda[static_cast<std::size_t>(term.i)]});
    }
    for (int i = 2; i <= K; ++i) {
      const double l = lambda[static_cast<std::size_t>(i)];
      if (l != 0 && std::none_of(shifted.begin(), shifted.end(), [i](const Term& t) { return t.i == i; })) {
        shifted.push_back({i, -l});
      }
    }
    std::sort(shifted.begin(), shifted.end(), [](const Term& x, const Term& y) { return x.i < y.i; });
    leaf = std::move(shifted);
  }
  std::vector<double> denom(static_cast<std::size_t>(K));
  denom[0] = w2 + lambda[1];
  for (int k = 2; k <= K; ++k) denom[static_cast<std::size_t>(k - 1)] = w2 + m.w(k);

  std::vector<double> cur(static_cast<std::size_t>(K), 0.0), next(cur.size(), 0.0);
  const auto tail_of = [&](double a_K) -> TailGains {
    if (!closed) return {};
    return closure_tail_gains(m, *closure_tail(m, K, a_K));
  };

  std::size_t j = 0;
  double step = std::numeric_limits<double>::infinity();
  while (j < options.max_iter) {
    const TailGains tail = tail_of(cur.back());
    for (int k = 1; k <= K; ++k) {
      const auto kk = static_cast<std::size_t>(k - 1);
      double acc = 0.0;
      for (const auto& term : rows[kk]) acc += term.coef * cur[static_cast<std::size_t>(term.i - 1)];
      if (k == 1) {
        acc += sigma;
        if (closed) acc += tail.leaf - s * closure_tail(m, K, cur.back())->mass;
      } else if (k == 2) {
        acc += tail.second;
      }
      next[kk] = acc / denom[kk];
    }
    ++j;
    step = 0.0;
    double psum = 0.0, pmoment = 0.0;
    for (std::size_t kk = 0; kk < next.size(); ++kk) {
      step = std::max(step, std::abs(next[kk] - cur[kk]));
      sol.max_decrease = std::max(sol.max_decrease, cur[kk] - next[kk]);
      psum += next[kk];
      pmoment += static_cast<double>(kk + 1) * next[kk];
    }
    sol.max_iterate_sum = std::max(sol.max_iterate_sum, psum);
    sol.max_iterate_moment = std::max(sol.max_iterate_moment, pmoment);
    std::swap(cur, next);
    if (options.observer) options.observer(j, cur);
    if (step < options.tol) break;
  }
  sol.iterations = j;
  sol.last_step = step;
  sol.converged = step < options.tol;
  if (!sol.converged) {
    std::ostringstream os;
    os << "fixed-point iteration did not reach tol " << options.tol << " in " << options.max_iter
       << " iterations (last step " << step << ")";
    throw NoConvergence(os.str());
  }
  sol.a = std::move(cur);
  if (closed) sol.tail = *closure_tail(m, K, sol.a.back());
  sol.sum = sol.tail.mass;
  sol.moment = sol.tail.moment;
  for (int k = 1; k <= K; ++k) {
    sol.sum += sol.a[static_cast<std::size_t>(k - 1)];
    sol.moment += k * sol.a[static_cast<std::size_t>(k - 1)];
  }
  sol.residuals = residuals(m, sol.a, K, closed);
  if (!closed) sol.tail.mass = sol.residuals.tail_mass;
  return sol;
}

DensitySolution fixed_point_adaptive(const WeightModel& m, FixedPointOptions options,
                                     double stability_tol, int max_K) {
  auto coarse = fixed_point_densities(m, options);
  if (m.d_max()) return coarse;
  while (options.K * 2 <= max_K) {
    options.K *= 2;
    auto fine = fixed_point_densities(m, options);
    double moved = 0.0;
    for (int k = 1; k <= coarse.K; ++k) moved = std::max(moved, std::abs(fine.at(k) - coarse.at(k)));
    coarse = std::move(fine);
    if (moved < stability_tol) return coarse;
  }
  coarse.warnings.push_back("adaptive truncation stopped at max_K before stabilizing");
  return coarse;
}

DensitySolution solve_finite(const WeightModel& m, double tol) {
  if (!m.d_max()) throw InvalidParameter("solve_finite requires a bounded model");
  const int d = *m.d_max();
  const double w2 = m.w(2);
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
  for (int k = 1; k <= d; ++k) {
    A(k - 1, k - 1) += w2 + m.w(k);
    for (int i = std::max(k - 1, 1); i <= d; ++i) A(k - 1, i - 1) -= i * m.w(k, i + 2 - k);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr_hom(A);
  qr_hom.setThreshold(1e-12);
  const auto rank = qr_hom.rank();
  if (rank < d - 1) {
    throw RankDeficient("stationary system has rank " + std::to_string(rank) + " < d_max - 1 = " +
                        std::to_string(d - 1));
  }

  Eigen::MatrixXd stacked(d + 1, d);
  stacked.topRows(d) = A;
  stacked.row(d).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(d + 1);
  rhs(d) = 1.0;
  const Eigen::VectorXd rho = stacked.colPivHouseholderQr().solve(rhs);

  DensitySolution sol;
  sol.method = Method::Linear;
  sol.K = d;
  sol.converged = true;
  sol.note = "unique solution (bounded degrees)";
  sol.a.assign(rho.data(), rho.data() + d);
  const double consistency = (stacked * rho - rhs).cwiseAbs().maxCoeff();
  if (consistency > 1e-8) {
    throw RankDeficient("stationary system with normalization is inconsistent (residual " +
                        std::to_string(consistency) + ")");
  }
  for (int k = 1; k <= d; ++k) {
    const double v = sol.a[static_cast<std::size_t>(k - 1)];
    if (v < -tol) throw NonPositive("rho_" + std::to_string(k) + " = " + std::to_string(v));
    if (v <= tol) sol.warnings.push_back("rho_" + std::to_string(k) + " is zero; solution is not strictly positive");
    sol.sum += v;
    sol.moment += k * v;
  }
  if (std::abs(sol.moment - 2.0) > 1e-8) {
    sol.warnings.push_back("sum k rho_k = " + std::to_string(sol.moment) + " differs from 2");
  }
  const auto report = validate_model(m);
  for (const char* cond : {"A2", "A3"}) {
    if (report.status(cond) == CheckStatus::Fail) {
      sol.warnings.push_back(std::string(cond) + " fails: " + report.find(cond)->detail);
    }
  }
  sol.residuals = residuals(m, sol.a, d, false);
  return sol;
}

}  // namespace splitgrow
