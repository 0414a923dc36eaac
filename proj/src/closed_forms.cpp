#include "splitgrow/closed_forms.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "splitgrow/errors.hpp"

namespace splitgrow {

namespace {

void require_degree(int k) {
  if (k < 1) throw InvalidParameter("degree must be at least 1, got " + std::to_string(k));
}

}  // namespace

double Asymptote::operator()(int k) const {
  if (kind == Kind::PowerLaw) return constant * std::pow(static_cast<double>(k), exponent);
  return constant * std::pow(rate, k);
}

double pref_attachment_density(const SplittingWeights& sw, int k) {
  require_degree(k);
  const double w2 = sw(2);
  if (!(sw(1) > 0) || !(w2 > 0)) throw InvalidParameter("preferential attachment needs w_1, w_2 > 0");
  double log_prod = std::log(w2) - std::log(sw(k));
  for (int i = 1; i <= k; ++i) log_prod += std::log(sw(i)) - std::log(sw(i) + w2);
  return std::exp(log_prod);
}

double pref_attachment_density_gamma(const SplittingWeights& sw, int k) {
  require_degree(k);
  if (!(sw.a > 0)) throw InvalidParameter("Gamma form needs a > 0");
  const double x = sw.offset();
  if (!(x > -1)) throw InvalidParameter("Gamma form needs x = b/a > -1");
  const double log_a = std::log(2 + x) + std::lgamma(2 * x + 3) + std::lgamma(k + x + 1) -
                       std::log(k + x) - std::lgamma(x + 1) - std::lgamma(k + 2 * x + 3);
  return std::exp(log_a);
}

Asymptote pref_attachment_asymptote(const SplittingWeights& sw) {
  Asymptote as;
  if (sw.a == 0) {
    // Constant weights: the product collapses to 2^{-k}.
    as.kind = Asymptote::Kind::Exponential;
    as.constant = 1.0;
    as.rate = 0.5;
    return as;
  }
  if (!(sw.a > 0)) throw InvalidParameter("preferential attachment asymptote needs a >= 0");
  const double x = sw.offset();
  as.kind = Asymptote::Kind::PowerLaw;
  as.constant = (2 + x) * std::exp(std::lgamma(2 * x + 3) - std::lgamma(x + 1));
  as.exponent = -3 - x;
  return as;
}

double pref_attachment_asymptote(const SplittingWeights& sw, int k) {
  return pref_attachment_asymptote(sw)(k);
}

double bessel_I(double nu, double z) {
  if (!(nu >= 0) || !(z > 0)) throw InvalidParameter("bessel_I needs nu >= 0 and z > 0");
  const double half = z / 2;
  // term_0 = (z/2)^nu / Gamma(nu+1); term_{m+1} = term_m (z/2)^2 / ((m+1)(m+nu+1)).
  double term = std::exp(nu * std::log(half) - std::lgamma(nu + 1));
  double sum = term;
  for (int m = 0; m < 10000; ++m) {
    term *= half * half / ((m + 1) * (m + nu + 1));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double uniform_normalizer(double x) {
  if (!(x > -1)) throw InvalidParameter("uniform family needs x > -1");
  return std::numbers::e * std::sqrt(std::numbers::pi) * std::pow(2.0, -1.5 - x) *
         bessel_I(0.5 + x, 1.0) / (2 + x);
}

double uniform_density(double x, int k) {
  require_degree(k);
  const double log_a = (k - 1) * std::numbers::ln2 + std::lgamma(k + x) - std::lgamma(k) -
                       std::lgamma(k + 3 + 2 * x) + std::log(k + 1 + 2 * x);
  return std::exp(log_a) / uniform_normalizer(x);
}

double uniform_constant_density(int k) {
  require_degree(k);
  return std::exp(-1.0 - std::lgamma(k));
}

namespace {

void require_grafting(double alpha, double gamma) {
  if (!(alpha >= 0 && alpha < 1) || !(gamma > 0 && gamma <= 1)) {
    throw InvalidParameter("grafting closed form needs alpha in [0,1) and gamma in (0,1]");
  }
}

// log of the k-independent factor of the 0 < gamma < 1 density for k >= 2.
double grafting_log_constant(double alpha, double gamma) {
  const double g = 1 - gamma;
  return std::log(gamma) + std::lgamma((3 - alpha - gamma) / g) -
         std::log(1 + gamma - alpha) - std::log(2 - alpha) - std::lgamma((1 - alpha) / g);
}

}  // namespace

double grafting_density(double alpha, double gamma, int k) {
  require_degree(k);
  require_grafting(alpha, gamma);
  if (gamma == 1) {
    if (k == 1) return (1 - alpha) / (2 - alpha);
    return std::pow((1 - alpha) / (2 - alpha), k - 2) / ((2 - alpha) * (2 - alpha));
  }
  if (k == 1) return (1 - alpha) / (1 + gamma - alpha);
  const double g = 1 - gamma;
  return std::exp(grafting_log_constant(alpha, gamma) + std::lgamma(k - 2 + (1 - alpha) / g) -
                  std::lgamma(k - 1 + (2 - alpha) / g));
}

Asymptote grafting_asymptote(double alpha, double gamma) {
  require_grafting(alpha, gamma);
  Asymptote as;
  if (gamma == 1) {
    const double r = (1 - alpha) / (2 - alpha);
    as.kind = Asymptote::Kind::Exponential;
    as.rate = r;
    as.constant = 1 / ((2 - alpha) * (2 - alpha) * r * r);
    return as;
  }
  as.kind = Asymptote::Kind::PowerLaw;
  as.constant = std::exp(grafting_log_constant(alpha, gamma));
  as.exponent = -(2 - gamma) / (1 - gamma);
  return as;
}

double grafting_asymptote(double alpha, double gamma, int k) {
  return grafting_asymptote(alpha, gamma)(k);
}

std::pair<double, double> rna_closed_form(int k) {
  require_degree(k);
  const double base = k * std::numbers::ln2 - 2.0;
  return {std::exp(base + std::log(k) - std::lgamma(k + 3)), std::exp(base - std::lgamma(k + 2))};
}

}  // namespace splitgrow
