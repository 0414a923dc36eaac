#pragma once

#include <string>
#include <utility>

#include "splitgrow/weights.hpp"

namespace splitgrow {

/// Large-k behaviour of a density sequence: a_k ~ constant * k^exponent, or
/// a_k ~ constant * rate^k.
struct Asymptote {
  enum class Kind { PowerLaw, Exponential };
  Kind kind = Kind::PowerLaw;
  double constant = 0.0;
  double exponent = 0.0;  // PowerLaw
  double rate = 0.0;      // Exponential

  double operator()(int k) const;
};

/// Preferential attachment: a_k = (w_2/w_k) prod_{i=1}^k w_i / (w_i + w_2).
double pref_attachment_density(const SplittingWeights& sw, int k);
/// The same density through the Gamma-ratio form with x = b/a; requires a > 0.
double pref_attachment_density_gamma(const SplittingWeights& sw, int k);
Asymptote pref_attachment_asymptote(const SplittingWeights& sw);
double pref_attachment_asymptote(const SplittingWeights& sw, int k);

/// Modified Bessel function of the first kind, nu >= 0, z > 0, by its power series.
double bessel_I(double nu, double z);

/// Normalizing constant C(x) of the uniform-partitioning densities.
double uniform_normalizer(double x);
/// Uniform partitioning with w_i = i + x, x > -1.
double uniform_density(double x, int k);
/// Constant splitting weights with uniform partitioning: a_k = e^{-1}/(k-1)!.
/// This model has s = 0, so the value is a formal solution only.
double uniform_constant_density(int k);

/// Attachment-and-grafting densities, alpha in [0,1), gamma in (0,1].
double grafting_density(double alpha, double gamma, int k);
Asymptote grafting_asymptote(double alpha, double gamma);
double grafting_asymptote(double alpha, double gamma, int k);

/// Two-colour RNA model limits (e_white_k, e_black_k) of n_{t,k}/t.
std::pair<double, double> rna_closed_form(int k);

}  // namespace splitgrow
