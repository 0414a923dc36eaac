#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "splitgrow/closed_forms.hpp"
#include "splitgrow/errors.hpp"
#include "splitgrow/solver.hpp"

using namespace splitgrow;

TEST(Bessel, AgreesWithStandardLibrary) {
  for (double nu : {0.0, 0.5, 1.0, 1.5, 2.25, 3.5, 7.0}) {
    for (double z : {0.1, 1.0, 2.5, 10.0}) {
      const double ref = std::cyl_bessel_i(nu, z);
      EXPECT_NEAR(bessel_I(nu, z), ref, 1e-13 * ref) << nu << "," << z;
    }
  }
}

TEST(Bessel, HalfIntegerIdentities) {
  for (double z : {0.5, 1.0, 3.0}) {
    const double c = std::sqrt(2 / (std::numbers::pi * z));
    EXPECT_NEAR(bessel_I(0.5, z), c * std::sinh(z), 1e-14 * c * std::sinh(z));
    const double i32 = c * (std::cosh(z) - std::sinh(z) / z);
    EXPECT_NEAR(bessel_I(1.5, z), i32, 1e-14 * std::max(1.0, i32));
  }
}

TEST(Bessel, RejectsBadArguments) {
  EXPECT_THROW(bessel_I(-0.5, 1.0), InvalidParameter);
  EXPECT_THROW(bessel_I(0.5, 0.0), InvalidParameter);
}

TEST(PreferentialClosedForm, Examples) {
  const SplittingWeights pa{1, 0};
  EXPECT_NEAR(pref_attachment_density(pa, 1), 2.0 / 3, 1e-15);
  EXPECT_NEAR(pref_attachment_density(pa, 2), 1.0 / 6, 1e-15);
  EXPECT_NEAR(pref_attachment_density(pa, 3), 1.0 / 15, 1e-15);
  for (int k = 1; k <= 1000; ++k) {
    EXPECT_NEAR(pref_attachment_density(pa, k), oracle::pa_density(k), 1e-12 * oracle::pa_density(k));
  }
}

TEST(PreferentialClosedForm, ProductMatchesGammaForm) {
  for (SplittingWeights sw : {SplittingWeights{1, 0}, SplittingWeights{2, 1}, SplittingWeights{1, 3.5},
                              SplittingWeights{0.5, 0.25}}) {
    for (int k = 1; k <= 300; ++k) {
      const double p = pref_attachment_density(sw, k);
      EXPECT_NEAR(pref_attachment_density_gamma(sw, k), p, 1e-12 * p) << k;
    }
  }
}

TEST(PreferentialClosedForm, SumsToOne) {
  for (SplittingWeights sw : {SplittingWeights{1, 0}, SplittingWeights{1, 2}, SplittingWeights{0, 1}}) {
    double total = 0;
    for (int k = 1; k <= 2000; ++k) total += pref_attachment_density(sw, k);
    EXPECT_NEAR(total, 1.0, 1e-5);
  }
}

TEST(PreferentialClosedForm, Asymptotes) {
  const auto pa = pref_attachment_asymptote({1, 0});
  EXPECT_EQ(pa.kind, Asymptote::Kind::PowerLaw);
  EXPECT_NEAR(pa.exponent, -3.0, 1e-14);
  EXPECT_NEAR(pa.constant, 4.0, 1e-12);
  EXPECT_NEAR(pref_attachment_density({1, 0}, 1000) / pref_attachment_asymptote({1, 0}, 1000), 1.0, 0.01);
  // Larger x converges more slowly: the relative correction is O(x^2/k).
  for (SplittingWeights sw : {SplittingWeights{1, 2}, SplittingWeights{3, 1}}) {
    const int k = 100000;
    EXPECT_NEAR(pref_attachment_density_gamma(sw, k) / pref_attachment_asymptote(sw, k), 1.0, 0.01);
  }
  // Constant weights: a_k = 2^-k.
  const auto c = pref_attachment_asymptote({0, 1});
  EXPECT_EQ(c.kind, Asymptote::Kind::Exponential);
  EXPECT_DOUBLE_EQ(c.rate, 0.5);
  EXPECT_NEAR(pref_attachment_density({0, 1}, 10), std::ldexp(1.0, -10), 1e-16);
}

TEST(UniformClosedForm, XZeroExamples) {
  const double e2 = std::exp(2.0);
  EXPECT_NEAR(uniform_density(0, 1), 8 / (3 * (e2 - 1)), 1e-14);
  EXPECT_NEAR(uniform_normalizer(0), (e2 - 1) / 8, 1e-15);
  for (int k = 1; k <= 60; ++k) {
    EXPECT_NEAR(uniform_density(0, k), oracle::uniform0_density(k), 1e-13 * oracle::uniform0_density(k)) << k;
  }
}

TEST(UniformClosedForm, PartialSumsAreOne) {
  for (double x : {-0.5, 0.0, 1.0}) {
    double total = 0, moment = 0;
    for (int k = 1; k <= 300; ++k) {
      total += uniform_density(x, k);
      moment += k * uniform_density(x, k);
    }
    EXPECT_NEAR(total, 1.0, 1e-12) << x;
    EXPECT_NEAR(moment, 2.0, 1e-12) << x;
  }
}

TEST(UniformClosedForm, ConstantWeightsFormalSolution) {
  EXPECT_NEAR(uniform_constant_density(1), std::exp(-1.0), 1e-16);
  EXPECT_NEAR(uniform_constant_density(4), std::exp(-1.0) / 6, 1e-16);
  EXPECT_THROW(uniform_density(-1.0, 3), InvalidParameter);
}

TEST(UniformClosedForm, AgreesWithFixedPoint) {
  for (double x : {-0.5, 0.0, 1.0}) {
    FixedPointOptions o;
    o.K = 200;
    const auto sol = fixed_point_densities(make_uniform(x), o);
    for (int k = 1; k <= 30; ++k) EXPECT_NEAR(sol.at(k), uniform_density(x, k), 1e-10) << x << " " << k;
  }
}

TEST(GraftingClosedForm, RandomRecursiveIsGeometric) {
  for (int k = 1; k <= 40; ++k) EXPECT_NEAR(grafting_density(0, 1, k), std::ldexp(1.0, -k), 1e-15);
}

TEST(GraftingClosedForm, AlphaZeroMatchesPreferential) {
  for (double gamma : {0.25, 0.5, 0.75}) {
    const auto sw = make_grafting(0, gamma).splitting();
    for (int k = 1; k <= 50; ++k) {
      const double p = pref_attachment_density(sw, k);
      EXPECT_NEAR(grafting_density(0, gamma, k), p, 1e-12 * p) << gamma << " " << k;
    }
  }
}

TEST(GraftingClosedForm, AgreesWithFixedPoint) {
  const std::pair<double, double> cases[] = {{0, 0.5}, {0.5, 0.5}, {0.5, 1}, {0.25, 0.8}};
  for (auto [alpha, gamma] : cases) {
    FixedPointOptions o;
    o.K = 512;
    const auto sol = fixed_point_densities(make_grafting(alpha, gamma), o);
    double total = 0;
    for (int k = 1; k <= 30; ++k) {
      EXPECT_NEAR(sol.at(k), grafting_density(alpha, gamma, k), 1e-8) << alpha << "," << gamma << " k=" << k;
    }
    for (int k = 1; k <= 100000; ++k) total += grafting_density(alpha, gamma, k);
    EXPECT_NEAR(total, 1.0, 1e-3);
  }
}

TEST(GraftingClosedForm, Asymptotes) {
  const auto e = grafting_asymptote(0.5, 1);
  EXPECT_EQ(e.kind, Asymptote::Kind::Exponential);
  EXPECT_NEAR(e.rate, 1.0 / 3, 1e-15);
  // Log-ratio of consecutive exact values converges to log rate.
  const double lr = std::log(grafting_density(0.5, 1, 201) / grafting_density(0.5, 1, 200));
  EXPECT_NEAR(lr, std::log(1.0 / 3), 1e-6);
  for (auto [alpha, gamma] : {std::pair{0.5, 0.5}, std::pair{0.0, 0.5}, std::pair{0.25, 0.8}}) {
    const auto p = grafting_asymptote(alpha, gamma);
    EXPECT_EQ(p.kind, Asymptote::Kind::PowerLaw);
    EXPECT_NEAR(grafting_density(alpha, gamma, 100000) / p(100000), 1.0, 0.01) << alpha << "," << gamma;
  }
  EXPECT_NEAR(grafting_density(0.5, 1, 100) / grafting_asymptote(0.5, 1, 100), 1.0, 0.01);
}

TEST(GraftingClosedForm, RejectsOutOfRange) {
  EXPECT_THROW(grafting_density(1.0, 0.5, 2), InvalidParameter);
  EXPECT_THROW(grafting_density(0.5, 0.0, 2), InvalidParameter);
  EXPECT_THROW(grafting_density(0.5, 0.5, 0), InvalidParameter);
}

TEST(RnaClosedForm, Values) {
  for (int k = 1; k <= 25; ++k) {
    const auto [w, b] = rna_closed_form(k);
    EXPECT_NEAR(w, oracle::rna_white(k), 1e-16 + 1e-13 * oracle::rna_white(k));
    EXPECT_NEAR(b, oracle::rna_black(k), 1e-16 + 1e-13 * oracle::rna_black(k));
    EXPECT_NEAR(w / b, k / (k + 2.0), 1e-13);
  }
  const auto [w1, b1] = rna_closed_form(1);
  EXPECT_NEAR(w1, 1 / (3 * std::exp(2.0)), 1e-16);
  EXPECT_NEAR(b1, 1 / std::exp(2.0), 1e-16);
}

TEST(RnaClosedForm, CountIdentity) {
  double count = 0;
  for (int k = 1; k <= 60; ++k) {
    const auto [w, b] = rna_closed_form(k);
    count += 3 * w + 2 * b;
  }
  EXPECT_NEAR(count, 1.0, 1e-14);
}
