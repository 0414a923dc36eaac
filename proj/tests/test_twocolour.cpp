#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "splitgrow/closed_forms.hpp"
#include "splitgrow/errors.hpp"
#include "splitgrow/twocolour.hpp"

using namespace splitgrow;

namespace {

WeightModel dmax3() { return make_table(3, {{1, 2, 1.0}, {1, 3, 0.5}, {2, 2, 1.0}, {2, 3, 1.0}}); }

// Rate balance for white degree-k vertices: recolouring in, selection out.
double white_balance(const TwoColourModel& m, const std::vector<double>& ew, const std::vector<double>& eb, int k) {
  auto at = [](const std::vector<double>& v, int i) {
    return i >= 1 && static_cast<std::size_t>(i) <= v.size() ? v[static_cast<std::size_t>(i - 1)] : 0.0;
  };
  return (m.white_weight(k) + m.growth_rate()) * at(ew, k) - m.black_weight(k) * at(eb, k);
}

}  // namespace

TEST(TwoColourModel, WeightsAndValidation) {
  const auto m = rna_model();
  EXPECT_DOUBLE_EQ(m.slope(), 1.0);
  EXPECT_DOUBLE_EQ(m.white_weight(3), 4.0);
  EXPECT_DOUBLE_EQ(m.black_weight(3), 3.0);
  EXPECT_DOUBLE_EQ(m.growth_rate(), 1.0);
  EXPECT_THROW(TwoColourModel(1, 1, make_preferential({-0.5, 1})), InvalidParameter);
  EXPECT_THROW(TwoColourModel(1, 0, make_uniform(0)), InvalidParameter);  // white weights must be k + 1
}

TEST(TwoColourGrowth, FirstStepIsForcedRecolouring) {
  TwoColourGrowth g(rna_model());
  EXPECT_EQ(g.t(), 2u);
  EXPECT_EQ(g.census().n(Colour::Black, 1), 2u);
  EXPECT_DOUBLE_EQ(g.total_weight(), 2.0);
  Rng rng(4);
  const auto ev = g.step(rng);
  EXPECT_EQ(ev.colour, Colour::Black);
  EXPECT_EQ(ev.degree, 1);
  EXPECT_EQ(g.t(), 3u);
  EXPECT_EQ(g.census().n(Colour::White, 1), 1u);
  EXPECT_EQ(g.census().n(Colour::Black, 1), 1u);
}

TEST(TwoColourGrowth, IdentitiesAtEveryStep) {
  std::vector<TwoColourModel> models = {rna_model(), TwoColourModel(1, 2.0 / 3, make_grafting(0, 1)),
                                        TwoColourModel(0, -2.0 / 3, dmax3())};
  for (const auto& m : models) {
    TwoColourGrowth g(m);
    Rng rng(12);
    for (int s = 0; s < 20000; ++s) {
      g.step(rng);
      const auto& c = g.census();
      ASSERT_TRUE(two_colour_identities_hold(c, m)) << s;
      ASSERT_EQ(c.weighted_count(), c.t + 2);
      const double W = m.growth_rate() * static_cast<double>(c.t) + m.b();
      ASSERT_NEAR(g.total_weight(), W, 1e-9 * W);
      ASSERT_NEAR(c.weight_sum(m), W, 1e-9 * W);
      if (m.d_max()) ASSERT_LE(c.max_degree(), *m.d_max());
    }
  }
}

TEST(TwoColourGrowth, RunIsDeterministicAndThinned) {
  Rng a(7), b(7);
  const auto ra = run_two_colour(rna_model(), 5000, a, 1000);
  const auto rb = run_two_colour(rna_model(), 5000, b, 1000);
  EXPECT_EQ(ra, rb);
  ASSERT_EQ(ra.size(), 6u);
  EXPECT_EQ(ra.front().t, 2u);
  EXPECT_EQ(ra.back().t, 5000u);
}

TEST(Reduction, RnaReducesToUniformXZero) {
  const auto r = reduce_to_one_colour(rna_model());
  const auto u = make_uniform(0);
  for (int i = 1; i <= 40; ++i) {
    EXPECT_NEAR(r.w(i), u.w(i), 1e-14);
    for (int j = 1; j <= i + 1; ++j) EXPECT_NEAR(r.w(j, i + 2 - j), u.w(j, i + 2 - j), 1e-14) << i << "," << j;
  }
}

TEST(Reduction, RnaMatchesClosedForm) {
  FixedPointOptions o;
  o.K = 300;
  const auto sol = solve_two_colour(rna_model(), o);
  EXPECT_TRUE(sol.warnings.empty());
  for (int k = 1; k <= 20; ++k) {
    const auto [w, b] = rna_closed_form(k);
    EXPECT_NEAR(sol.white(k), w, 1e-8);
    EXPECT_NEAR(sol.black(k), b, 1e-8);
    EXPECT_NEAR(sol.white(k), oracle::rna_white(k), 1e-8);
    EXPECT_NEAR(sol.white(k) / sol.black(k), k / (k + 2.0), 1e-10);
    EXPECT_NEAR(sol.rho_white[static_cast<std::size_t>(k - 1)] + sol.rho_black[static_cast<std::size_t>(k - 1)],
                sol.reduced.at(k), 1e-10);
  }
  EXPECT_LT(sol.count_deviation, 1e-10);
  EXPECT_LT(sol.weight_deviation, 1e-10);
  EXPECT_LT(sol.black_residual, 1e-10);
  EXPECT_LT(sol.white_residual, 1e-10);
}

TEST(Reduction, WhiteBalanceHoldsIndependently) {
  FixedPointOptions o;
  o.K = 300;
  for (const auto& m : {rna_model(), TwoColourModel(1, 2.0 / 3, make_grafting(0, 1))}) {
    const auto sol = solve_two_colour(m, o);
    for (int k = 1; k <= 40; ++k) EXPECT_NEAR(white_balance(m, sol.e_white, sol.e_black, k), 0.0, 1e-8) << k;
    EXPECT_LT(sol.white_residual, 1e-8);
    EXPECT_LT(sol.black_residual, 1e-8);
  }
}

TEST(Direct, AgreesWithReduction) {
  FixedPointOptions o;
  o.K = 60;
  for (const auto& m : {rna_model(), TwoColourModel(0, -2.0 / 3, dmax3())}) {
    const auto red = solve_two_colour(m, o, TwoColourMethod::Reduction);
    const auto dir = solve_two_colour(m, o, TwoColourMethod::Direct);
    EXPECT_EQ(dir.method, TwoColourMethod::Direct);
    const int top = m.d_max() ? *m.d_max() : 20;
    for (int k = 1; k <= top; ++k) {
      EXPECT_NEAR(dir.white(k), red.white(k), 1e-10) << k;
      EXPECT_NEAR(dir.black(k), red.black(k), 1e-10) << k;
    }
  }
}

TEST(Densities, FromCountLimits) {
  const auto [rw, rb] = densities_from_e({0.1, 0.1}, {0.2, 0.1});
  EXPECT_NEAR(rw[0], 0.2, 1e-15);
  EXPECT_NEAR(rb[0], 0.4, 1e-15);
  EXPECT_NEAR(rw[1] + rb[1], 0.4, 1e-15);
}

TEST(Densities, RnaSumsMatchReducedModel) {
  FixedPointOptions o;
  o.K = 200;
  const auto sol = solve_two_colour(rna_model(), o);
  double total = 0;
  for (std::size_t k = 0; k < sol.rho_white.size(); ++k) total += sol.rho_white[k] + sol.rho_black[k];
  EXPECT_NEAR(total, 1.0, 1e-10);
  for (int k = 1; k <= 20; ++k) EXPECT_NEAR(sol.reduced.at(k), uniform_density(0, k), 1e-10);
}
