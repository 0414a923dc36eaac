#include <gtest/gtest.h>

#include <numeric>

#include "oracles.hpp"
#include "splitgrow/growth.hpp"
#include "splitgrow/sampler.hpp"

using namespace splitgrow;

TEST(WeightedSampler, TotalTracksUpdates) {
  WeightedSampler s(5);
  std::vector<double> w = {0.5, 0, 2, 1.25, 3};
  for (std::size_t i = 0; i < w.size(); ++i) s.set(i, w[i]);
  EXPECT_DOUBLE_EQ(s.total(), 6.75);
  s.add(1, 4);
  s.set(4, 0);
  EXPECT_DOUBLE_EQ(s.total(), 7.75);
  s.set(11, 1);  // grows the range
  EXPECT_EQ(s.size(), 12u);
  EXPECT_DOUBLE_EQ(s.total(), 8.75);
}

TEST(WeightedSampler, FindRespectsIntervals) {
  WeightedSampler s(4);
  s.set(0, 1);
  s.set(1, 0);
  s.set(2, 2);
  s.set(3, 1);
  EXPECT_EQ(s.find(0.0), 0u);
  EXPECT_EQ(s.find(0.249), 0u);
  EXPECT_EQ(s.find(0.25), 2u);
  EXPECT_EQ(s.find(0.74), 2u);
  EXPECT_EQ(s.find(0.76), 3u);
}

TEST(WeightedSampler, EmptyIsDegenerate) {
  WeightedSampler s(3);
  Rng rng(1);
  EXPECT_THROW(s.sample(rng), DegeneracyError);
}

TEST(WeightedSampler, ChiSquareOnFixedWeights) {
  const std::vector<double> w = {1, 0, 3, 0.5, 2.5, 7, 0, 1};
  WeightedSampler s(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) s.set(i, w[i]);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<double> p;
  for (double x : w) p.push_back(x / total);
  std::vector<std::uint64_t> counts(w.size(), 0);
  Rng rng(31);
  for (int n = 0; n < 1'000'000; ++n) ++counts[s.sample(rng)];
  EXPECT_EQ(counts[1], 0u);
  EXPECT_EQ(counts[6], 0u);
  EXPECT_LT(oracle::chi_square_statistic(counts, p), oracle::chi_square_critical(5, 1e-3));
}

TEST(SampleVertex, SingleEdgeIsFair) {
  TreeGrowth g(make_preferential({1, 0}), OrderedTree::single_edge());
  Rng rng(5);
  std::uint64_t zero = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) zero += g.sample_vertex(rng) == 0;
  EXPECT_LT(std::abs(oracle::binomial_z(zero, n, 0.5)), 4.0);
}

TEST(SampleVertex, UrnDegreeRatio) {
  // n_1 = 2, n_2 = 1, w_i = i: W = 4, P(degree 2) = 2/4.
  UrnGrowth g(make_preferential({1, 0}), UrnState::from_counts({0, 2, 1}));
  EXPECT_DOUBLE_EQ(g.total_weight(), 4.0);
  Rng rng(8);
  std::uint64_t hits = 0;
  const std::uint64_t n = 1'000'000;
  for (std::uint64_t i = 0; i < n; ++i) hits += g.sample_degree(rng) == 2;
  EXPECT_LT(std::abs(oracle::binomial_z(hits, n, 0.5)), 4.0);
}

TEST(SampleVertex, TreeChiSquareOnMixedDegrees) {
  // Star with centre degree 3 plus a pendant path: degrees {3, 1, 1, 2, 1}.
  auto tree = OrderedTree::from_edges(5, {{0, 1}, {0, 2}, {0, 3}, {3, 4}});
  TreeGrowth g(make_preferential({1, 1}), std::move(tree));
  const std::vector<double> w = {4, 2, 2, 3, 2};
  std::vector<double> p;
  for (double x : w) p.push_back(x / 13.0);
  std::vector<std::uint64_t> counts(5, 0);
  Rng rng(77);
  for (int n = 0; n < 1'000'000; ++n) ++counts[g.sample_vertex(rng)];
  EXPECT_LT(oracle::chi_square_statistic(counts, p), oracle::chi_square_critical(4, 1e-3));
}

TEST(SplitSizes, UniformDegreeFiveIsUniformOverSixPairs) {
  const auto m = make_uniform(0);
  double total = 0;
  for (int k = 1; k <= 6; ++k) {
    EXPECT_NEAR(split_size_probability(m, 5, k), 1.0 / 6, 1e-15);
    total += split_size_probability(m, 5, k);
  }
  EXPECT_NEAR(total, 1.0, 1e-15);
}

TEST(SplitSizes, UniformDegreeFourMiddlePair) {
  const auto m = make_uniform(0);
  EXPECT_NEAR(m.w(3, 3), 0.4, 1e-15);
  EXPECT_NEAR(split_size_probability(m, 4, 3), 0.2, 1e-15);
}

TEST(SplitSizes, PreferentialOnlyLeafPairs) {
  const auto m = make_preferential({2, 1});
  for (int i = 1; i <= 20; ++i) {
    EXPECT_NEAR(split_size_probability(m, i, 1), 0.5, 1e-15);
    EXPECT_NEAR(split_size_probability(m, i, i + 1), 0.5, 1e-15);
    for (int k = 2; k <= i; ++k) EXPECT_EQ(split_size_probability(m, i, k), 0.0);
  }
}

TEST(SplitSizes, NormalizedForRandomTables) {
  std::mt19937_64 gen(4);
  for (int n = 0; n < 30; ++n) {
    const auto t = oracle::random_table(gen);
    const auto m = make_table(t.d_max, t.entries);
    for (int i = 1; i <= t.d_max; ++i) {
      double total = 0;
      for (int k = 1; k <= i + 1; ++k) total += split_size_probability(m, i, k);
      EXPECT_NEAR(total, 1.0, 1e-12);
    }
  }
}

TEST(SplitSizes, ZeroWeightDegreeIsInvalid) {
  const auto m = make_table(3, {{1, 2, 1.0}, {1, 3, 0.5}, {2, 2, 1.0}, {2, 3, 1.0}});
  Rng rng(1);
  EXPECT_THROW(sample_split_sizes(4, m, rng), InvalidDegree);
}

TEST(SplitSizes, ChiSquareAgainstExactLaw) {
  const auto m = make_grafting(0.5, 0.5);
  const auto u = make_uniform(0.5);
  Rng rng(123);
  for (const auto* model : {&m, &u}) {
    SplitSizeSampler sampler(*model);
    for (int i : {3, 6}) {
      std::vector<std::uint64_t> counts(static_cast<std::size_t>(i + 1), 0);
      std::vector<double> p;
      int support = 0;
      for (int k = 1; k <= i + 1; ++k) {
        p.push_back(split_size_probability(*model, i, k));
        support += p.back() > 0;
      }
      for (int n = 0; n < 1'000'000; ++n) ++counts[static_cast<std::size_t>(sampler.sample(i, rng) - 1)];
      EXPECT_LT(oracle::chi_square_statistic(counts, p), oracle::chi_square_critical(support - 1, 1e-3))
          << model->name() << " i=" << i;
    }
  }
}
