// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "oracles.hpp"
#include "splitgrow/closed_forms.hpp"
#include "splitgrow/experiment.hpp"
#include "splitgrow/growth.hpp"
#include "splitgrow/solver.hpp"
#include "splitgrow/twocolour.hpp"

using namespace splitgrow;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(const char* id, bool ok, const std::string& detail) {
  std::printf("[%s] %s %s\n", ok ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

FixedPointOptions options(int K, double tol = 1e-13) {
  FixedPointOptions o;
  o.K = K;
  o.tol = tol;
  return o;
}

ExperimentConfig sim_config(const nlohmann::json& model, int k_check, std::uint64_t seed) {
  return parse_config({{"model", model}, {"t_final", 100000}, {"replicas", 32}, {"seed", seed},
                       {"k_check", k_check}, {"z_crit", 5.0}});
}

ExperimentReport run_compare(const ExperimentConfig& cfg, bool two) {
  const auto spec = parse_model(cfg.model);
  return build_report(analytic_densities(spec, cfg), simulate(spec, cfg), cfg, two);
}

const nlohmann::json kDmax3Table = {
    {"family", "table"}, {"d_max", 3}, {"entries", {{1, 2, 1.0}, {1, 3, 0.5}, {2, 2, 1.0}, {2, 3, 1.0}}}};

void ac1() {
  const auto t0 = Clock::now();
  const auto sol = fixed_point_densities(make_preferential({1, 0}), options(400));
  const double dt = seconds_since(t0);
  double err = 0;
  for (int k = 1; k <= 50; ++k) err = std::max(err, std::abs(sol.at(k) - oracle::pa_density(k)));
  report("AC1", err <= 1e-8 && dt < 5.0,
         "preferential w_i=i, k<=50: max err " + fmt("%.3g", err) + ", " + fmt("%.3f", dt) + " s");
}

void ac2() {
  const auto sol = fixed_point_densities(make_grafting(0, 1), options(400));
  double err = 0;
  for (int k = 1; k <= 40; ++k) err = std::max(err, std::abs(sol.at(k) - std::ldexp(1.0, -k)));
  report("AC2", err <= 1e-8, "random recursive, k<=40: max err " + fmt("%.3g", err));
}

void ac3() {
  const auto sol = fixed_point_densities(make_uniform(0), options(400));
  double err = 0;
  for (int k = 1; k <= 30; ++k) err = std::max(err, std::abs(sol.at(k) - oracle::uniform0_density(k)));
  const double c_err = std::abs(uniform_normalizer(0) - (std::exp(2.0) - 1) / 8);
  report("AC3", err <= 1e-8 && c_err <= 1e-12,
         "uniform x=0, k<=30: max err " + fmt("%.3g", err) + "; C(0) err " + fmt("%.3g", c_err));
}

void ac4() {
  const auto m = parse_model(kDmax3Table);
  const auto lin = solve_finite(*m.one);
  const auto fp = fixed_point_densities(*m.one, options(3));
  const double expect[] = {0.25, 0.5, 0.25};
  double err = 0;
  for (int k = 1; k <= 3; ++k) {
    err = std::max(err, std::abs(lin.at(k) - expect[k - 1]));
    err = std::max(err, std::abs(fp.at(k) - expect[k - 1]));
  }
  const auto rep = run_compare(sim_config(kDmax3Table, 3, 101), false);
  report("AC4", err <= 1e-10 && rep.passed,
         "d_max=3 table: solver err " + fmt("%.3g", err) + "; simulation max|z| " + fmt("%.2f", rep.max_abs_z));
}

void ac5() {
  const auto t0 = Clock::now();
  const auto rep = run_compare(sim_config({{"family", "preferential"}, {"w", "i"}}, 6, 202), false);
  const double dt = seconds_since(t0);
  bool ok = rep.passed && dt < 60.0;
  for (int k = 1; k <= 6; ++k) ok = ok && std::abs(rep.rows[k - 1].analytic - oracle::pa_density(k)) <= 1e-8;
  report("AC5", ok, "preferential t=1e5 R=32, k<=6: max|z| " + fmt("%.2f", rep.max_abs_z) + ", " +
                        fmt("%.1f", dt) + " s");
}

void ac6() {
  std::vector<WeightModel> models = {make_preferential({1, 0}), make_preferential({2, 1}), make_uniform(0),
                                     make_uniform(-0.5), make_grafting(0.5, 0.5), make_grafting(0, 1),
                                     *parse_model(kDmax3Table).one};
  std::uint64_t int_dev = 0;
  double w_dev = 0;
  std::size_t steps = 0;
  for (const auto& m : models) {
    const auto& sw = m.splitting();
    for (bool tree : {false, true}) {
      Rng rng(std::hash<std::string>{}(m.name()) + tree);
      auto check = [&](const Census& c, double total) {
        const auto t = static_cast<std::int64_t>(c.t);
        int_dev = std::max<std::uint64_t>(int_dev, std::abs(static_cast<std::int64_t>(c.vertex_sum()) - t));
        int_dev = std::max<std::uint64_t>(int_dev, std::abs(static_cast<std::int64_t>(c.degree_sum()) - (2 * t - 2)));
        const double W = sw(2) * static_cast<double>(c.t) - 2 * sw.a;
        w_dev = std::max(w_dev, std::abs(total - W) / W);
        ++steps;
      };
      if (tree) {
        TreeGrowth g(m, OrderedTree::single_edge());
        for (int s = 0; s < 20000; ++s) {
          g.step(rng);
          check(g.census(), g.total_weight());
        }
      } else {
        UrnGrowth g(m, UrnState::single_edge());
        for (int s = 0; s < 50000; ++s) {
          g.step(rng);
          check(g.census(), g.total_weight());
        }
      }
    }
  }
  // Two-colour: sum (3 n_white + 2 n_black) = t + 2 and W = (a - b) t + b.
  for (const auto& m : {rna_model(), TwoColourModel(1, 2.0 / 3, make_grafting(0, 1))}) {
    TwoColourGrowth g(m);
    Rng rng(6);
    for (int s = 0; s < 50000; ++s) {
      g.step(rng);
      const auto& c = g.census();
      int_dev = std::max<std::uint64_t>(int_dev, c.weighted_count() > c.t + 2 ? c.weighted_count() - c.t - 2
                                                                             : c.t + 2 - c.weighted_count());
      const double W = m.growth_rate() * static_cast<double>(c.t) + m.b();
      w_dev = std::max(w_dev, std::abs(g.total_weight() - W) / W);
      ++steps;
    }
  }
  report("AC6", int_dev == 0 && w_dev <= 1e-9,
         std::to_string(steps) + " steps: integer deviation " + std::to_string(int_dev) + ", weight rel dev " +
             fmt("%.3g", w_dev));
}

void ac7() {
  const auto m = make_uniform(0.25);
  const auto g = make_grafting(0.5, 0.5);
  std::size_t mismatches = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto& model = seed % 2 ? g : m;
    UrnGrowth urn(model, UrnState::single_edge());
    TreeGrowth tree(model, OrderedTree::single_edge());
    Rng decisions = Rng::for_replica(seed, 0), arrangements = Rng::for_replica(seed, 1);
    for (int s = 0; s < 10000; ++s) {
      tree.apply(urn.step(decisions), arrangements);
      auto a = urn.census().counts, b = tree.census().counts;
      while (a.size() > 1 && a.back() == 0) a.pop_back();
      while (b.size() > 1 && b.back() == 0) b.pop_back();
      if (a != b) {
        ++mismatches;
        break;
      }
    }
  }
  report("AC7", mismatches == 0, "100 seeds x 1e4 coupled steps: " + std::to_string(mismatches) + " mismatching seeds");
}

void ac8() {
  std::mt19937_64 gen(2718);
  std::vector<WeightModel> models;
  for (int n = 0; n < 25; ++n) {
    const auto t = oracle::random_table(gen);
    models.push_back(make_table(t.d_max, t.entries));
  }
  for (auto&& m : {make_preferential({1, 0}), make_uniform(0), make_uniform(1), make_grafting(0.5, 0.5),
                   make_grafting(0.5, 1)}) {
    models.push_back(m);
  }
  double worst = 0;
  for (const auto& m : models) {
    std::vector<double> prev;
    auto o = options(256);
    o.observer = [&](std::size_t, std::span<const double> a) {
      if (prev.empty()) prev.assign(a.size(), 0.0);
      for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, prev[k] - a[k]);
      prev.assign(a.begin(), a.end());
    };
    fixed_point_densities(m, o);
  }
  report("AC8", worst <= 0.0,
         std::to_string(models.size()) + " models (25 random tables): largest decrease " + fmt("%.3g", worst));
}

void ac9() {
  const auto sol = solve_two_colour(rna_model(), options(300));
  double err = 0, rho_err = 0;
  for (int k = 1; k <= 20; ++k) {
    err = std::max(err, std::abs(sol.white(k) - oracle::rna_white(k)));
    err = std::max(err, std::abs(sol.black(k) - oracle::rna_black(k)));
    const auto i = static_cast<std::size_t>(k - 1);
    rho_err = std::max(rho_err, std::abs(sol.rho_white[i] + sol.rho_black[i] - oracle::uniform0_density(k)));
  }
  const auto rep = run_compare(sim_config({{"family", "rna"}}, 5, 303), true);
  report("AC9", err <= 1e-8 && rho_err <= 1e-10 && rep.passed,
         "RNA k<=20: e err " + fmt("%.3g", err) + ", rho sum err " + fmt("%.3g", rho_err) +
             "; simulation k<=5 max|z| " + fmt("%.2f", rep.max_abs_z));
}

void ac10() {
  const std::pair<double, double> cases[] = {{0, 0.5}, {0.5, 0.5}, {0.5, 1}};
  double err = 0;
  for (auto [alpha, gamma] : cases) {
    const auto sol = fixed_point_densities(make_grafting(alpha, gamma), options(512));
    for (int k = 1; k <= 30; ++k) err = std::max(err, std::abs(sol.at(k) - grafting_density(alpha, gamma, k)));
  }
  const auto sol = fixed_point_densities(make_grafting(0.5, 1), options(512, 1e-15));
  const double rate = (1 - 0.5) / (2 - 0.5);
  double lr_err = 0;
  for (int k = 2; k <= 12; ++k) {
    lr_err = std::max(lr_err, std::abs(std::log(sol.at(k + 1) / sol.at(k)) - std::log(rate)));
  }
  report("AC10", err <= 1e-8 && lr_err <= 1e-6,
         "grafting k<=30: max err " + fmt("%.3g", err) + "; gamma=1 log-ratio err, 2<=k<=12: " + fmt("%.3g", lr_err));
}

}  // namespace

int main() {
  const std::pair<const char*, void (*)()> criteria[] = {{"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4},
                                                         {"AC5", ac5}, {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8},
                                                         {"AC9", ac9}, {"AC10", ac10}};
  for (const auto& [id, fn] : criteria) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, std::string("threw: ") + e.what());
    }
  }
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
