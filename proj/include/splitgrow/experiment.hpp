#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "splitgrow/growth.hpp"
#include "splitgrow/solver.hpp"
#include "splitgrow/twocolour.hpp"
#include "splitgrow/weights.hpp"

namespace splitgrow {

// Model description as it appears under "model" in a config document:
//   {"family": "preferential", "a": 1, "b": 0}        or {"family": "preferential", "w": "2i+1"}
//   {"family": "uniform", "x": 0}                      or {"family": "uniform", "a": 0, "b": 1}
//   {"family": "grafting", "alpha": 0.5, "gamma": 0.5}
//   {"family": "alpha_class", "a": 1, "b": 0, "M": 3, "alpha": [0.5], "head": [[1, 2, 1], ...]}
//   {"family": "table", "d_max": 3, "entries": [[1, 2, 1], [1, 3, 0.5], ...]}
//   {"family": "two_colour", "a": 1, "b": 0, "white": {"family": "uniform", "x": 1}}
//   {"family": "rna"}
struct ModelSpec {
  nlohmann::json raw;
  std::string family;
  std::optional<WeightModel> one;
  std::optional<TwoColourModel> two;

  bool two_colour() const { return two.has_value(); }
  std::string name() const;
  /// Case II: the convergence hypothesis fails; runs need an explicit override.
  bool unsupported() const;
};

ModelSpec parse_model(const nlohmann::json& j);

/// Parses a linear expression in i such as "i", "2*i + 1", "3i-0.5" or "1".
SplittingWeights parse_linear_expression(const std::string& text);

struct ExperimentConfig {
  nlohmann::json model;
  /// Analytic side of compare when it should differ from the simulated model.
  std::optional<nlohmann::json> reference;
  std::uint64_t t_final = 100000;
  std::uint64_t replicas = 32;
  std::uint64_t thinning = 0;
  int K = 512;
  double tol = 1e-13;
  std::uint64_t max_iter = 1'000'000;
  std::uint64_t seed = 1;
  std::string engine = "urn";  // urn | tree
  double z_crit = 5.0;
  int k_check = 8;
  std::string analytic_method = "auto";  // auto | fixed-point | linear | closed-form | direct
  bool force_unsupported = false;
  std::string out;
};

ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& c);
/// Hex SHA-256 of the canonical (sorted-key, compact) JSON form of the config.
std::string config_digest(const ExperimentConfig& c);

struct AnalyticTable {
  std::string method;  // fixed-point | linear | closed-form | direct
  bool unsupported = false;
  int K = 0;
  std::vector<double> a;  // one-colour a_k, or rho_white + rho_black for two-colour
  std::vector<double> e_white, e_black;
  std::optional<DensitySolution> solution;
  std::optional<TwoColourSolution> two;
  std::vector<std::string> warnings;

  double at(int k) const { return get(a, k); }
  double white(int k) const { return get(e_white, k); }
  double black(int k) const { return get(e_black, k); }

 private:
  static double get(const std::vector<double>& v, int k) {
    return k >= 1 && static_cast<std::size_t>(k) <= v.size() ? v[static_cast<std::size_t>(k - 1)] : 0.0;
  }
};

AnalyticTable analytic_densities(const ModelSpec& spec, const ExperimentConfig& cfg);

/// Per-replica snapshot trajectories; exactly one of the two vectors is filled.
struct SimulationResult {
  std::vector<std::vector<Census>> one;
  std::vector<std::vector<TwoColourCensus>> two;
  /// Largest deviation of the exact identities over all snapshots (0 when they hold).
  std::uint64_t count_deviation = 0;
  std::uint64_t degree_deviation = 0;
  double weight_rel_deviation = 0.0;
};

/// Worker count: SPLITGROW_THREADS if set, else hardware concurrency.
unsigned worker_count();

/// Replica r runs on Rng::for_replica(cfg.seed, r); results are stored in index order.
SimulationResult simulate(const ModelSpec& spec, const ExperimentConfig& cfg);

struct SampleStats {
  double mean = 0.0;
  double std_error = 0.0;
};
SampleStats sample_stats(const std::vector<double>& xs);
/// (empirical - analytic) / stderr; 0 when both the difference and stderr vanish.
double z_score(double empirical, double analytic, double std_error);

struct ReportRow {
  int k = 0;
  double analytic = 0.0;
  SampleStats empirical;
  double z = 0.0;
  // Two-colour only.
  double analytic_black = 0.0;
  SampleStats empirical_black;
  double z_black = 0.0;
  double rho_sum = 0.0;  // analytic rho_white + rho_black
  double reduced_a = 0.0;
  SampleStats empirical_density;  // (n_white + n_black) / vertex count
  double z_density = 0.0;
};

struct ExperimentReport {
  bool two_colour = false;
  std::string method;
  bool unsupported = false;
  std::vector<ReportRow> rows;
  double max_abs_z = 0.0;  // over k <= k_check
  bool passed = true;
};

/// Joins analytic and empirical tables for k = 1..max(k_check, largest observed degree capped at K).
ExperimentReport build_report(const AnalyticTable& analytic, const SimulationResult& sim,
                              const ExperimentConfig& cfg, bool two_colour);

void write_solution_json(std::ostream& out, const ModelSpec& spec, const AnalyticTable& table);
void write_census_csv(std::ostream& out, const SimulationResult& sim, bool unsupported);
void write_report_csv(std::ostream& out, const ExperimentReport& report, const ExperimentConfig& cfg);
nlohmann::json manifest(const ExperimentConfig& cfg, const ModelSpec& spec, const SimulationResult* sim,
                        const ExperimentReport* report);

}  // namespace splitgrow
