// splitgrow: solve, simulate and cross-check vertex-splitting tree models.

#include <CLI11.hpp>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "splitgrow/census_io.hpp"
#include "splitgrow/errors.hpp"
#include "splitgrow/experiment.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace splitgrow;

namespace {

struct Flags {
  std::string config;
  std::optional<std::uint64_t> seed, replicas, t_final, thinning;
  std::optional<int> K, k_check;
  std::optional<double> tol, z_crit;
  std::string out;
  bool force_unsupported = false;
  std::string family, w, table, engine, method;
  std::optional<double> x, alpha, gamma, a, b;
  bool binary = false;
  int rows = 20;
};

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

json model_from_flags(const Flags& f) {
  if (!f.table.empty()) {
    json t = read_json_file(f.table);
    if (t.contains("model")) return t.at("model");
    if (!t.contains("family")) t["family"] = "table";
    return t;
  }
  json m = {{"family", f.family}};
  if (f.family == "preferential" || f.family == "uniform" || f.family == "alpha_class") {
    if (f.x) m["x"] = *f.x;
    if (!f.w.empty()) m["w"] = f.w;
    if (f.a) m["a"] = *f.a;
    if (f.b) m["b"] = *f.b;
    if (f.family == "uniform" && !f.x && f.w.empty() && !f.a && !f.b) m["x"] = 0.0;
  } else if (f.family == "grafting") {
    if (!f.alpha || !f.gamma) throw ConfigError("--family grafting needs --alpha and --gamma");
    m["alpha"] = *f.alpha;
    m["gamma"] = *f.gamma;
  } else if (f.family == "two_colour") {
    throw ConfigError("two-colour models other than 'rna' are configured through --config");
  }
  return m;
}

ExperimentConfig effective_config(const Flags& f) {
  json j = f.config.empty() ? json::object() : read_json_file(f.config);
  if (!f.family.empty() || !f.table.empty()) j["model"] = model_from_flags(f);
  if (!j.contains("model")) throw ConfigError("no model given: use --config, --family or --table");
  if (f.seed) j["seed"] = *f.seed;
  if (f.replicas) j["replicas"] = *f.replicas;
  if (f.t_final) j["t_final"] = *f.t_final;
  if (f.thinning) j["thinning"] = *f.thinning;
  if (f.K) j["K"] = *f.K;
  if (f.k_check) j["k_check"] = *f.k_check;
  if (f.tol) j["tol"] = *f.tol;
  if (f.z_crit) j["z_crit"] = *f.z_crit;
  if (!f.engine.empty()) j["engine"] = f.engine;
  if (!f.method.empty()) j["analytic_method"] = f.method;
  if (f.force_unsupported) j["force_unsupported"] = true;
  if (!f.out.empty()) j["out"] = f.out;
  return parse_config(j);
}

fs::path output_dir(const ExperimentConfig& cfg) {
  fs::path dir = cfg.out.empty() ? fs::path("splitgrow-out") : fs::path(cfg.out);
  fs::create_directories(dir);
  return dir;
}

template <typename Fn>
void write_file(const fs::path& path, Fn&& fn, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  fn(out);
  if (!out) throw Error("write failed for " + path.string());
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_solve(const Flags& f) {
  const auto cfg = effective_config(f);
  const auto spec = parse_model(cfg.model);
  const auto table = analytic_densities(spec, cfg);
  print_warnings(table.warnings);
  if (table.unsupported) std::cout << "# UNSUPPORTED: Case II model, no convergence guarantee\n";
  std::cout << "# " << spec.name() << " method=" << table.method << " K=" << table.K << '\n';
  const int rows = std::min(f.rows, table.K);
  if (spec.two_colour()) {
    const auto [rw, rb] = densities_from_e(table.e_white, table.e_black);
    std::cout << "k,e_white,e_black,rho_white,rho_black\n";
    for (int k = 1; k <= rows; ++k) {
      const auto i = static_cast<std::size_t>(k - 1);
      std::cout << k << ',' << format_double(table.white(k)) << ',' << format_double(table.black(k)) << ','
                << format_double(rw[i]) << ',' << format_double(rb[i]) << '\n';
    }
  } else {
    std::cout << "k,a\n";
    for (int k = 1; k <= rows; ++k) std::cout << k << ',' << format_double(table.at(k)) << '\n';
  }
  if (!cfg.out.empty()) {
    const auto dir = output_dir(cfg);
    write_file(dir / "solution.json", [&](std::ostream& o) { write_solution_json(o, spec, table); });
    write_file(dir / "manifest.json",
               [&](std::ostream& o) { o << manifest(cfg, spec, nullptr, nullptr).dump(2) << '\n'; });
  }
  return 0;
}

void write_simulation(const fs::path& dir, const Flags& f, const ModelSpec& spec, const SimulationResult& sim) {
  write_file(dir / "census.csv", [&](std::ostream& o) { write_census_csv(o, sim, spec.unsupported()); });
  if (f.binary && !sim.one.empty()) {
    write_file(
        dir / "census.bin",
        [&](std::ostream& o) {
          for (const auto& traj : sim.one) {
            for (const auto& c : traj) write_census_binary(o, c);
          }
        },
        std::ios::binary);
  }
}

int cmd_simulate(const Flags& f) {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = effective_config(f);
  const auto spec = parse_model(cfg.model);
  const auto sim = simulate(spec, cfg);
  const auto dir = output_dir(cfg);
  write_simulation(dir, f, spec, sim);
  write_file(dir / "manifest.json", [&](std::ostream& o) { o << manifest(cfg, spec, &sim, nullptr).dump(2) << '\n'; });

  if (spec.unsupported()) std::cout << "# UNSUPPORTED: Case II model, no convergence guarantee\n";
  std::cout << "# " << spec.name() << " replicas=" << cfg.replicas << " t_final=" << cfg.t_final
            << " identities " << (sim.count_deviation == 0 && sim.degree_deviation == 0 && sim.weight_rel_deviation <= 1e-9 ? "ok" : "VIOLATED")
            << '\n';
  if (spec.two_colour()) {
    std::cout << "k,mean_white,stderr_white,mean_black,stderr_black\n";
    for (int k = 1; k <= cfg.k_check; ++k) {
      std::vector<double> xw, xb;
      for (const auto& traj : sim.two) {
        const auto& c = traj.back();
        xw.push_back(static_cast<double>(c.n(Colour::White, k)) / static_cast<double>(c.t));
        xb.push_back(static_cast<double>(c.n(Colour::Black, k)) / static_cast<double>(c.t));
      }
      const auto sw = sample_stats(xw), sb = sample_stats(xb);
      std::cout << k << ',' << format_double(sw.mean) << ',' << format_double(sw.std_error) << ','
                << format_double(sb.mean) << ',' << format_double(sb.std_error) << '\n';
    }
  } else {
    std::cout << "k,mean,stderr\n";
    for (int k = 1; k <= cfg.k_check; ++k) {
      std::vector<double> xs;
      for (const auto& traj : sim.one) {
        xs.push_back(static_cast<double>(traj.back().n(k)) / static_cast<double>(traj.back().t));
      }
      const auto s = sample_stats(xs);
      std::cout << k << ',' << format_double(s.mean) << ',' << format_double(s.std_error) << '\n';
    }
  }
  std::cerr << "runtime " << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
            << " s\n";
  return 0;
}

int cmd_compare(const Flags& f) {
  const auto start = std::chrono::steady_clock::now();
  const auto cfg = effective_config(f);
  const auto spec = parse_model(cfg.model);
  const auto reference = cfg.reference ? parse_model(*cfg.reference) : spec;
  if (reference.two_colour() != spec.two_colour()) throw ConfigError("reference and model differ in colour count");
  const auto table = analytic_densities(reference, cfg);
  print_warnings(table.warnings);
  const auto sim = simulate(spec, cfg);
  const auto report = build_report(table, sim, cfg, spec.two_colour());

  const auto dir = output_dir(cfg);
  write_file(dir / "solution.json", [&](std::ostream& o) { write_solution_json(o, reference, table); });
  write_simulation(dir, f, spec, sim);
  write_file(dir / "report.csv", [&](std::ostream& o) { write_report_csv(o, report, cfg); });
  write_file(dir / "manifest.json", [&](std::ostream& o) { o << manifest(cfg, spec, &sim, &report).dump(2) << '\n'; });

  if (report.unsupported) std::cout << "# UNSUPPORTED: Case II model, no convergence guarantee\n";
  std::cout << "# " << spec.name() << " vs " << reference.name() << " (" << report.method << ")\n";
  if (report.two_colour) {
    std::cout << "k,analytic_white,mean_white,z_white,analytic_black,mean_black,z_black,rho_sum_minus_a,z_density\n";
  } else {
    std::cout << "k,analytic,mean,stderr,z\n";
  }
  for (const auto& r : report.rows) {
    if (r.k > cfg.k_check) break;
    if (report.two_colour) {
      std::cout << r.k << ',' << format_double(r.analytic) << ',' << format_double(r.empirical.mean) << ','
                << format_double(r.z) << ',' << format_double(r.analytic_black) << ','
                << format_double(r.empirical_black.mean) << ',' << format_double(r.z_black) << ','
                << format_double(r.rho_sum - r.reduced_a) << ',' << format_double(r.z_density) << '\n';
    } else {
      std::cout << r.k << ',' << format_double(r.analytic) << ',' << format_double(r.empirical.mean) << ','
                << format_double(r.empirical.std_error) << ',' << format_double(r.z) << '\n';
    }
  }
  std::cout << (report.passed ? "PASS" : "FAIL") << " max|z|=" << format_double(report.max_abs_z)
            << " z_crit=" << format_double(cfg.z_crit) << " k<=" << cfg.k_check << '\n';
  std::cerr << "runtime " << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()
            << " s\n";
  return report.passed ? 0 : 1;
}

int cmd_validate(const Flags& f) {
  const auto cfg = effective_config(f);
  const auto spec = parse_model(cfg.model);
  const WeightModel& m = spec.two_colour() ? spec.two->white() : *spec.one;
  const auto report = validate_model(m);
  std::cout << "model " << spec.name() << '\n';
  std::cout << "fitted w_i = " << format_double(report.fitted.a) << " i + " << format_double(report.fitted.b) << '\n';
  for (const auto& c : report.checks) {
    std::cout << c.name << ' ' << to_string(c.status);
    if (!c.detail.empty()) std::cout << " (" << c.detail << ')';
    std::cout << '\n';
  }
  const auto regime = classify_regime(m);
  std::cout << "regime " << to_string(regime.regime) << " s=" << format_double(regime.s) << '\n';
  if (spec.two_colour()) {
    const auto reduced = reduce_to_one_colour(*spec.two);
    std::cout << "reduced one-colour model " << reduced.name() << " regime " << to_string(classify_regime(reduced).regime)
              << '\n';
  }
  return report.ok() ? 0 : 1;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON experiment config");
  sub->add_option("--seed", f.seed, "Master seed (u64)");
  sub->add_option("--replicas", f.replicas, "Number of replicas");
  sub->add_option("--t-final", f.t_final, "Final time");
  sub->add_option("--thinning", f.thinning, "Snapshot every N steps (0: final only)");
  sub->add_option("--K", f.K, "Truncation degree");
  sub->add_option("--tol", f.tol, "Fixed-point tolerance");
  sub->add_option("--out", f.out, "Output directory");
  sub->add_flag("--force-unsupported", f.force_unsupported, "Run Case II models (outputs are watermarked)");
  sub->add_option("--family", f.family, "preferential | uniform | grafting | rna");
  sub->add_option("--w", f.w, "Splitting weights as a linear expression in i, e.g. \"2i+1\"");
  sub->add_option("--x", f.x, "Offset x of w_i = i + x (uniform family)");
  sub->add_option("--a", f.a, "Slope of w_i = a i + b");
  sub->add_option("--b", f.b, "Intercept of w_i = a i + b");
  sub->add_option("--alpha", f.alpha, "Grafting alpha");
  sub->add_option("--gamma", f.gamma, "Grafting gamma");
  sub->add_option("--table", f.table, "JSON file with a finite table (d_max, entries)");
  sub->add_option("--engine", f.engine, "urn | tree");
  sub->add_option("--method", f.method, "auto | fixed-point | linear | closed-form | direct");
  sub->add_option("--z-crit", f.z_crit, "Compare threshold on |z|");
  sub->add_option("--k-check", f.k_check, "Largest degree checked by compare");
  sub->add_flag("--binary", f.binary, "Also write census.bin");
  sub->add_option("--rows", f.rows, "Rows printed by solve");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vertex-splitting random trees: densities, simulation and cross-checks"};
  app.require_subcommand(1);
  Flags f;
  auto* solve = app.add_subcommand("solve", "Compute limiting degree densities");
  auto* sim = app.add_subcommand("simulate", "Run replicated simulations");
  auto* cmp = app.add_subcommand("compare", "Simulate and compare against the analytic densities");
  auto* val = app.add_subcommand("validate", "Check model conditions and regime");
  for (auto* sub : {solve, sim, cmp, val}) add_common(sub, f);
  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(f);
    if (sim->parsed()) return cmd_simulate(f);
    if (cmp->parsed()) return cmd_compare(f);
    if (val->parsed()) return cmd_validate(f);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
