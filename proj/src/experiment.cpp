#include "splitgrow/experiment.hpp"

#include <openssl/evp.h>

#include <Eigen/Core>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <ostream>
#include <thread>

#include "splitgrow/census_io.hpp"
#include "splitgrow/closed_forms.hpp"
#include "splitgrow/errors.hpp"

namespace splitgrow {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "1.0.0";

double number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j.at(key).is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
  return j.at(key).get<double>();
}

double required_number(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("missing '") + key + "'");
  return number(j, key, 0.0);
}

std::vector<std::tuple<int, int, double>> parse_entries(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array()) throw ConfigError(std::string("'") + key + "' must be a list");
  std::vector<std::tuple<int, int, double>> out;
  for (const auto& e : j.at(key)) {
    if (!e.is_array() || e.size() != 3) throw ConfigError("table entries are [i, j, weight] triples");
    out.emplace_back(e[0].get<int>(), e[1].get<int>(), e[2].get<double>());
  }
  return out;
}

SplittingWeights parse_splitting(const json& j, SplittingWeights fallback) {
  if (j.contains("w")) return parse_linear_expression(j.at("w").get<std::string>());
  return {number(j, "a", fallback.a), number(j, "b", fallback.b)};
}

WeightModel parse_one_colour(const json& j) {
  const std::string family = j.value("family", "");
  if (family == "preferential") return make_preferential(parse_splitting(j, {1.0, 0.0}));
  if (family == "uniform") {
    if (j.contains("x")) return make_uniform(number(j, "x", 0.0));
    return make_uniform_linear(parse_splitting(j, {1.0, 0.0}));
  }
  if (family == "grafting") return make_grafting(required_number(j, "alpha"), required_number(j, "gamma"));
  if (family == "table") return make_table(static_cast<int>(required_number(j, "d_max")), parse_entries(j, "entries"));
  if (family == "alpha_class") {
    const int M = static_cast<int>(required_number(j, "M"));
    if (!j.contains("alpha")) throw ConfigError("alpha_class needs 'alpha'");
    std::vector<double> alpha = j.at("alpha").is_array() ? j.at("alpha").get<std::vector<double>>()
                                                         : std::vector<double>{j.at("alpha").get<double>()};
    std::vector<std::tuple<int, int, double>> head;
    if (j.contains("head")) head = parse_entries(j, "head");
    auto dense = std::make_shared<std::vector<std::tuple<int, int, double>>>(std::move(head));
    PartitionWeights head_pw(
        [dense](int lo, int hi) {
          for (const auto& [i, k, w] : *dense) {
            if (std::min(i, k) == lo && std::max(i, k) == hi) return w;
          }
          return 0.0;
        },
        std::nullopt);
    return make_alpha_class(parse_splitting(j, {1.0, 0.0}), std::move(alpha), M, std::move(head_pw));
  }
  throw ConfigError("unknown model family '" + family + "'");
}

}  // namespace

SplittingWeights parse_linear_expression(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw ConfigError("empty weight expression");
  SplittingWeights sw{0.0, 0.0};
  std::size_t pos = 0;
  while (pos < s.size()) {
    double sign = 1.0;
    if (s[pos] == '+' || s[pos] == '-') {
      sign = s[pos] == '-' ? -1.0 : 1.0;
      ++pos;
    } else if (pos != 0) {
      throw ConfigError("cannot parse weight expression '" + text + "'");
    }
    std::size_t end = s.find_first_of("+-", pos + 1);
    // A sign right after an exponent marker belongs to the number.
    while (end != std::string::npos && (s[end - 1] == 'e' || s[end - 1] == 'E')) end = s.find_first_of("+-", end + 1);
    std::string term = s.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
    pos = end == std::string::npos ? s.size() : end;
    bool linear = false;
    if (const auto at = term.find('i'); at != std::string::npos) {
      linear = true;
      term.erase(at, 1);
      if (!term.empty() && term.back() == '*') term.pop_back();
      if (!term.empty() && term.front() == '*') term.erase(0, 1);
    }
    double value = 1.0;
    if (!term.empty()) {
      const auto [ptr, ec] = std::from_chars(term.data(), term.data() + term.size(), value);
      if (ec != std::errc() || ptr != term.data() + term.size()) {
        throw ConfigError("cannot parse weight expression '" + text + "'");
      }
    } else if (!linear) {
      throw ConfigError("cannot parse weight expression '" + text + "'");
    }
    (linear ? sw.a : sw.b) += sign * value;
  }
  return sw;
}

std::string ModelSpec::name() const {
  if (two) return "two_colour(a=" + format_double(two->a()) + ",b=" + format_double(two->b()) + "," + two->white().name() + ")";
  return one->name();
}

bool ModelSpec::unsupported() const {
  const WeightModel& m = two ? two->white() : *one;
  return classify_regime(m).regime == Regime::CaseII;
}

ModelSpec parse_model(const json& j) {
  if (!j.is_object()) throw ConfigError("model must be an object");
  ModelSpec spec;
  spec.raw = j;
  spec.family = j.value("family", "");
  if (spec.family == "rna") {
    spec.two = rna_model();
  } else if (spec.family == "two_colour") {
    if (!j.contains("white")) throw ConfigError("two_colour model needs a 'white' partition model");
    spec.two = TwoColourModel(required_number(j, "a"), required_number(j, "b"), parse_one_colour(j.at("white")));
  } else {
    spec.one = parse_one_colour(j);
  }
  return spec;
}

ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known = {
      "model", "reference", "t_final", "replicas", "thinning", "K", "tol", "max_iter", "seed",
      "engine", "z_crit", "k_check", "analytic_method", "force_unsupported", "out"};
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) throw ConfigError("unknown config key '" + key + "'");
  }
  ExperimentConfig c;
  try {
    if (j.contains("model")) c.model = j.at("model");
    if (j.contains("reference")) c.reference = j.at("reference");
    c.t_final = j.value("t_final", c.t_final);
    c.replicas = j.value("replicas", c.replicas);
    c.thinning = j.value("thinning", c.thinning);
    c.K = j.value("K", c.K);
    c.tol = j.value("tol", c.tol);
    c.max_iter = j.value("max_iter", c.max_iter);
    c.seed = j.value("seed", c.seed);
    c.engine = j.value("engine", c.engine);
    c.z_crit = j.value("z_crit", c.z_crit);
    c.k_check = j.value("k_check", c.k_check);
    c.analytic_method = j.value("analytic_method", c.analytic_method);
    c.force_unsupported = j.value("force_unsupported", c.force_unsupported);
    c.out = j.value("out", c.out);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (c.replicas < 1) throw ConfigError("replicas must be at least 1");
  if (c.t_final <= 2) throw ConfigError("t_final must exceed the initial size 2");
  if (c.engine != "urn" && c.engine != "tree") throw ConfigError("engine must be 'urn' or 'tree'");
  if (c.K < 2) throw ConfigError("K must be at least 2");
  return c;
}

json to_json(const ExperimentConfig& c) {
  json j = {{"model", c.model},
            {"t_final", c.t_final},
            {"replicas", c.replicas},
            {"thinning", c.thinning},
            {"K", c.K},
            {"tol", c.tol},
            {"max_iter", c.max_iter},
            {"seed", c.seed},
            {"engine", c.engine},
            {"z_crit", c.z_crit},
            {"k_check", c.k_check},
            {"analytic_method", c.analytic_method},
            {"force_unsupported", c.force_unsupported}};
  if (c.reference) j["reference"] = *c.reference;
  return j;
}

std::string config_digest(const ExperimentConfig& c) {
  // The output directory does not affect any result, so it stays out of the digest.
  const std::string text = to_json(c).dump();
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

namespace {

void require_supported(const ModelSpec& spec, const ExperimentConfig& cfg) {
  if (spec.unsupported() && !cfg.force_unsupported) {
    throw RegimeError("model " + spec.name() +
                      " is in Case II (inf i w_{1,i+1} = 0); rerun with --force-unsupported to proceed "
                      "without a convergence guarantee");
  }
}

FixedPointOptions solver_options(const ExperimentConfig& cfg) {
  FixedPointOptions o;
  o.K = cfg.K;
  o.tol = cfg.tol;
  o.max_iter = cfg.max_iter;
  o.force_unsupported = cfg.force_unsupported;
  return o;
}

std::vector<double> closed_form_table(const ModelSpec& spec, int K, bool& unsupported) {
  const std::string& fam = spec.family;
  const json& j = spec.raw;
  std::vector<double> a(static_cast<std::size_t>(K));
  auto fill = [&](auto fn) {
    for (int k = 1; k <= K; ++k) a[static_cast<std::size_t>(k - 1)] = fn(k);
  };
  if (fam == "preferential") {
    const auto sw = spec.one->splitting();
    fill([&](int k) { return pref_attachment_density(sw, k); });
  } else if (fam == "uniform") {
    const auto sw = spec.one->splitting();
    if (sw.a == 0) {
      unsupported = true;
      fill([](int k) { return uniform_constant_density(k); });
    } else {
      const double x = sw.offset();
      fill([x](int k) { return uniform_density(x, k); });
    }
  } else if (fam == "grafting") {
    const double alpha = j.at("alpha").get<double>(), gamma = j.at("gamma").get<double>();
    fill([&](int k) { return grafting_density(alpha, gamma, k); });
  } else {
    throw ConfigError("no closed form for family '" + fam + "'");
  }
  return a;
}

}  // namespace

AnalyticTable analytic_densities(const ModelSpec& spec, const ExperimentConfig& cfg) {
  require_supported(spec, cfg);
  AnalyticTable t;
  t.unsupported = spec.unsupported();
  const auto opts = solver_options(cfg);
  std::string method = cfg.analytic_method;

  if (spec.two_colour()) {
    const TwoColourModel& m = *spec.two;
    const bool rna = spec.family == "rna" ||
                     (m.a() == 1 && m.b() == 0 && m.white().family() == Family::Uniform &&
                      m.white().splitting().b == 1 && m.white().splitting().a == 1);
    if (method == "auto") method = "fixed-point";
    // The reduced one-colour solution backs the rho sum cross-check column.
    t.solution = fixed_point_densities(reduce_to_one_colour(m), opts);
    if (method == "closed-form") {
      if (!rna) throw ConfigError("two-colour closed form exists only for the RNA weights");
      t.K = cfg.K;
      for (int k = 1; k <= t.K; ++k) {
        const auto [w, b] = rna_closed_form(k);
        t.e_white.push_back(w);
        t.e_black.push_back(b);
      }
    } else if (method == "fixed-point" || method == "direct") {
      t.two = solve_two_colour(m, opts, method == "direct" ? TwoColourMethod::Direct : TwoColourMethod::Reduction);
      t.K = t.two->K;
      t.e_white = t.two->e_white;
      t.e_black = t.two->e_black;
      t.warnings = t.two->warnings;
    } else {
      throw ConfigError("analytic method '" + method + "' does not apply to two-colour models");
    }
    const auto [rw, rb] = densities_from_e(t.e_white, t.e_black);
    t.a.resize(rw.size());
    for (std::size_t i = 0; i < rw.size(); ++i) t.a[i] = rw[i] + rb[i];
    t.method = method;
    return t;
  }

  const WeightModel& m = *spec.one;
  if (method == "auto") method = m.d_max() ? "linear" : "fixed-point";
  if (method == "closed-form") {
    t.K = cfg.K;
    t.a = closed_form_table(spec, t.K, t.unsupported);
  } else if (method == "linear") {
    t.solution = solve_finite(m, cfg.tol < 1e-10 ? 1e-10 : cfg.tol);
  } else if (method == "fixed-point") {
    t.solution = fixed_point_densities(m, opts);
  } else {
    throw ConfigError("unknown analytic method '" + method + "'");
  }
  if (t.solution) {
    t.K = t.solution->K;
    t.a = t.solution->a;
    t.warnings = t.solution->warnings;
  }
  t.method = method;
  return t;
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("SPLITGROW_THREADS")) {
    unsigned cap = 0;
    const auto [ptr, ec] = std::from_chars(env, env + std::char_traits<char>::length(env), cap);
    if (ec == std::errc() && cap > 0) n = cap;
  }
  return n;
}

SimulationResult simulate(const ModelSpec& spec, const ExperimentConfig& cfg) {
  require_supported(spec, cfg);
  SimulationResult res;
  const std::size_t R = cfg.replicas;
  if (spec.two_colour()) {
    res.two.resize(R);
  } else {
    res.one.resize(R);
  }
  std::vector<std::exception_ptr> errors(R);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < R; r = next++) {
      try {
        Rng rng = Rng::for_replica(cfg.seed, r);
        if (spec.two_colour()) {
          res.two[r] = run_two_colour(*spec.two, cfg.t_final, rng, cfg.thinning);
        } else {
          GrowthState init = cfg.engine == "tree" ? GrowthState(OrderedTree::single_edge())
                                                  : GrowthState(UrnState::single_edge());
          res.one[r] = run(*spec.one, std::move(init), cfg.t_final, rng, {cfg.thinning});
        }
      } catch (...) {
        errors[r] = std::current_exception();
      }
    }
  };
  const unsigned n = std::min<std::size_t>(worker_count(), R);
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  auto absdiff = [](std::uint64_t x, std::uint64_t y) { return x > y ? x - y : y - x; };
  for (const auto& traj : res.one) {
    const auto& sw = spec.one->splitting();
    for (const auto& c : traj) {
      res.count_deviation = std::max(res.count_deviation, absdiff(c.vertex_sum(), c.t));
      res.degree_deviation = std::max(res.degree_deviation, absdiff(c.degree_sum(), 2 * c.t - 2));
      const double expected = sw(2) * static_cast<double>(c.t) - 2 * sw.a;
      const double scale = std::max(1.0, std::abs(expected));
      res.weight_rel_deviation = std::max({res.weight_rel_deviation, std::abs(c.total_weight - expected) / scale,
                                           std::abs(c.weight_sum(sw) - expected) / scale});
    }
  }
  for (const auto& traj : res.two) {
    for (const auto& c : traj) {
      res.count_deviation = std::max(res.count_deviation, absdiff(c.weighted_count(), c.t + 2));
      const double expected = spec.two->growth_rate() * static_cast<double>(c.t) + spec.two->b();
      res.weight_rel_deviation =
          std::max(res.weight_rel_deviation, std::abs(c.weight_sum(*spec.two) - expected) / std::max(1.0, std::abs(expected)));
    }
  }
  return res;
}

SampleStats sample_stats(const std::vector<double>& xs) {
  SampleStats s;
  if (xs.empty()) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return s;
  double ss = 0.0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.std_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  return s;
}

double z_score(double empirical, double analytic, double std_error) {
  const double diff = empirical - analytic;
  if (std_error > 0) return diff / std_error;
  if (diff == 0) return 0.0;
  return diff > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

ExperimentReport build_report(const AnalyticTable& analytic, const SimulationResult& sim,
                              const ExperimentConfig& cfg, bool two_colour) {
  ExperimentReport rep;
  rep.two_colour = two_colour;
  rep.method = analytic.method;
  rep.unsupported = analytic.unsupported;
  int observed = 0;
  for (const auto& traj : sim.one) observed = std::max(observed, traj.back().max_degree());
  for (const auto& traj : sim.two) observed = std::max(observed, traj.back().max_degree());
  const int k_max = std::max(cfg.k_check, std::min(observed, analytic.K));

  auto note_z = [&](int k, double z) {
    if (k > cfg.k_check) return;
    const double az = std::abs(z);
    if (std::isnan(az) || az > cfg.z_crit) rep.passed = false;
    if (!std::isnan(az)) rep.max_abs_z = std::max(rep.max_abs_z, az);
  };

  for (int k = 1; k <= k_max; ++k) {
    ReportRow row;
    row.k = k;
    std::vector<double> xs, xb, xd;
    if (!two_colour) {
      for (const auto& traj : sim.one) {
        const auto& c = traj.back();
        xs.push_back(static_cast<double>(c.n(k)) / static_cast<double>(c.t));
      }
      row.analytic = analytic.at(k);
      row.empirical = sample_stats(xs);
      row.z = z_score(row.empirical.mean, row.analytic, row.empirical.std_error);
      note_z(k, row.z);
    } else {
      for (const auto& traj : sim.two) {
        const auto& c = traj.back();
        const auto t = static_cast<double>(c.t);
        xs.push_back(static_cast<double>(c.n(Colour::White, k)) / t);
        xb.push_back(static_cast<double>(c.n(Colour::Black, k)) / t);
        xd.push_back(static_cast<double>(c.n(Colour::White, k) + c.n(Colour::Black, k)) /
                     static_cast<double>(c.vertex_count()));
      }
      row.analytic = analytic.white(k);
      row.analytic_black = analytic.black(k);
      row.rho_sum = analytic.at(k);
      row.reduced_a = analytic.solution ? analytic.solution->at(k) : 0.0;
      row.empirical = sample_stats(xs);
      row.empirical_black = sample_stats(xb);
      row.empirical_density = sample_stats(xd);
      row.z = z_score(row.empirical.mean, row.analytic, row.empirical.std_error);
      row.z_black = z_score(row.empirical_black.mean, row.analytic_black, row.empirical_black.std_error);
      row.z_density = z_score(row.empirical_density.mean, row.rho_sum, row.empirical_density.std_error);
      note_z(k, row.z);
      note_z(k, row.z_black);
      note_z(k, row.z_density);
    }
    rep.rows.push_back(row);
  }
  return rep;
}

namespace {

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json vector_json(const std::vector<double>& v) {
  json arr = json::array();
  for (double x : v) arr.push_back(number_or_null(x));
  return arr;
}

}  // namespace

void write_solution_json(std::ostream& out, const ModelSpec& spec, const AnalyticTable& t) {
  json j = {{"model", spec.name()}, {"family", spec.family}, {"method", t.method}, {"K", t.K},
            {"unsupported", t.unsupported}, {"warnings", t.warnings}};
  if (spec.two_colour()) {
    const auto [rw, rb] = densities_from_e(t.e_white, t.e_black);
    j["e_white"] = vector_json(t.e_white);
    j["e_black"] = vector_json(t.e_black);
    j["rho_white"] = vector_json(rw);
    j["rho_black"] = vector_json(rb);
    j["rho_sum"] = vector_json(t.a);
    if (t.solution) j["reduced_a"] = vector_json(t.solution->a);
    if (t.two) {
      j["residuals"] = {{"black_balance", t.two->black_residual}, {"white_balance", t.two->white_residual},
                        {"count_deviation", t.two->count_deviation},
                        {"weight_deviation", t.two->weight_deviation}};
    }
  } else {
    j["a"] = vector_json(t.a);
    if (t.solution) {
      const auto& s = *t.solution;
      j["note"] = s.note;
      j["iterations"] = s.iterations;
      j["converged"] = s.converged;
      j["last_step"] = s.last_step;
      j["tail_closed"] = s.tail_closed;
      j["tail_mass"] = s.tail.mass;
      j["sum"] = s.sum;
      j["moment"] = s.moment;
      j["residuals"] = {{"max_abs", s.residuals.max_abs},
                        {"sum_deviation", s.residuals.sum_deviation},
                        {"moment_deviation", s.residuals.moment_deviation}};
    }
  }
  out << j.dump(2) << '\n';
}

void write_census_csv(std::ostream& out, const SimulationResult& sim, bool unsupported) {
  if (unsupported) out << "# UNSUPPORTED: Case II model, no convergence guarantee\n";
  if (!sim.two.empty()) {
    out << "replica,t,k,n_white,n_black\n";
    for (std::size_t r = 0; r < sim.two.size(); ++r) {
      for (const auto& c : sim.two[r]) {
        for (int k = 1; k <= c.max_degree(); ++k) {
          out << r << ',' << c.t << ',' << k << ',' << c.n(Colour::White, k) << ',' << c.n(Colour::Black, k) << '\n';
        }
      }
    }
    return;
  }
  out << "replica,t,k,n\n";
  for (std::size_t r = 0; r < sim.one.size(); ++r) {
    for (const auto& c : sim.one[r]) write_census_csv_rows(out, c, std::to_string(r) + ",");
  }
}

void write_report_csv(std::ostream& out, const ExperimentReport& rep, const ExperimentConfig& cfg) {
  out << "# seed=" << cfg.seed << '\n';
  out << "# config_sha256=" << config_digest(cfg) << '\n';
  out << "# method=" << rep.method << '\n';
  if (rep.unsupported) out << "# UNSUPPORTED: Case II model, no convergence guarantee\n";
  const auto f = [](double x) { return format_double(x); };
  if (!rep.two_colour) {
    out << "k,method,analytic,empirical_mean,stderr,z\n";
    for (const auto& r : rep.rows) {
      out << r.k << ',' << rep.method << ',' << f(r.analytic) << ',' << f(r.empirical.mean) << ','
          << f(r.empirical.std_error) << ',' << f(r.z) << '\n';
    }
    return;
  }
  out << "k,method,analytic_white,mean_white,stderr_white,z_white,analytic_black,mean_black,stderr_black,"
         "z_black,rho_sum,reduced_a,rho_sum_minus_a,mean_density,stderr_density,z_density\n";
  for (const auto& r : rep.rows) {
    out << r.k << ',' << rep.method << ',' << f(r.analytic) << ',' << f(r.empirical.mean) << ','
        << f(r.empirical.std_error) << ',' << f(r.z) << ',' << f(r.analytic_black) << ','
        << f(r.empirical_black.mean) << ',' << f(r.empirical_black.std_error) << ',' << f(r.z_black) << ','
        << f(r.rho_sum) << ',' << f(r.reduced_a) << ',' << f(r.rho_sum - r.reduced_a) << ','
        << f(r.empirical_density.mean) << ',' << f(r.empirical_density.std_error) << ',' << f(r.z_density)
        << '\n';
  }
}

json manifest(const ExperimentConfig& cfg, const ModelSpec& spec, const SimulationResult* sim,
              const ExperimentReport* report) {
  json j = {{"tool", "splitgrow"},
            {"version", kVersion},
            {"seed", cfg.seed},
            {"config_sha256", config_digest(cfg)},
            {"config", to_json(cfg)},
            {"model", spec.name()},
            {"unsupported", spec.unsupported()},
            {"rng", "xoshiro256** (replica r: seed, then r jumps of 2^128)"},
            {"versions",
             {{"compiler", __VERSION__},
              {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                            std::to_string(EIGEN_MINOR_VERSION)},
              {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                    std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}}};
  if (sim) {
    j["checks"] = {{"count_identity_max_deviation", sim->count_deviation},
                   {"degree_identity_max_deviation", sim->degree_deviation},
                   {"total_weight_max_rel_deviation", sim->weight_rel_deviation},
                   {"identities_hold", sim->count_deviation == 0 && sim->degree_deviation == 0 &&
                                           sim->weight_rel_deviation <= 1e-9}};
  }
  if (report) {
    j["report"] = {{"method", report->method}, {"max_abs_z", number_or_null(report->max_abs_z)},
                   {"z_crit", cfg.z_crit}, {"k_check", cfg.k_check}, {"passed", report->passed}};
  }
  return j;
}

}  // namespace splitgrow
