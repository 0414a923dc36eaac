#include "splitgrow/growth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "splitgrow/errors.hpp"

namespace splitgrow {

namespace {

struct SplitLaw {
  std::vector<int> ks;
  std::vector<double> cdf;
};

SplitLaw build_split_law(const WeightModel& m, int i) {
  if (i < 1) throw InvalidDegree("split-size law requested for degree " + std::to_string(i));
  const double wi = m.w(i);
  if (!(wi > 0)) {
    throw InvalidDegree("w_" + std::to_string(i) + " is not positive; degree cannot split");
  }
  SplitLaw law;
  double total = 0.0;
  for (int k = 1; k <= i + 1; ++k) {
    const double p = 0.5 * i * m.w(k, i + 2 - k) / wi;
    if (p > 0) {
      total += p;
      law.ks.push_back(k);
      law.cdf.push_back(total);
    }
  }
  if (law.ks.empty()) {
    throw InvalidDegree("all partition weights for degree " + std::to_string(i) + " vanish");
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InvalidDegree("split-size law for degree " + std::to_string(i) + " sums to " +
                        std::to_string(total) + "; partition and splitting weights disagree");
  }
  for (auto& c : law.cdf) c /= total;
  return law;
}

int draw(const std::vector<int>& ks, const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform();
  auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  if (it == cdf.end()) --it;
  return ks[static_cast<std::size_t>(it - cdf.begin())];
}

void check_bound(const WeightModel& m, int i, int k) {
  if (k < 1 || k > i + 1) {
    throw InvalidDegree("child degree " + std::to_string(k) + " invalid for parent degree " +
                        std::to_string(i));
  }
  if (m.d_max() && std::max(k, i + 2 - k) > *m.d_max()) {
    throw BoundViolation("split of degree " + std::to_string(i) + " would exceed d_max = " +
                         std::to_string(*m.d_max()));
  }
}

double checked_weight(const WeightModel& m, int degree) {
  const double w = m.w(degree);
  if (w < 0) {
    throw DegeneracyError("negative splitting weight at degree " + std::to_string(degree));
  }
  return w;
}

void check_initial_degrees(const WeightModel& m, int max_degree) {
  if (m.d_max() && max_degree > *m.d_max()) {
    throw BoundViolation("initial state has a vertex of degree " + std::to_string(max_degree) +
                         " > d_max = " + std::to_string(*m.d_max()));
  }
}

}  // namespace

int Census::max_degree() const {
  for (std::size_t k = counts.size(); k-- > 0;) {
    if (counts[k] > 0) return static_cast<int>(k);
  }
  return 0;
}

std::uint64_t Census::vertex_sum() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

std::uint64_t Census::degree_sum() const {
  std::uint64_t sum = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) sum += k * counts[k];
  return sum;
}

double Census::weight_sum(const SplittingWeights& sw) const {
  double sum = 0.0;
  for (std::size_t k = 1; k < counts.size(); ++k) {
    if (counts[k]) sum += sw(static_cast<int>(k)) * static_cast<double>(counts[k]);
  }
  return sum;
}

bool Census::operator==(const Census& other) const {
  if (t != other.t) return false;
  const std::size_t n = std::max(counts.size(), other.counts.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (this->n(static_cast<int>(k)) != other.n(static_cast<int>(k))) return false;
  }
  return true;
}

bool census_identities_hold(const Census& c) {
  return c.n(0) == 0 && c.vertex_sum() == c.t && c.t >= 1 && c.degree_sum() == 2 * c.t - 2;
}

double split_size_probability(const WeightModel& m, int i, int k) {
  const double wi = m.w(i);
  if (i < 1 || k < 1 || k > i + 1 || !(wi > 0)) return 0.0;
  return 0.5 * i * m.w(k, i + 2 - k) / wi;
}

int sample_split_sizes(int i, const WeightModel& m, Rng& rng) {
  const auto law = build_split_law(m, i);
  return draw(law.ks, law.cdf, rng);
}

const SplitSizeSampler::Table& SplitSizeSampler::table(int degree) {
  const auto idx = static_cast<std::size_t>(degree);
  if (idx >= tables_.size()) tables_.resize(idx + 1);
  auto& t = tables_[idx];
  if (t.ks.empty()) {
    auto law = build_split_law(model_, degree);
    t.ks = std::move(law.ks);
    t.cdf = std::move(law.cdf);
  }
  return t;
}

int SplitSizeSampler::sample(int degree, Rng& rng) {
  const auto& t = table(degree);
  return draw(t.ks, t.cdf, rng);
}

// ---------------------------------------------------------------------------
// OrderedTree

OrderedTree OrderedTree::single_edge() { return from_edges(2, {{0, 1}}); }

OrderedTree OrderedTree::from_edges(std::size_t n,
                                    const std::vector<std::pair<VertexId, VertexId>>& edges) {
  if (n < 2) throw InvalidParameter("initial tree needs at least two vertices");
  if (edges.size() != n - 1) throw InvalidParameter("a tree on n vertices has n - 1 edges");
  OrderedTree tree;
  tree.adjacency_.resize(n);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n || u == v) throw InvalidParameter("invalid edge in initial tree");
    tree.adjacency_[u].push_back(v);
    tree.adjacency_[v].push_back(u);
  }
  if (!tree.is_tree()) throw InvalidParameter("initial edges do not form a tree");
  tree.bucket_pos_.assign(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    tree.census_add(tree.degree(v), 1);
    tree.set_degree_bucket(v, 0, tree.degree(v));
  }
  return tree;
}

std::size_t OrderedTree::count_of_degree(int d) const {
  const auto idx = static_cast<std::size_t>(d);
  return d > 0 && idx < buckets_.size() ? buckets_[idx].size() : 0;
}

VertexId OrderedTree::vertex_of_degree(int d, std::size_t index) const {
  return buckets_[static_cast<std::size_t>(d)][index];
}

std::size_t OrderedTree::arrangement_count(int i, int k) {
  if (i % 2 == 0 && k - 1 == i / 2) return static_cast<std::size_t>(i / 2);
  return static_cast<std::size_t>(std::max(i, 1));
}

void OrderedTree::census_add(int degree, std::int64_t delta) {
  const auto idx = static_cast<std::size_t>(degree);
  if (idx >= census_.size()) census_.resize(idx + 1, 0);
  census_[idx] = static_cast<std::uint64_t>(static_cast<std::int64_t>(census_[idx]) + delta);
}

void OrderedTree::set_degree_bucket(VertexId v, int old_degree, int new_degree) {
  if (old_degree > 0) {
    auto& bucket = buckets_[static_cast<std::size_t>(old_degree)];
    const std::size_t pos = bucket_pos_[v];
    const VertexId last = bucket.back();
    bucket[pos] = last;
    bucket_pos_[last] = pos;
    bucket.pop_back();
  }
  if (new_degree > 0) {
    const auto idx = static_cast<std::size_t>(new_degree);
    if (idx >= buckets_.size()) buckets_.resize(idx + 1);
    bucket_pos_[v] = buckets_[idx].size();
    buckets_[idx].push_back(v);
  }
}

OrderedTree::SplitResult OrderedTree::split(VertexId v, int k, std::size_t arrangement) {
  const int i = degree(v);
  if (k < 1 || k > i + 1) throw InvalidDegree("child degree out of range");
  if (i > 0 && arrangement >= static_cast<std::size_t>(i)) {
    throw InvalidParameter("arrangement index out of range");
  }
  std::vector<VertexId> old = std::move(adjacency_[v]);
  const auto n = old.size();
  const auto len1 = static_cast<std::size_t>(k - 1);
  const std::size_t len2 = n - len1;

  std::vector<VertexId> arc1, arc2;
  arc1.reserve(len1 + 1);
  arc2.reserve(len2 + 1);
  for (std::size_t j = 0; j < len1; ++j) arc1.push_back(old[(arrangement + j) % n]);
  for (std::size_t j = 0; j < len2; ++j) arc2.push_back(old[(arrangement + len1 + j) % n]);

  const auto fresh = static_cast<VertexId>(adjacency_.size());
  adjacency_.emplace_back();
  bucket_pos_.push_back(0);
  const bool v_is_first = len1 > len2;
  const VertexId first = v_is_first ? v : fresh;
  const VertexId second = v_is_first ? fresh : v;

  // Neighbours on the arc handed to the fresh id must point at it.
  for (VertexId u : v_is_first ? arc2 : arc1) {
    auto& nb = adjacency_[u];
    *std::find(nb.begin(), nb.end(), v) = fresh;
  }
  arc1.push_back(second);
  arc2.push_back(first);
  adjacency_[first] = std::move(arc1);
  adjacency_[second] = std::move(arc2);

  census_add(i, -1);
  census_add(k, 1);
  census_add(i + 2 - k, 1);
  set_degree_bucket(v, i, degree(v));
  set_degree_bucket(fresh, 0, degree(fresh));
  return {first, second};
}

bool OrderedTree::is_tree() const {
  const std::size_t n = adjacency_.size();
  if (n == 0) return false;
  std::size_t degree_total = 0;
  for (VertexId v = 0; v < n; ++v) {
    degree_total += adjacency_[v].size();
    for (VertexId u : adjacency_[v]) {
      if (u >= n || u == v) return false;
      const auto& back = adjacency_[u];
      const auto forward_count = std::count(adjacency_[v].begin(), adjacency_[v].end(), u);
      if (forward_count != 1 || std::count(back.begin(), back.end(), v) != 1) return false;
    }
  }
  if (degree_total != 2 * (n - 1)) return false;
  std::vector<char> seen(n, 0);
  std::vector<VertexId> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    for (VertexId u : adjacency_[v]) {
      if (!seen[u]) {
        seen[u] = 1;
        ++reached;
        stack.push_back(u);
      }
    }
  }
  return reached == n;
}

// ---------------------------------------------------------------------------
// UrnState

UrnState UrnState::single_edge() { return from_counts({0, 2}); }

UrnState UrnState::from_counts(std::vector<std::uint64_t> counts) {
  if (counts.empty()) counts.push_back(0);
  if (counts[0] != 0) throw InvalidParameter("urn counts cannot contain degree-0 balls");
  UrnState urn;
  urn.t_ = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  urn.counts_ = std::move(counts);
  Census c{urn.t_, urn.counts_, 0.0};
  if (!census_identities_hold(c)) {
    throw InvalidParameter("urn counts are not the degree census of a tree");
  }
  return urn;
}

UrnState UrnState::from_tree(const OrderedTree& tree) { return from_counts(tree.census()); }

void UrnState::apply_split(int i, int k) {
  const auto ii = static_cast<std::size_t>(i);
  if (i < 1 || ii >= counts_.size() || counts_[ii] == 0) {
    throw InvalidDegree("urn has no ball of degree " + std::to_string(i));
  }
  if (k < 1 || k > i + 1) throw InvalidDegree("child degree out of range");
  const auto need = static_cast<std::size_t>(std::max(k, i + 2 - k)) + 1;
  if (counts_.size() < need) counts_.resize(need, 0);
  counts_[ii] -= 1;
  counts_[static_cast<std::size_t>(k)] += 1;
  counts_[static_cast<std::size_t>(i + 2 - k)] += 1;
  t_ += 1;
}

// ---------------------------------------------------------------------------
// TreeGrowth

TreeGrowth::TreeGrowth(WeightModel model, OrderedTree initial)
    : tree_(std::move(initial)), split_sampler_(std::move(model)) {
  Census c{tree_.vertex_count(), tree_.census(), 0.0};
  check_initial_degrees(this->model(), c.max_degree());
  sampler_.resize(tree_.vertex_count());
  for (VertexId v = 0; v < tree_.vertex_count(); ++v) refresh_weight(v);
}

void TreeGrowth::refresh_weight(VertexId v) {
  sampler_.set(v, checked_weight(model(), tree_.degree(v)));
}

double TreeGrowth::expected_total_weight() const {
  const auto& sw = model().splitting();
  return sw(2) * static_cast<double>(t()) - 2.0 * sw.a;
}

VertexId TreeGrowth::sample_vertex(Rng& rng) const {
  return static_cast<VertexId>(sampler_.sample(rng));
}

SplitEvent TreeGrowth::apply_split(VertexId v, int k, Rng& rng) {
  const int i = tree_.degree(v);
  check_bound(model(), i, k);
  const std::size_t arrangement = rng.below(OrderedTree::arrangement_count(i, k));
  const auto result = tree_.split(v, k, arrangement);
  refresh_weight(result.first);
  refresh_weight(result.second);
  return {i, k, arrangement, t()};
}

SplitEvent TreeGrowth::apply(const SplitDecision& d, Rng& rng) {
  const std::size_t count = tree_.count_of_degree(d.degree);
  if (count == 0) throw InvalidDegree("no vertex of degree " + std::to_string(d.degree));
  const VertexId v = tree_.vertex_of_degree(d.degree, rng.below(count));
  return apply_split(v, d.k, rng);
}

SplitEvent TreeGrowth::step(Rng& rng) {
  const VertexId v = sample_vertex(rng);
  const int k = split_sampler_.sample(tree_.degree(v), rng);
  return apply_split(v, k, rng);
}

Census TreeGrowth::census() const { return {t(), tree_.census(), total_weight()}; }

// ---------------------------------------------------------------------------
// UrnGrowth

UrnGrowth::UrnGrowth(WeightModel model, UrnState initial)
    : urn_(std::move(initial)), split_sampler_(std::move(model)) {
  Census c{urn_.t(), urn_.counts(), 0.0};
  check_initial_degrees(this->model(), c.max_degree());
  for (std::size_t d = 1; d < urn_.counts().size(); ++d) refresh_weight(static_cast<int>(d));
}

void UrnGrowth::refresh_weight(int degree) {
  const auto idx = static_cast<std::size_t>(degree);
  const std::uint64_t n = idx < urn_.counts().size() ? urn_.counts()[idx] : 0;
  sampler_.set(idx, n ? checked_weight(model(), degree) * static_cast<double>(n) : 0.0);
}

double UrnGrowth::expected_total_weight() const {
  const auto& sw = model().splitting();
  return sw(2) * static_cast<double>(t()) - 2.0 * sw.a;
}

int UrnGrowth::sample_degree(Rng& rng) const { return static_cast<int>(sampler_.sample(rng)); }

void UrnGrowth::apply(const SplitDecision& d) {
  check_bound(model(), d.degree, d.k);
  urn_.apply_split(d.degree, d.k);
  refresh_weight(d.degree);
  refresh_weight(d.k);
  refresh_weight(d.degree + 2 - d.k);
}

SplitDecision UrnGrowth::step(Rng& rng) {
  const int i = sample_degree(rng);
  const SplitDecision d{i, split_sampler_.sample(i, rng)};
  apply(d);
  return d;
}

Census UrnGrowth::census() const { return {t(), urn_.counts(), total_weight()}; }

// ---------------------------------------------------------------------------

namespace {

template <class Engine>
std::vector<Census> drive(Engine& engine, std::uint64_t t_final, Rng& rng, RunOptions options) {
  const std::uint64_t t0 = engine.t();
  if (t_final < t0) throw InvalidParameter("t_final is below the initial vertex count");
  std::vector<Census> snapshots;
  if (options.thinning) snapshots.push_back(engine.census());
  while (engine.t() < t_final) {
    engine.step(rng);
    if (options.thinning && engine.t() % options.thinning == 0) {
      snapshots.push_back(engine.census());
    }
  }
  if (snapshots.empty() || snapshots.back().t != engine.t()) snapshots.push_back(engine.census());
  return snapshots;
}

}  // namespace

std::vector<Census> run(const WeightModel& model, GrowthState initial, std::uint64_t t_final,
                        Rng& rng, RunOptions options) {
  return std::visit(
      [&](auto&& state) -> std::vector<Census> {
        using T = std::decay_t<decltype(state)>;
        if constexpr (std::is_same_v<T, OrderedTree>) {
          TreeGrowth engine(model, std::move(state));
          return drive(engine, t_final, rng, options);
        } else {
          UrnGrowth engine(model, std::move(state));
          return drive(engine, t_final, rng, options);
        }
      },
      std::move(initial));
}

}  // namespace splitgrow
