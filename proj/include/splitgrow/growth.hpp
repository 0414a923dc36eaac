#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "splitgrow/rng.hpp"
#include "splitgrow/sampler.hpp"
#include "splitgrow/weights.hpp"

namespace splitgrow {

using VertexId = std::uint32_t;

/// Degree census n_{t,k}. counts[k] is the number of degree-k vertices; counts[0] is always 0.
struct Census {
  std::uint64_t t = 0;
  std::vector<std::uint64_t> counts;
  double total_weight = 0.0;

  std::uint64_t n(int k) const {
    return k >= 0 && static_cast<std::size_t>(k) < counts.size() ? counts[static_cast<std::size_t>(k)] : 0;
  }
  int max_degree() const;
  std::uint64_t vertex_sum() const;
  std::uint64_t degree_sum() const;
  double weight_sum(const SplittingWeights& sw) const;
  bool operator==(const Census& other) const;
};

/// Sum n_k = t and sum k n_k = 2t - 2.
bool census_identities_hold(const Census& c);

/// What the selection and partition steps decided: split a vertex of `degree`
/// into children of degrees k and degree + 2 - k.
struct SplitDecision {
  int degree = 0;
  int k = 0;
  bool operator==(const SplitDecision&) const = default;
};

struct SplitEvent {
  int parent_degree = 0;
  int k = 0;
  std::size_t arrangement = 0;
  std::uint64_t t = 0;  // vertex count after the split

  int first_degree() const { return k; }
  int second_degree() const { return parent_degree + 2 - k; }
};

/// P(ordered pair (k, i+2-k)) = (i/2) w_{k,i+2-k} / w_i.
double split_size_probability(const WeightModel& m, int i, int k);

/// Uncached draw of the first child degree k for a splitting vertex of degree i.
int sample_split_sizes(int i, const WeightModel& m, Rng& rng);

// Per-degree cumulative tables of the split-size law, built lazily. Not
// thread-safe; each engine owns one.
class SplitSizeSampler {
 public:
  explicit SplitSizeSampler(WeightModel m) : model_(std::move(m)) {}

  int sample(int degree, Rng& rng);
  const WeightModel& model() const { return model_; }

 private:
  struct Table {
    std::vector<int> ks;
    std::vector<double> cdf;
  };
  const Table& table(int degree);

  WeightModel model_;
  std::vector<Table> tables_;
};

/// Ordered (plane) tree with per-vertex cyclic neighbour order and a degree census.
class OrderedTree {
 public:
  /// Two vertices joined by one edge (t = 2).
  static OrderedTree single_edge();
  /// Tree on vertices 0..n-1; each vertex's cyclic order is the order its edges appear.
  static OrderedTree from_edges(std::size_t n, const std::vector<std::pair<VertexId, VertexId>>& edges);

  std::uint64_t vertex_count() const { return adjacency_.size(); }
  int degree(VertexId v) const { return static_cast<int>(adjacency_[v].size()); }
  std::span<const VertexId> neighbors(VertexId v) const { return adjacency_[v]; }
  const std::vector<std::uint64_t>& census() const { return census_; }

  std::size_t count_of_degree(int d) const;
  VertexId vertex_of_degree(int d, std::size_t index) const;

  /// Number of distinct contiguous arcs E' of size k-1 around a degree-i vertex.
  static std::size_t arrangement_count(int i, int k);

  struct SplitResult {
    VertexId first;   // degree k, holds arc E'
    VertexId second;  // degree i + 2 - k
  };

  /// Replaces v by adjacent vertices v', v''. E' is the arc of k-1 edges starting
  /// at position `arrangement` of v's cyclic order; E'' is the rest. v's id is
  /// kept by whichever child receives the longer arc.
  SplitResult split(VertexId v, int k, std::size_t arrangement);

  /// Connected and acyclic.
  bool is_tree() const;

 private:
  void set_degree_bucket(VertexId v, int old_degree, int new_degree);
  void census_add(int degree, std::int64_t delta);

  std::vector<std::vector<VertexId>> adjacency_;
  std::vector<std::uint64_t> census_{0};
  std::vector<std::vector<VertexId>> buckets_;
  std::vector<std::size_t> bucket_pos_;
};

/// Degree-census urn: one ball per vertex in the urn of its degree.
class UrnState {
 public:
  static UrnState single_edge();
  static UrnState from_counts(std::vector<std::uint64_t> counts);
  static UrnState from_tree(const OrderedTree& tree);

  std::uint64_t t() const { return t_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }

  /// n_i -= 1; n_k += 1; n_{i+2-k} += 1; t += 1.
  void apply_split(int i, int k);

 private:
  std::vector<std::uint64_t> counts_{0};
  std::uint64_t t_ = 0;
};

class TreeGrowth {
 public:
  TreeGrowth(WeightModel model, OrderedTree initial);

  const OrderedTree& tree() const { return tree_; }
  const WeightModel& model() const { return split_sampler_.model(); }
  std::uint64_t t() const { return tree_.vertex_count(); }

  /// Incrementally maintained total weight.
  double total_weight() const { return sampler_.total(); }
  /// w_2 t - 2a, valid whenever the census identities hold.
  double expected_total_weight() const;

  /// Vertex chosen with probability w_{deg(v)} / W_t.
  VertexId sample_vertex(Rng& rng) const;
  /// Splits v into children of degrees k and deg(v)+2-k with a uniformly chosen arrangement.
  SplitEvent apply_split(VertexId v, int k, Rng& rng);
  /// Applies an externally chosen decision to a uniformly chosen vertex of that degree.
  SplitEvent apply(const SplitDecision& d, Rng& rng);
  SplitEvent step(Rng& rng);

  Census census() const;

 private:
  void refresh_weight(VertexId v);

  OrderedTree tree_;
  WeightedSampler sampler_;
  SplitSizeSampler split_sampler_;
};

class UrnGrowth {
 public:
  UrnGrowth(WeightModel model, UrnState initial);

  const UrnState& urn() const { return urn_; }
  const WeightModel& model() const { return split_sampler_.model(); }
  std::uint64_t t() const { return urn_.t(); }
  double total_weight() const { return sampler_.total(); }
  double expected_total_weight() const;

  /// Degree class i drawn with probability w_i n_i / W_t.
  int sample_degree(Rng& rng) const;
  void apply(const SplitDecision& d);
  SplitDecision step(Rng& rng);

  Census census() const;

 private:
  void refresh_weight(int degree);

  UrnState urn_;
  WeightedSampler sampler_;
  SplitSizeSampler split_sampler_;
};

using GrowthState = std::variant<OrderedTree, UrnState>;

struct RunOptions {
  /// Snapshot every `thinning` steps (0 keeps only the final census).
  std::uint64_t thinning = 0;
};

/// Grows `initial` to t_final vertices. Snapshots are deterministic given
/// (model, initial, rng state).
std::vector<Census> run(const WeightModel& model, GrowthState initial, std::uint64_t t_final,
                        Rng& rng, RunOptions options = {});

}  // namespace splitgrow
