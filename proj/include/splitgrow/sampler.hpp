#pragma once

#include <cstddef>
#include <vector>

#include "splitgrow/errors.hpp"
#include "splitgrow/rng.hpp"

namespace splitgrow {

// Dynamic discrete distribution over items 0..size()-1 with O(log n) weight
// updates and draws, backed by a Fenwick (binary indexed) tree of prefix sums.
class WeightedSampler {
 public:
  WeightedSampler() = default;
  explicit WeightedSampler(std::size_t n) { resize(n); }

  std::size_t size() const { return weights_.size(); }

  // Grows (never shrinks) the item range; new items have weight zero.
  void resize(std::size_t n) {
    if (n <= weights_.size()) return;
    weights_.resize(n, 0.0);
    std::size_t cap = capacity_ ? capacity_ : 1;
    while (cap < n) cap *= 2;
    if (cap != capacity_) {
      capacity_ = cap;
      rebuild();
    }
  }

  double weight(std::size_t i) const { return weights_[i]; }

  void set(std::size_t i, double w) {
    if (i >= weights_.size()) resize(i + 1);
    const double delta = w - weights_[i];
    weights_[i] = w;
    for (std::size_t pos = i + 1; pos <= capacity_; pos += pos & (~pos + 1)) tree_[pos] += delta;
    if (++updates_since_rebuild_ >= kRebuildInterval) rebuild();
  }

  void add(std::size_t i, double delta) { set(i, weights_[i] + delta); }

  double total() const { return capacity_ ? tree_[capacity_] : 0.0; }

  // Item whose cumulative-weight interval contains u * total(), u in [0, 1).
  std::size_t find(double u) const {
    const double target = u * total();
    std::size_t pos = 0;
    double rem = target;
    for (std::size_t step = capacity_; step > 0; step >>= 1) {
      const std::size_t next = pos + step;
      if (next <= capacity_ && tree_[next] <= rem) {
        rem -= tree_[next];
        pos = next;
      }
    }
    if (pos >= weights_.size()) pos = weights_.size() - 1;
    return pos;
  }

  std::size_t sample(Rng& rng) const {
    if (!(total() > 0)) throw DegeneracyError("weighted sampler: total weight is not positive");
    // Rounding in the prefix sums can land on a zero-weight neighbour; redraw.
    for (;;) {
      const std::size_t i = find(rng.uniform());
      if (weights_[i] > 0) return i;
    }
  }

  // Recomputes the prefix tree from the item weights, discarding accumulated
  // rounding from incremental updates.
  void rebuild() {
    tree_.assign(capacity_ + 1, 0.0);
    for (std::size_t i = 0; i < weights_.size(); ++i) tree_[i + 1] = weights_[i];
    for (std::size_t pos = 1; pos <= capacity_; ++pos) {
      const std::size_t parent = pos + (pos & (~pos + 1));
      if (parent <= capacity_) tree_[parent] += tree_[pos];
    }
    updates_since_rebuild_ = 0;
  }

 private:
  static constexpr std::size_t kRebuildInterval = std::size_t{1} << 22;

  std::vector<double> weights_;
  std::vector<double> tree_;
  std::size_t capacity_ = 0;
  std::size_t updates_since_rebuild_ = 0;
};

}  // namespace splitgrow
