#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "fappr/random.hpp"

namespace fappr {

/// Walker/Vose alias table over a fixed list of element ids.
///
/// Slot i holds element(i), its switch probability p(i) and the slot of its
/// alias. Sampling picks a slot uniformly, keeps it with probability p(i) and
/// otherwise jumps to the alias.
class AliasTable {
 public:
  AliasTable() = default;

  /// Rebuilds a table from stored parts (deserialization). Throws
  /// ValidationError if the parts are inconsistent.
  static AliasTable from_parts(std::vector<std::uint32_t> elements, std::vector<double> prob,
                               std::vector<std::uint32_t> alias);

  std::size_t size() const noexcept { return elements_.size(); }
  bool empty() const noexcept { return elements_.empty(); }

  std::uint32_t element(std::size_t slot) const { return elements_[slot]; }
  double switch_prob(std::size_t slot) const { return prob_[slot]; }
  std::uint32_t alias_slot(std::size_t slot) const { return alias_[slot]; }
  std::uint32_t alias_element(std::size_t slot) const { return elements_[alias_[slot]]; }

  const std::vector<std::uint32_t>& elements() const noexcept { return elements_; }
  const std::vector<double>& switch_probs() const noexcept { return prob_; }
  const std::vector<std::uint32_t>& alias_slots() const noexcept { return alias_; }

  template <RandomStream G>
  std::size_t sample_slot(G& rng) const {
    const auto slot = static_cast<std::size_t>(uniform_index(rng, elements_.size()));
    return uniform01(rng) <= prob_[slot] ? slot : alias_[slot];
  }

  friend bool operator==(const AliasTable&, const AliasTable&) = default;

 private:
  friend AliasTable build_alias(std::span<const std::uint32_t>, std::span<const double>);

  std::vector<std::uint32_t> elements_;
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// Builds the table in O(|S|). When several deficit or surplus slots are
/// available, the one with the smallest slot index is paired first. Slots
/// left over by rounding get p = 1.
///
/// Throws ValidationError on empty input, a non-positive probability, a size
/// mismatch, or probabilities that do not sum to 1 within 1e-9.
AliasTable build_alias(std::span<const std::uint32_t> elements, std::span<const double> probs);

/// Elements are the slot indices 0..n-1.
AliasTable build_alias(std::span<const double> probs);

template <RandomStream G>
std::uint32_t sample_alias(const AliasTable& table, G& rng) {
  return table.element(table.sample_slot(rng));
}

/// Exact selection probability of each slot's element:
/// (p(e) + sum over slots aliased to e of (1 - p)) / |S|.
std::vector<double> implied_probabilities(const AliasTable& table);

enum class SplitPolicy { round_robin, contiguous, shuffled };

struct AliasBlock {
  AliasTable table;  // elements are leaf ids when `leaf`, else child block indices
  bool leaf = true;

  friend bool operator==(const AliasBlock&, const AliasBlock&) = default;
};

/// Multi-level alias structure whose blocks hold at most `block_size` items.
/// Leaf blocks sample edges; inner blocks sample child blocks with
/// probability equal to the child's total routing mass.
class AliasTree {
 public:
  AliasTree() = default;
  AliasTree(std::vector<AliasBlock> blocks, std::uint32_t root, std::uint32_t block_size, std::uint32_t height);

  const std::vector<AliasBlock>& blocks() const noexcept { return blocks_; }
  const AliasBlock& root() const { return blocks_[root_]; }
  std::uint32_t root_index() const noexcept { return root_; }
  std::uint32_t block_size() const noexcept { return block_size_; }
  std::uint32_t height() const noexcept { return height_; }
  bool empty() const noexcept { return blocks_.empty(); }

  template <RandomStream G>
  std::uint32_t sample(G& rng) const {
    const AliasBlock* block = &blocks_[root_];
    for (;;) {
      const std::uint32_t item = sample_alias(block->table, rng);
      if (block->leaf) return item;
      block = &blocks_[item];
    }
  }

  friend bool operator==(const AliasTree&, const AliasTree&) = default;

 private:
  std::vector<AliasBlock> blocks_;
  std::uint32_t root_ = 0;
  std::uint32_t block_size_ = 0;
  std::uint32_t height_ = 0;
};

/// Builds the tree bottom-up: split into ceil(|S|/d) subsets, build one leaf
/// block per subset over renormalized probabilities, then repeat on the
/// subsets (weighted by their mass) until one block of at most d items
/// remains. `split_seed` is only used by SplitPolicy::shuffled.
AliasTree build_alias_tree(std::span<const std::uint32_t> elements, std::span<const double> probs,
                           std::uint32_t block_size, SplitPolicy split = SplitPolicy::round_robin,
                           std::uint64_t split_seed = 0);

template <RandomStream G>
std::uint32_t sample_alias_tree(const AliasTree& tree, G& rng) {
  return tree.sample(rng);
}

/// (leaf element, product of block-level selection probabilities along its
/// root path) for every leaf.
std::vector<std::pair<std::uint32_t, double>> leaf_path_probabilities(const AliasTree& tree);

}  // namespace fappr
