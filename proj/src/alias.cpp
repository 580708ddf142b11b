#include "fappr/alias.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>

#include "fappr/errors.hpp"

namespace fappr {

namespace {

void validate_distribution(std::span<const double> probs) {
  if (probs.empty()) throw ValidationError("alias table needs at least one element");
  double sum = 0.0;
  for (double r : probs) {
    if (!(r > 0.0) || !std::isfinite(r)) throw ValidationError("probabilities must be positive");
    sum += r;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("probabilities must sum to 1");
}

}  // namespace

AliasTable AliasTable::from_parts(std::vector<std::uint32_t> elements, std::vector<double> prob,
                                  std::vector<std::uint32_t> alias) {
  if (elements.size() != prob.size() || elements.size() != alias.size()) {
    throw ValidationError("alias table parts differ in length");
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (alias[i] >= elements.size()) throw ValidationError("alias slot out of range");
    if (!(prob[i] >= 0.0 && prob[i] <= 1.0)) throw ValidationError("switch probability outside [0,1]");
  }
  AliasTable t;
  t.elements_ = std::move(elements);
  t.prob_ = std::move(prob);
  t.alias_ = std::move(alias);
  return t;
}

AliasTable build_alias(std::span<const std::uint32_t> elements, std::span<const double> probs) {
  if (elements.size() != probs.size()) throw ValidationError("elements and probabilities differ in length");
  validate_distribution(probs);

  const std::size_t n = probs.size();
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  AliasTable t;
  t.elements_.assign(elements.begin(), elements.end());
  t.prob_.resize(n);
  t.alias_.resize(n);

  // Deficit slots come from two sorted sources: the initial ones and the
  // surplus slots demoted during pairing. Surplus slots are consumed in index
  // order, so demotions arrive sorted too and both queues stay ordered.
  std::deque<std::uint32_t> small_init;
  std::deque<std::uint32_t> small_demoted;
  std::vector<std::uint32_t> large;
  for (std::size_t i = 0; i < n; ++i) {
    t.prob_[i] = static_cast<double>(n) * probs[i] / total;
    t.alias_[i] = static_cast<std::uint32_t>(i);
    if (t.prob_[i] < 1.0) {
      small_init.push_back(static_cast<std::uint32_t>(i));
    } else if (t.prob_[i] > 1.0) {
      large.push_back(static_cast<std::uint32_t>(i));
    }
  }

  std::size_t next_large = 0;
  while (next_large < large.size() && !(small_init.empty() && small_demoted.empty())) {
    std::deque<std::uint32_t>* from = &small_init;
    if (small_init.empty() || (!small_demoted.empty() && small_demoted.front() < small_init.front())) {
      from = &small_demoted;
    }
    const std::uint32_t x = from->front();
    from->pop_front();
    const std::uint32_t y = large[next_large];
    t.alias_[x] = y;
    t.prob_[y] -= 1.0 - t.prob_[x];
    if (t.prob_[y] <= 1.0) {
      ++next_large;
      if (t.prob_[y] < 1.0) small_demoted.push_back(y);
    }
  }

  // Rounding residue: whatever is left is within a few ulps of 1.
  for (std::uint32_t s : small_init) t.prob_[s] = 1.0;
  for (std::uint32_t s : small_demoted) t.prob_[s] = 1.0;
  for (std::size_t i = next_large; i < large.size(); ++i) t.prob_[large[i]] = 1.0;
  return t;
}

AliasTable build_alias(std::span<const double> probs) {
  std::vector<std::uint32_t> ids(probs.size());
  std::iota(ids.begin(), ids.end(), 0U);
  return build_alias(ids, probs);
}

std::vector<double> implied_probabilities(const AliasTable& table) {
  const std::size_t n = table.size();
  std::vector<double> mass(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    mass[i] += table.switch_prob(i);
    mass[table.alias_slot(i)] += 1.0 - table.switch_prob(i);
  }
  for (double& m : mass) m /= static_cast<double>(n);
  return mass;
}

AliasTree::AliasTree(std::vector<AliasBlock> blocks, std::uint32_t root, std::uint32_t block_size,
                     std::uint32_t height)
    : blocks_(std::move(blocks)), root_(root), block_size_(block_size), height_(height) {
  if (!blocks_.empty() && root_ >= blocks_.size()) throw ValidationError("alias tree root out of range");
  for (const AliasBlock& b : blocks_) {
    if (!b.leaf) {
      for (std::uint32_t child : b.table.elements()) {
        if (child >= blocks_.size()) throw ValidationError("alias tree child out of range");
      }
    }
  }
}

namespace {

std::vector<std::vector<std::size_t>> split_items(std::size_t count, std::size_t parts, SplitPolicy policy,
                                                  std::uint64_t seed) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (policy == SplitPolicy::shuffled) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  std::vector<std::vector<std::size_t>> groups(parts);
  if (policy == SplitPolicy::contiguous) {
    const std::size_t chunk = (count + parts - 1) / parts;
    for (std::size_t i = 0; i < count; ++i) groups[i / chunk].push_back(order[i]);
  } else {
    for (std::size_t i = 0; i < count; ++i) groups[i % parts].push_back(order[i]);
  }
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  return groups;
}

}  // namespace

AliasTree build_alias_tree(std::span<const std::uint32_t> elements, std::span<const double> probs,
                           std::uint32_t block_size, SplitPolicy split, std::uint64_t split_seed) {
  if (block_size < 2) throw ValidationError("alias tree block size must be at least 2");
  if (elements.size() != probs.size()) throw ValidationError("elements and probabilities differ in length");
  validate_distribution(probs);

  std::vector<AliasBlock> blocks;
  std::vector<std::uint32_t> items(elements.begin(), elements.end());
  std::vector<double> weights(probs.begin(), probs.end());
  bool leaf_level = true;
  std::uint32_t height = 1;

  while (items.size() > block_size) {
    const std::size_t parts = (items.size() + block_size - 1) / block_size;
    auto groups = split_items(items.size(), parts, split, split_seed + height);

    std::vector<std::uint32_t> next_items;
    std::vector<double> next_weights;
    for (const auto& group : groups) {
      std::vector<std::uint32_t> ids;
      std::vector<double> local;
      double mass = 0.0;
      for (std::size_t idx : group) mass += weights[idx];
      for (std::size_t idx : group) {
        ids.push_back(items[idx]);
        local.push_back(weights[idx] / mass);
      }
      next_items.push_back(static_cast<std::uint32_t>(blocks.size()));
      next_weights.push_back(mass);
      blocks.push_back({build_alias(ids, local), leaf_level});
    }
    const double total = std::accumulate(next_weights.begin(), next_weights.end(), 0.0);
    for (double& w : next_weights) w /= total;
    items = std::move(next_items);
    weights = std::move(next_weights);
    leaf_level = false;
    ++height;
  }

  const auto root = static_cast<std::uint32_t>(blocks.size());
  blocks.push_back({build_alias(items, weights), leaf_level});
  return AliasTree(std::move(blocks), root, block_size, height);
}

std::vector<std::pair<std::uint32_t, double>> leaf_path_probabilities(const AliasTree& tree) {
  std::vector<std::pair<std::uint32_t, double>> out;
  if (tree.empty()) return out;
  std::vector<std::pair<std::uint32_t, double>> stack{{tree.root_index(), 1.0}};
  while (!stack.empty()) {
    auto [index, prefix] = stack.back();
    stack.pop_back();
    const AliasBlock& block = tree.blocks()[index];
    const auto implied = implied_probabilities(block.table);
    for (std::size_t slot = 0; slot < block.table.size(); ++slot) {
      const double p = prefix * implied[slot];
      if (block.leaf) {
        out.emplace_back(block.table.element(slot), p);
      } else {
        stack.emplace_back(block.table.element(slot), p);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace fappr
