#include "fappr/serialize.hpp"

#include <array>
#include <bit>
#include <cstring>

#include "fappr/errors.hpp"

namespace fappr {

namespace {

constexpr std::array<char, 8> kMagic{'F', 'A', 'P', 'P', 'R', 'B', 'I', 'N'};

template <typename T>
void put_le(std::ostream& out, T value) {
  static_assert(std::is_unsigned_v<T>);
  unsigned char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>(value >> (8 * i));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  static_assert(std::is_unsigned_v<T>);
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw ValidationError("truncated binary input");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

void put_f64(std::ostream& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }
double get_f64(std::istream& in) { return std::bit_cast<double>(get_le<std::uint64_t>(in)); }

std::uint64_t get_length(std::istream& in, std::uint64_t limit = std::uint64_t{1} << 32) {
  const auto len = get_le<std::uint64_t>(in);
  if (len > limit) throw ValidationError("implausible sequence length in binary input");
  return len;
}

void write_header(std::ostream& out, PayloadKind kind) {
  out.write(kMagic.data(), kMagic.size());
  put_le(out, kFormatVersion);
  put_le(out, static_cast<std::uint32_t>(kind));
}

void read_header(std::istream& in, PayloadKind kind) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw ValidationError("not a fappr binary file");
  if (get_le<std::uint32_t>(in) != kFormatVersion) throw ValidationError("unsupported binary format version");
  if (get_le<std::uint32_t>(in) != static_cast<std::uint32_t>(kind)) throw ValidationError("unexpected payload kind");
}

}  // namespace

void write_alias_table(std::ostream& out, const AliasTable& table) {
  put_le<std::uint64_t>(out, table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    put_le(out, table.element(i));
    put_f64(out, table.switch_prob(i));
    put_le(out, table.alias_slot(i));
  }
}

AliasTable read_alias_table(std::istream& in) {
  const auto n = get_length(in);
  std::vector<std::uint32_t> elements;
  std::vector<double> prob;
  std::vector<std::uint32_t> alias;
  for (std::uint64_t i = 0; i < n; ++i) {
    elements.push_back(get_le<std::uint32_t>(in));
    prob.push_back(get_f64(in));
    alias.push_back(get_le<std::uint32_t>(in));
  }
  return AliasTable::from_parts(std::move(elements), std::move(prob), std::move(alias));
}

void write_alias_tree(std::ostream& out, const AliasTree& tree) {
  put_le(out, tree.block_size());
  put_le(out, tree.height());
  put_le(out, tree.root_index());
  put_le<std::uint64_t>(out, tree.blocks().size());
  for (const AliasBlock& b : tree.blocks()) {
    put_le<std::uint8_t>(out, b.leaf ? 1 : 0);
    write_alias_table(out, b.table);
  }
}

AliasTree read_alias_tree(std::istream& in) {
  const auto block_size = get_le<std::uint32_t>(in);
  const auto height = get_le<std::uint32_t>(in);
  const auto root = get_le<std::uint32_t>(in);
  const auto count = get_length(in);
  std::vector<AliasBlock> blocks;
  for (std::uint64_t i = 0; i < count; ++i) {
    const bool leaf = get_le<std::uint8_t>(in) != 0;
    blocks.push_back({read_alias_table(in), leaf});
  }
  return AliasTree(std::move(blocks), root, block_size, height);
}

void write_samplers(std::ostream& out, const Samplers& samplers) {
  write_header(out, PayloadKind::samplers);
  put_le<std::uint64_t>(out, samplers.node_count());
  for (NodeId v = 0; v < samplers.node_count(); ++v) {
    const NodeClass c = samplers.node_class(v);
    put_le(out, static_cast<std::uint8_t>(c));
    if (c == NodeClass::medium) write_alias_table(out, samplers.table(v));
    if (c == NodeClass::large) write_alias_tree(out, samplers.tree(v));
  }
}

SamplerFile read_samplers(std::istream& in) {
  read_header(in, PayloadKind::samplers);
  const auto n = get_length(in);
  SamplerFile f;
  f.classes.resize(n);
  f.tables.resize(n);
  f.trees.resize(n);
  for (std::uint64_t v = 0; v < n; ++v) {
    const auto c = get_le<std::uint8_t>(in);
    if (c > static_cast<std::uint8_t>(NodeClass::large)) throw ValidationError("unknown node class");
    f.classes[v] = static_cast<NodeClass>(c);
    if (f.classes[v] == NodeClass::medium) f.tables[v] = read_alias_table(in);
    if (f.classes[v] == NodeClass::large) f.trees[v] = read_alias_tree(in);
  }
  return f;
}

void write_big_moves(std::ostream& out, const BigMoveTable& table) {
  write_header(out, PayloadKind::big_moves);
  put_le<std::uint64_t>(out, table.node_count());
  put_le<std::uint64_t>(out, table.nodes().size());
  for (std::size_t i = 0; i < table.nodes().size(); ++i) {
    const auto& e = table.entries()[i];
    put_le(out, table.nodes()[i]);
    put_le(out, e.depth);
    put_le<std::uint64_t>(out, e.moves.size());
    for (const BigMove& m : e.moves) {
      put_le(out, m.target);
      put_le<std::uint8_t>(out, m.active ? 1 : 0);
      put_f64(out, m.probability);
    }
    write_alias_table(out, e.sampler);
  }
}

BigMoveTable read_big_moves(std::istream& in) {
  read_header(in, PayloadKind::big_moves);
  const auto node_count = get_length(in);
  const auto count = get_length(in);
  std::vector<NodeId> nodes;
  std::vector<BigMoveTable::Entry> entries;
  for (std::uint64_t i = 0; i < count; ++i) {
    nodes.push_back(get_le<std::uint32_t>(in));
    BigMoveTable::Entry e;
    e.depth = get_le<std::uint32_t>(in);
    const auto moves = get_length(in);
    for (std::uint64_t j = 0; j < moves; ++j) {
      BigMove m{};
      m.target = get_le<std::uint32_t>(in);
      m.active = get_le<std::uint8_t>(in) != 0;
      m.probability = get_f64(in);
      e.moves.push_back(m);
    }
    e.sampler = read_alias_table(in);
    entries.push_back(std::move(e));
  }
  return BigMoveTable(node_count, std::move(nodes), std::move(entries));
}

}  // namespace fappr
