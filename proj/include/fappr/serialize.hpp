#pragma once

#include <cstdint>
#include <istream>
#include <ostream>

#include "fappr/alias.hpp"
#include "fappr/bigmove.hpp"
#include "fappr/engine.hpp"

namespace fappr {

// Binary container: 8-byte magic "FAPPRBIN", u32 format version, u32
// payload kind, then the payload. Integers are little-endian, doubles are
// their IEEE-754 bit patterns as u64, and every sequence is written as a
// u64 length followed by its items.

inline constexpr std::uint32_t kFormatVersion = 1;

enum class PayloadKind : std::uint32_t { samplers = 1, big_moves = 2 };

void write_alias_table(std::ostream& out, const AliasTable& table);
AliasTable read_alias_table(std::istream& in);

void write_alias_tree(std::ostream& out, const AliasTree& tree);
AliasTree read_alias_tree(std::istream& in);

/// Per-node alias tables and trees (node class included) with header.
void write_samplers(std::ostream& out, const Samplers& samplers);

struct SamplerFile {
  std::vector<NodeClass> classes;
  std::vector<AliasTable> tables;  // indexed by node; empty unless medium
  std::vector<AliasTree> trees;    // indexed by node; empty unless large
};
SamplerFile read_samplers(std::istream& in);

void write_big_moves(std::ostream& out, const BigMoveTable& table);
/// Throws ValidationError on a bad header, truncated input or inconsistent
/// content.
BigMoveTable read_big_moves(std::istream& in);

}  // namespace fappr
