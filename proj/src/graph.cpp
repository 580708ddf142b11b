#include "fappr/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <string>
#include <string_view>

#include "fappr/errors.hpp"

namespace fappr {

WeightedGraph WeightedGraph::from_edges(std::size_t n, std::vector<Edge> edges,
                                        std::vector<std::int64_t> original_ids) {
  for (const Edge& e : edges) {
    if (e.src >= n || e.dst >= n) {
      throw ValidationError("edge endpoint out of range");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("edge weight must be a positive finite number");
    }
  }
  if (original_ids.empty()) {
    original_ids.resize(n);
    std::iota(original_ids.begin(), original_ids.end(), std::int64_t{0});
  } else if (original_ids.size() != n) {
    throw ValidationError("original id table does not match node count");
  }

  std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  });

  WeightedGraph g;
  g.offsets_.assign(n + 1, 0);
  g.totals_.assign(n, 0.0);
  g.original_ids_ = std::move(original_ids);
  g.targets_.reserve(edges.size());
  g.weights_.reserve(edges.size());

  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i;
    double w = 0.0;
    while (j < edges.size() && edges[j].src == edges[i].src && edges[j].dst == edges[i].dst) {
      w += edges[j].weight;
      ++j;
    }
    g.targets_.push_back(edges[i].dst);
    g.weights_.push_back(w);
    ++g.offsets_[edges[i].src + 1];
    i = j;
  }
  for (std::size_t v = 0; v < n; ++v) g.offsets_[v + 1] += g.offsets_[v];
  for (std::size_t v = 0; v < n; ++v) {
    auto ws = g.weights(static_cast<NodeId>(v));
    g.totals_[v] = std::accumulate(ws.begin(), ws.end(), 0.0);
  }
  return g;
}

std::vector<double> WeightedGraph::routing_probabilities(NodeId v) const {
  auto ws = weights(v);
  std::vector<double> r(ws.size());
  const double total = totals_[v];
  std::transform(ws.begin(), ws.end(), r.begin(), [total](double w) { return w / total; });
  return r;
}

std::optional<NodeId> WeightedGraph::find(std::int64_t original) const {
  auto it = std::lower_bound(original_ids_.begin(), original_ids_.end(), original);
  if (it == original_ids_.end() || *it != original) return std::nullopt;
  return static_cast<NodeId>(it - original_ids_.begin());
}

namespace {

struct RawEdge {
  std::int64_t src;
  std::int64_t dst;
  std::optional<double> weight;
};

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    if (pos >= line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

std::int64_t parse_id(std::string_view field, std::size_t line_no) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line_no, "bad node id '" + std::string(field) + "'");
  }
  return value;
}

double parse_weight(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ParseError(line_no, "bad weight '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

WeightedGraph load_edge_list(std::istream& in, Weighting weighting) {
  std::vector<RawEdge> raw;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto fields = split_fields(line);
    if (fields.empty() || fields.front().front() == '#') continue;
    if (fields.size() < 2 || fields.size() > 3) {
      throw ParseError(line_no, "expected 'src dst [weight]'");
    }
    RawEdge e{parse_id(fields[0], line_no), parse_id(fields[1], line_no), std::nullopt};
    if (fields.size() == 3) {
      double w = parse_weight(fields[2], line_no);
      if (!(w > 0.0) || !std::isfinite(w)) {
        throw ValidationError("line " + std::to_string(line_no) + ": weight must be positive");
      }
      e.weight = w;
    } else if (weighting == Weighting::given) {
      throw ValidationError("line " + std::to_string(line_no) + ": missing weight");
    }
    raw.push_back(e);
  }

  std::vector<std::int64_t> ids;
  ids.reserve(raw.size() * 2);
  for (const RawEdge& e : raw) {
    ids.push_back(e.src);
    ids.push_back(e.dst);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto dense = [&ids](std::int64_t id) {
    return static_cast<NodeId>(std::lower_bound(ids.begin(), ids.end(), id) - ids.begin());
  };

  std::vector<Edge> edges;
  edges.reserve(raw.size());
  for (const RawEdge& e : raw) {
    edges.push_back({dense(e.src), dense(e.dst), e.weight.value_or(1.0)});
  }

  if (weighting != Weighting::given) {
    // Merge duplicates first so every distinct edge gets exactly one weight.
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return a.src != b.src ? a.src < b.src : a.dst < b.dst;
    });
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](const Edge& a, const Edge& b) { return a.src == b.src && a.dst == b.dst; }),
                edges.end());
    std::size_t rank = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
      rank = (i > 0 && edges[i - 1].src == edges[i].src) ? rank + 1 : 0;
      edges[i].weight = weighting == Weighting::uniform ? 1.0 : 1.0 + static_cast<double>(rank);
    }
  }

  const std::size_t n = ids.size();
  return WeightedGraph::from_edges(n, std::move(edges), std::move(ids));
}

double routing_probability(const WeightedGraph& g, NodeId s, NodeId t) {
  if (s >= g.node_count() || t >= g.node_count()) throw NotFoundError("node out of range");
  auto nbrs = g.neighbors(s);
  auto it = std::lower_bound(nbrs.begin(), nbrs.end(), t);
  if (it == nbrs.end() || *it != t) throw NotFoundError("no edge between the given nodes");
  return g.weights(s)[static_cast<std::size_t>(it - nbrs.begin())] / g.total_out_weight(s);
}

DegreeStats degree_stats(std::span<const std::size_t> out_degrees) {
  DegreeStats stats;
  const std::size_t n = out_degrees.size();
  if (n == 0) return stats;
  std::size_t edges = 0;
  for (std::size_t d : out_degrees) {
    stats.d_max = std::max(stats.d_max, d);
    edges += d;
  }
  stats.d_avg = static_cast<double>(edges) / static_cast<double>(n);
  const double large_cut = std::sqrt(static_cast<double>(stats.d_max));
  for (NodeId v = 0; v < n; ++v) {
    const auto deg = static_cast<double>(out_degrees[v]);
    if (deg < stats.d_avg) stats.small_nodes.push_back(v);
    if (deg > large_cut) stats.large_nodes.push_back(v);
  }
  return stats;
}

DegreeStats degree_stats(const WeightedGraph& g) {
  std::vector<std::size_t> degrees(g.node_count());
  for (NodeId v = 0; v < g.node_count(); ++v) degrees[v] = g.out_degree(v);
  return degree_stats(degrees);
}

std::vector<NodeId> sinks(const WeightedGraph& g) {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    if (g.is_sink(v)) out.push_back(v);
  }
  return out;
}

void write_id_map(const WeightedGraph& g, std::ostream& out) {
  for (NodeId v = 0; v < g.node_count(); ++v) out << v << '\t' << g.original_id(v) << '\n';
}

}  // namespace fappr
