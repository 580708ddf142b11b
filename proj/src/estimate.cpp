#include "fappr/estimate.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <sstream>
#include <string>

#include "fappr/errors.hpp"

namespace fappr {

std::uint64_t EstimateStore::count(NodeId s, NodeId t) const {
  if (s >= counts_.size()) return 0;
  auto it = counts_[s].find(t);
  return it == counts_[s].end() ? 0 : it->second;
}

std::uint64_t EstimateStore::total(NodeId s) const {
  std::uint64_t sum = 0;
  for (const auto& [t, c] : counts_[s]) sum += c;
  return sum;
}

double EstimateStore::finalize(NodeId s, NodeId t) const {
  if (omega_ == 0) return 0.0;
  return static_cast<double>(count(s, t)) / static_cast<double>(omega_);
}

void EstimateStore::merge(const EstimateStore& other) {
  if (counts_.size() < other.counts_.size()) counts_.resize(other.counts_.size());
  for (std::size_t s = 0; s < other.counts_.size(); ++s) {
    for (const auto& [t, c] : other.counts_[s]) counts_[s][t] += c;
  }
}

std::vector<std::pair<NodeId, std::uint64_t>> EstimateStore::row(NodeId s) const {
  std::vector<std::pair<NodeId, std::uint64_t>> out(counts_[s].begin(), counts_[s].end());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Counts compare exactly, so ordering on them avoids rounding ties.
std::vector<std::pair<NodeId, std::uint64_t>> ranked_row(const EstimateStore& store, NodeId s) {
  auto r = store.row(s);
  std::stable_sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return r;
}

void write_line(std::ostream& out, std::int64_t s, std::int64_t t, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  out << s << '\t' << t << '\t' << buf << '\n';
}

}  // namespace

std::vector<std::pair<NodeId, double>> top_k(const EstimateStore& store, NodeId s, std::size_t k) {
  auto r = ranked_row(store, s);
  if (r.size() > k) r.resize(k);
  std::vector<std::pair<NodeId, double>> out;
  out.reserve(r.size());
  for (const auto& [t, c] : r) out.emplace_back(t, static_cast<double>(c) / static_cast<double>(store.omega()));
  return out;
}

void write_result_tsv(const EstimateStore& store, const WeightedGraph& g, std::ostream& out) {
  const double omega = static_cast<double>(store.omega());
  for (NodeId s = 0; s < store.node_count(); ++s) {
    for (const auto& [t, c] : ranked_row(store, s)) {
      write_line(out, g.original_id(s), g.original_id(t), static_cast<double>(c) / omega);
    }
  }
}

void write_score_tsv(const std::vector<std::vector<double>>& scores, const WeightedGraph& g, std::ostream& out) {
  for (NodeId s = 0; s < scores.size(); ++s) {
    std::vector<std::pair<NodeId, double>> row;
    for (NodeId t = 0; t < scores[s].size(); ++t) {
      if (scores[s][t] > 0.0) row.emplace_back(t, scores[s][t]);
    }
    std::stable_sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    for (const auto& [t, v] : row) write_line(out, g.original_id(s), g.original_id(t), v);
  }
}

ScoreTable read_score_tsv(std::istream& in) {
  ScoreTable table;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    std::int64_t s = 0;
    std::int64_t t = 0;
    std::string value;
    std::string extra;
    if (!(fields >> s >> t >> value) || (fields >> extra)) {
      throw ParseError(line_no, "expected 'source target score'");
    }
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) throw ParseError(line_no, "bad score '" + value + "'");
    table[s][t] = v;
  }
  return table;
}

}  // namespace fappr
