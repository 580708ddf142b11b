#include "fappr/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fappr/errors.hpp"

namespace fappr {

RankedList rank_scores(std::int64_t source, const std::map<std::int64_t, double>& scores, std::size_t k) {
  std::vector<std::pair<std::int64_t, double>> items(scores.begin(), scores.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  RankedList list{source, {}, k};
  for (std::size_t i = 0; i < items.size() && i < k; ++i) list.targets.push_back(items[i].first);
  return list;
}

double ndcg_at_k(const RankedList& estimated, const std::map<std::int64_t, double>& truth) {
  if (estimated.cutoff == 0) throw ValidationError("k must be positive");
  if (truth.empty()) throw ValidationError("NDCG is undefined without ground truth");

  double dcg = 0.0;
  for (std::size_t i = 0; i < estimated.targets.size() && i < estimated.cutoff; ++i) {
    auto it = truth.find(estimated.targets[i]);
    if (it != truth.end()) dcg += it->second / std::log2(static_cast<double>(i) + 2.0);
  }

  std::vector<double> ideal;
  ideal.reserve(truth.size());
  for (const auto& [t, v] : truth) ideal.push_back(v);
  std::stable_sort(ideal.begin(), ideal.end(), std::greater<>());
  double idcg = 0.0;
  for (std::size_t i = 0; i < ideal.size() && i < estimated.cutoff; ++i) {
    idcg += ideal[i] / std::log2(static_cast<double>(i) + 2.0);
  }
  if (idcg <= 0.0) throw ValidationError("NDCG is undefined when all true scores are zero");
  return dcg / idcg;
}

double map_at_k(const RankedList& estimated, const std::set<std::int64_t>& relevant) {
  if (estimated.cutoff == 0) throw ValidationError("k must be positive");
  if (relevant.empty()) throw ValidationError("average precision needs a nonempty relevant set");
  double hits = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < estimated.targets.size() && i < estimated.cutoff; ++i) {
    if (relevant.contains(estimated.targets[i])) {
      hits += 1.0;
      sum += hits / static_cast<double>(i + 1);
    }
  }
  return sum / static_cast<double>(std::min(relevant.size(), estimated.cutoff));
}

MetricsReport evaluate(const ScoreTable& estimated, const ScoreTable& truth, std::size_t k) {
  if (k == 0) throw ValidationError("k must be positive");
  MetricsReport report;
  static const std::map<std::int64_t, double> kEmpty;
  for (const auto& [source, truth_row] : truth) {
    if (truth_row.empty()) continue;
    auto it = estimated.find(source);
    const auto& est_row = it == estimated.end() ? kEmpty : it->second;
    const RankedList est = rank_scores(source, est_row, k);
    const RankedList ideal = rank_scores(source, truth_row, k);
    const std::set<std::int64_t> relevant(ideal.targets.begin(), ideal.targets.end());
    report.rows.push_back({source, ndcg_at_k(est, truth_row), map_at_k(est, relevant)});
  }
  for (const auto& r : report.rows) {
    report.mean_ndcg += r.ndcg;
    report.mean_map += r.map;
  }
  if (!report.rows.empty()) {
    report.mean_ndcg /= static_cast<double>(report.rows.size());
    report.mean_map /= static_cast<double>(report.rows.size());
  }
  return report;
}

void write_metrics_tsv(const MetricsReport& report, std::ostream& out) {
  char buf[96];
  for (const auto& r : report.rows) {
    std::snprintf(buf, sizeof buf, "\t%.9g\t%.9g\n", r.ndcg, r.map);
    out << r.source << buf;
  }
  std::snprintf(buf, sizeof buf, "mean\t%.9g\t%.9g\n", report.mean_ndcg, report.mean_map);
  out << buf;
}

}  // namespace fappr
