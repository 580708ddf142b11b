#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <set>
#include <vector>

#include "fappr/estimate.hpp"

namespace fappr {

/// Targets of one source in ranked order, at most `cutoff` long.
struct RankedList {
  std::int64_t source = 0;
  std::vector<std::int64_t> targets;
  std::size_t cutoff = 0;
};

/// Ranks `scores` by descending value, ties by ascending id, keeping k.
RankedList rank_scores(std::int64_t source, const std::map<std::int64_t, double>& scores, std::size_t k);

/// DCG with linear gain (the true score) and 1/log2(i+1) discount at rank i,
/// divided by the DCG of the ideal top-k ordering. Targets absent from
/// `truth` have gain 0. Throws ValidationError on empty truth or k == 0.
double ndcg_at_k(const RankedList& estimated, const std::map<std::int64_t, double>& truth);

/// Average precision over the first k ranks with binary relevance,
/// normalized by min(|relevant|, k). Throws ValidationError on an empty
/// relevant set or k == 0.
double map_at_k(const RankedList& estimated, const std::set<std::int64_t>& relevant);

struct SourceMetrics {
  std::int64_t source;
  double ndcg;
  double map;
};

struct MetricsReport {
  std::vector<SourceMetrics> rows;
  double mean_ndcg = 0.0;
  double mean_map = 0.0;
};

/// Scores every source of `truth`: the estimate ranking is cut at k, the
/// relevant set is the truth's own top-k.
MetricsReport evaluate(const ScoreTable& estimated, const ScoreTable& truth, std::size_t k);

/// TSV `source<TAB>ndcg<TAB>map`, then a `mean` row.
void write_metrics_tsv(const MetricsReport& report, std::ostream& out);

}  // namespace fappr
