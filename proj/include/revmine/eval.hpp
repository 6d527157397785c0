#pragma once

// Span and clustering metrics plus nested cross-validation.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "revmine/corpus.hpp"

namespace revmine {

struct SpanPrf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t n_pred = 0;
  std::size_t n_gold = 0;
  std::size_t n_correct = 0;

  static SpanPrf from_counts(std::size_t n_pred, std::size_t n_gold, std::size_t n_correct);
  /// Adds counts and recomputes the ratios (micro aggregation).
  SpanPrf& operator+=(const SpanPrf& other);
};

/// pred[i] and gold[i] are the spans of sentence i. A prediction is correct
/// only on an exact (sentence, start, end) match.
SpanPrf span_prf(const std::vector<std::vector<Span>>& pred, const std::vector<std::vector<Span>>& gold);

/// Item i belongs to group partition[i].
using Partition = std::vector<int>;
/// Keyed form; both partitions must cover the same item ids.
using KeyedPartition = std::map<std::string, int>;

/// Adjusted Rand index. 1.0 when the chance-corrected denominator vanishes
/// (both partitions trivial and identical). Needs n >= 2.
double ari(const Partition& g, const Partition& c);
double ari(const KeyedPartition& g, const KeyedPartition& c);

/// MI / sqrt(H(G) H(C)), natural logs. If either entropy is 0 the result is
/// 1.0 for partitions identical up to relabeling and 0.0 otherwise.
double nmi(const Partition& g, const Partition& c);
double nmi(const KeyedPartition& g, const KeyedPartition& c);

bool same_partition(const Partition& g, const Partition& c);

struct ClusterScores {
  double ari = 0.0;
  double nmi = 0.0;
};

/// Hyperparameters searched by the inner loop.
struct HyperPoint {
  double learning_rate = 1e-4;
  std::size_t hidden = 128;
  std::size_t token_dim = 64;
  int epochs = 100;
  bool operator==(const HyperPoint&) const = default;
};

struct FoldReport {
  int fold = 0;
  HyperPoint selected;
  double validation_f1 = 0.0;
  std::map<std::string, SpanPrf> per_app;
  SpanPrf overall;
};

struct EvalReport {
  /// Means of P/R/F1 across folds; counts are summed.
  std::map<std::string, SpanPrf> per_app;
  SpanPrf overall;
  std::map<std::string, ClusterScores> clustering_per_app;
  std::optional<ClusterScores> clustering_overall;
  std::vector<FoldReport> folds;
};

nlohmann::json to_json(const EvalReport& report);
/// Plain-text table: one row per app and an overall row, P / R / F1 in %.
void print_table(std::ostream& out, const EvalReport& report);

using Predictor = std::function<std::vector<Span>(const Sentence&)>;
using TrainFn = std::function<Predictor(const std::vector<LabeledSentence>& train,
                                        const std::vector<LabeledSentence>& validation, const HyperPoint& point,
                                        std::uint64_t seed)>;

/// Per-app and micro-overall span scores of `predict` on `data`.
std::pair<std::map<std::string, SpanPrf>, SpanPrf> evaluate_spans(const std::vector<LabeledSentence>& data,
                                                                 const Predictor& predict);

/// Outer fold k is the test set; the next fold validates each grid point
/// trained on the remaining folds. The best point (highest validation F1,
/// earliest on ties) is retrained on every fold but k with an empty
/// validation set and scored on fold k.
EvalReport nested_cv(const std::vector<LabeledSentence>& dataset, int n_outer, const std::vector<HyperPoint>& grid,
                     const TrainFn& train_fn, std::uint64_t seed);

}  // namespace revmine
