#pragma once

// Phrase similarity graphs and Chinese Whispers clustering.

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "revmine/encoder.hpp"
#include "revmine/phrase.hpp"

namespace revmine {

using Embedding = std::vector<double>;

/// Throws InputError unless v is a finite nonzero vector.
void validate_embedding(const Embedding& v, std::string_view what);

class PhraseEmbedder {
 public:
  virtual ~PhraseEmbedder() = default;
  virtual Embedding embed(std::string_view phrase) const = 0;
};

/// Looks the phrase string up verbatim; each record must hold one row.
class PrecomputedPhraseEmbedder final : public PhraseEmbedder {
 public:
  explicit PrecomputedPhraseEmbedder(const PrecomputedVectors& store) : store_(&store) {}
  Embedding embed(std::string_view phrase) const override;

 private:
  const PrecomputedVectors* store_;
};

/// Mean of the embedding-table rows of the space-separated phrase tokens.
class NativePooledEmbedder final : public PhraseEmbedder {
 public:
  explicit NativePooledEmbedder(const NativeEmbedding& native) : native_(&native) {}
  Embedding embed(std::string_view phrase) const override;

 private:
  const NativeEmbedding* native_;
};

double cosine(const Embedding& a, const Embedding& b);

struct Edge {
  std::size_t to = 0;
  double weight = 0.0;
};

/// Undirected, no self-loops; adjacency lists sorted by neighbor.
class SimilarityGraph {
 public:
  explicit SimilarityGraph(std::size_t n = 0, double threshold = 0.5) : adj_(n), threshold_(threshold) {}

  void add_edge(std::size_t i, std::size_t j, double weight);
  std::size_t size() const { return adj_.size(); }
  std::size_t edge_count() const;
  double threshold() const { return threshold_; }
  const std::vector<Edge>& neighbors(std::size_t i) const { return adj_[i]; }
  bool has_edge(std::size_t i, std::size_t j) const;
  /// 0.0 when there is no edge.
  double weight(std::size_t i, std::size_t j) const;

 private:
  std::vector<std::vector<Edge>> adj_;
  double threshold_;
};

/// Edge (i, j) iff cosine > threshold. Threshold must lie in [-1, 1].
SimilarityGraph build_graph(const std::vector<Embedding>& embeddings, double threshold = 0.5);

struct ClusterAssignment {
  std::vector<int> labels;  // dense, 0-based
  int iterations = 0;
  bool converged = false;
  int cluster_count() const;
};

inline constexpr int kDefaultMaxIter = 20;

/// Every node starts in its own cluster. Each sweep visits nodes in a
/// seeded random order and moves a node to the label with the largest
/// summed edge weight among its neighbors, lowest label on ties. Stops
/// after a sweep without changes or after max_iter sweeps.
ClusterAssignment chinese_whispers(const SimilarityGraph& graph, std::uint64_t seed, int max_iter = kDefaultMaxIter);
/// Same, starting from `initial` labels.
ClusterAssignment chinese_whispers(const SimilarityGraph& graph, std::vector<int> initial, std::uint64_t seed,
                                   int max_iter = kDefaultMaxIter);

/// Connected component id of every node.
std::vector<int> connected_components(const SimilarityGraph& graph);

class PosOracle {
 public:
  virtual ~PosOracle() = default;
  virtual bool is_noun_or_verb(std::string_view token) const = 0;
};

/// Built-in list of common English nouns and verbs plus a few noun/verb
/// suffixes.
class LexiconPosOracle final : public PosOracle {
 public:
  LexiconPosOracle();
  bool is_noun_or_verb(std::string_view token) const override;

 private:
  std::vector<std::string> words_;  // sorted
};

struct ClusterSummary {
  int label = 0;
  std::string keyword;
  std::string name;
  std::size_t count = 0;
  std::vector<PhraseRecord> examples;
};

/// keyword: most frequent noun-or-verb token (any token if none), then the
/// most frequent member phrase containing it; lexicographic tie-breaks.
ClusterSummary name_cluster(const std::vector<PhraseRecord>& members, const PosOracle& oracle,
                            std::size_t max_examples = 5);

/// First occurrences of the `k` most frequent distinct phrases, most
/// frequent first, lexicographic on ties.
std::vector<PhraseRecord> select_examples(const std::vector<PhraseRecord>& members, std::size_t k);

// ---------------------------------------------------------------------------
// Clustering a phrase file.

enum class ClusterScope { kPerCategory, kGlobal };
std::string_view to_string(ClusterScope s);
ClusterScope cluster_scope_from_string(std::string_view s);

struct Cluster {
  int label = 0;          // unique within a ClusterSet
  std::string category;   // empty for global scope
  std::string name;
  std::string keyword;
  std::vector<std::size_t> members;  // indices into the phrase list
};

struct ClusterSet {
  ClusterScope scope = ClusterScope::kPerCategory;
  std::vector<Cluster> clusters;
};

struct ClusterOptions {
  double threshold = 0.5;
  ClusterScope scope = ClusterScope::kPerCategory;
  int max_iter = kDefaultMaxIter;
  bool operator==(const ClusterOptions&) const = default;
};

/// Per-category scope clusters each category (in order of first
/// appearance) separately with seed mix_seed(seed, group); labels are
/// numbered consecutively across groups.
ClusterSet cluster_phrases(const std::vector<PhraseRecord>& phrases, const PhraseEmbedder& embedder,
                           const ClusterOptions& options, const PosOracle& oracle, std::uint64_t seed);

/// {"scope", "clusters":[{"label","category","name","keyword","count","members":[refs]}]}
nlohmann::json to_json(const ClusterSet& set, const std::vector<PhraseRecord>& phrases);
/// Throws InputError when a member reference does not match `phrases`.
ClusterSet cluster_set_from_json(const nlohmann::json& j, const std::vector<PhraseRecord>& phrases);

}  // namespace revmine
