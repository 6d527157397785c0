#pragma once

// Configuration and the command-level stages:
// preprocess -> train -> extract -> cluster -> report, plus eval.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "revmine/clusterer.hpp"
#include "revmine/eval.hpp"
#include "revmine/model.hpp"
#include "revmine/train.hpp"

namespace revmine {

/// Empty string = not set.
struct PipelinePaths {
  std::string corpus;          // review JSON Lines
  std::string labeled;         // labeled sentence JSON Lines
  std::string lexicon;         // sentiment lexicon (built-in when empty)
  std::string app_names;       // one app name per line
  std::string token_vectors;   // precomputed token vectors, keyed by sentence
  std::string phrase_vectors;  // precomputed phrase vectors, keyed by phrase
  std::string checkpoint;
  std::string gold_clusters;   // JSON Lines {"review_id","sentence_index","span","label"}
  std::string output_dir = "out";
  bool operator==(const PipelinePaths&) const = default;
};

enum class PhraseEmbedding { kNative, kPrecomputed };
std::string_view to_string(PhraseEmbedding e);
PhraseEmbedding phrase_embedding_from_string(std::string_view s);

struct PipelineConfig {
  PipelinePaths paths;
  std::vector<std::string> categories;
  std::size_t max_len = kDefaultMaxLen;
  std::string lemmatizer = "identity";
  bool drop_non_ascii = false;
  ModelSpec model;
  TrainConfig train;  // train.seed is ignored in favour of `seed`
  ClusterOptions cluster;
  PhraseEmbedding phrase_embedding = PhraseEmbedding::kNative;
  std::size_t top_k = 20;
  std::size_t examples = 5;
  int n_outer = 10;
  std::vector<HyperPoint> grid;  // empty: the single point given by `model` and `train`
  std::uint64_t seed = 42;

  /// Missing keys take defaults; unknown keys are rejected.
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::string& path);
  nlohmann::json to_json() const;
  void validate() const;
  TrainConfig train_config() const;
  bool operator==(const PipelineConfig&) const = default;
};

// ---------------------------------------------------------------------------
// Report.

struct BubbleDatum {
  std::string app_name;
  int label = 0;
  double size = 0.0;
};

struct ReportApp {
  std::string app_name;
  std::string category;
  std::size_t phrase_count = 0;
};

struct ReportCluster {
  int label = 0;
  std::string category;
  std::string name;
  std::string keyword;
  std::size_t count = 0;
  std::size_t rank = 0;  // 1-based within its category (or overall for global scope)
  std::map<std::string, std::vector<PhraseRecord>> examples;  // per app
};

struct Report {
  static constexpr int kSchemaVersion = 1;
  ClusterScope scope = ClusterScope::kPerCategory;
  std::size_t top_k = 20;
  std::vector<ReportApp> apps;
  std::vector<ReportCluster> clusters;    // top_k per category, by count
  std::vector<BubbleDatum> matrix;        // displayed clusters only
  std::vector<BubbleDatum> full_matrix;   // every cluster
  nlohmann::json to_json() const;
};

/// s_{a,c} = phrases of app a in cluster c / phrases of app a, computed over
/// all clusters before the top_k cut.
Report build_report(const ClusterSet& clusters, const std::vector<PhraseRecord>& phrases, const PosOracle& oracle,
                    std::size_t top_k = 20, std::size_t max_examples = 5);

// ---------------------------------------------------------------------------
// Commands. Each takes resolved paths; `default_*` give the config-derived
// locations used when the CLI gets no override.

std::string default_sentences_path(const PipelineConfig& c);
std::string default_checkpoint_path(const PipelineConfig& c);
std::string default_phrases_path(const PipelineConfig& c);
std::string default_clusters_path(const PipelineConfig& c);
std::string default_report_path(const PipelineConfig& c);
std::string default_eval_path(const PipelineConfig& c);

/// Writes cleaned, attributed sentence JSON Lines. Returns the sentence count.
std::size_t cmd_preprocess(const PipelineConfig& c, const std::string& in, const std::string& out);
/// Also writes "<out>.log.json" with per-epoch loss and validation F1.
TrainResult cmd_train(const PipelineConfig& c, const std::string& in, const std::string& out);
/// Returns the number of phrases written.
std::size_t cmd_extract(const PipelineConfig& c, const std::string& in, const std::string& checkpoint,
                        const std::string& out);
/// `checkpoint` supplies the token table for native phrase embeddings.
ClusterSet cmd_cluster(const PipelineConfig& c, const std::string& in, const std::string& checkpoint,
                       const std::string& out);
Report cmd_report(const PipelineConfig& c, const std::string& clusters, const std::string& phrases,
                  const std::string& out);
/// Nested cross-validation on labeled data; writes the JSON report and prints
/// the table to `table`. With paths.gold_clusters set, `clusters` and
/// `phrases` are scored against it as well.
EvalReport cmd_eval(const PipelineConfig& c, const std::string& in, const std::string& out, std::ostream& table,
                    const std::string& clusters = {}, const std::string& phrases = {});

/// Clustering agreement of predicted clusters with gold labels, per app and
/// overall. Every gold phrase must occur in the predictions.
std::pair<std::map<std::string, ClusterScores>, ClusterScores> score_clusters(
    const ClusterSet& predicted, const std::vector<PhraseRecord>& phrases, std::istream& gold);

}  // namespace revmine
