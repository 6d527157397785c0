#include "revmine/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>

#include "revmine/sentiment.hpp"

namespace revmine {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Reads object members one by one and rejects whatever is left over.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) throw InputError("config: " + where_ + " must be an object");
  }
  ~Fields() = default;

  template <typename T>
  void get(const char* key, T& dst) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      dst = it->get<T>();
    } catch (const json::exception&) {
      throw InputError("config: " + where_ + key + " has the wrong type");
    }
  }
  void path(const char* key, std::string& dst) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end() || it->is_null()) return;
    if (!it->is_string()) throw InputError("config: " + where_ + key + " must be a string or null");
    dst = it->get<std::string>();
  }
  const json* sub(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key())) throw InputError("config: unknown key '" + where_ + it.key() + "'");
    }
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

json path_json(const std::string& p) { return p.empty() ? json(nullptr) : json(p); }

json point_to_json(const HyperPoint& p) {
  return {{"learning_rate", p.learning_rate}, {"hidden", p.hidden}, {"token_dim", p.token_dim}, {"epochs", p.epochs}};
}

HyperPoint point_from_json(const json& j, const std::string& where) {
  HyperPoint p;
  Fields f(j, where);
  f.get("learning_rate", p.learning_rate);
  f.get("hidden", p.hidden);
  f.get("token_dim", p.token_dim);
  f.get("epochs", p.epochs);
  f.finish();
  return p;
}

void require_readable(const std::string& path, const std::string& what) {
  if (path.empty()) throw InputError(what + " path is not set");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + what + " '" + path + "'");
}

std::ifstream open_in(const std::string& path, const std::string& what) {
  require_readable(path, what);
  return std::ifstream(path, std::ios::binary);
}

std::ofstream open_out(const std::string& path) {
  if (path.empty()) throw InputError("output path is not set");
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    fs::create_directories(parent, ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  return out;
}

void close_checked(std::ofstream& out, const std::string& path) {
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string join_path(const std::string& dir, const char* name) { return (fs::path(dir) / name).string(); }

std::vector<LabeledSentence> load_labeled(const PipelineConfig& c, const std::string& path, bool require_spans) {
  auto in = open_in(path, "sentence file");
  return read_labeled(in, CategorySet(c.categories), c.max_len, require_spans);
}

std::vector<PhraseRecord> load_phrases(const std::string& path) {
  auto in = open_in(path, "phrase file");
  return read_phrases(in);
}

std::unique_ptr<PrecomputedVectors> load_token_store(const PipelineConfig& c) {
  if (c.model.encoder != EncoderKind::kPrecomputed) return nullptr;
  require_readable(c.paths.token_vectors, "token vector store");
  auto store = std::make_unique<PrecomputedVectors>(PrecomputedVectors::load(c.paths.token_vectors));
  if (store->dim() != c.model.token_dim) {
    throw InputError("token vector store has dimension " + std::to_string(store->dim()) + " but model.token_dim is " +
                     std::to_string(c.model.token_dim));
  }
  return store;
}

json log_json(const TrainResult& r) {
  json epochs = json::array();
  for (const auto& e : r.log) {
    epochs.push_back({{"epoch", e.epoch}, {"train_loss", e.train_loss}, {"validation_f1", e.validation_f1}});
  }
  return {{"best_epoch", r.best_epoch}, {"epochs", std::move(epochs)}};
}

std::string phrase_key(const std::string& review_id, int sentence_index, Span span) {
  return review_id + "#" + std::to_string(sentence_index) + "#" + std::to_string(span.start) + "-" +
         std::to_string(span.end);
}

}  // namespace

// ---------------------------------------------------------------------------
// Config.

std::string_view to_string(PhraseEmbedding e) { return e == PhraseEmbedding::kNative ? "native" : "precomputed"; }

PhraseEmbedding phrase_embedding_from_string(std::string_view s) {
  if (s == "native") return PhraseEmbedding::kNative;
  if (s == "precomputed") return PhraseEmbedding::kPrecomputed;
  throw InputError("unknown phrase embedding '" + std::string(s) + "' (expected native or precomputed)");
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  PipelineConfig c;
  Fields top(j, "");
  if (const json* p = top.sub("paths")) {
    Fields f(*p, "paths.");
    f.path("corpus", c.paths.corpus);
    f.path("labeled", c.paths.labeled);
    f.path("lexicon", c.paths.lexicon);
    f.path("app_names", c.paths.app_names);
    f.path("token_vectors", c.paths.token_vectors);
    f.path("phrase_vectors", c.paths.phrase_vectors);
    f.path("checkpoint", c.paths.checkpoint);
    f.path("gold_clusters", c.paths.gold_clusters);
    f.path("output_dir", c.paths.output_dir);
    f.finish();
  }
  top.get("categories", c.categories);
  top.get("max_len", c.max_len);
  top.get("lemmatizer", c.lemmatizer);
  top.get("drop_non_ascii", c.drop_non_ascii);
  if (const json* p = top.sub("model")) {
    Fields f(*p, "model.");
    f.get("category_dim", c.model.category_dim);
    f.get("sentiment_dim", c.model.sentiment_dim);
    f.get("hidden", c.model.hidden);
    f.get("token_dim", c.model.token_dim);
    f.get("window", c.model.window);
    std::string activation(to_string(c.model.activation));
    std::string encoder(to_string(c.model.encoder));
    f.get("activation", activation);
    f.get("encoder", encoder);
    c.model.activation = activation_from_string(activation);
    c.model.encoder = encoder_kind_from_string(encoder);
    f.finish();
  }
  if (const json* p = top.sub("train")) {
    Fields f(*p, "train.");
    f.get("learning_rate", c.train.learning_rate);
    f.get("batch_size", c.train.batch_size);
    f.get("dropout", c.train.dropout);
    f.get("epochs", c.train.epochs);
    f.get("beta1", c.train.beta1);
    f.get("beta2", c.train.beta2);
    f.get("epsilon", c.train.epsilon);
    f.get("structural_mask", c.train.structural_mask);
    f.get("validation_fraction", c.train.validation_fraction);
    f.finish();
  }
  if (const json* p = top.sub("cluster")) {
    Fields f(*p, "cluster.");
    f.get("threshold", c.cluster.threshold);
    f.get("max_iter", c.cluster.max_iter);
    std::string scope(to_string(c.cluster.scope));
    std::string embedding(to_string(c.phrase_embedding));
    f.get("scope", scope);
    f.get("embedding", embedding);
    c.cluster.scope = cluster_scope_from_string(scope);
    c.phrase_embedding = phrase_embedding_from_string(embedding);
    f.finish();
  }
  if (const json* p = top.sub("report")) {
    Fields f(*p, "report.");
    f.get("top_k", c.top_k);
    f.get("examples", c.examples);
    f.finish();
  }
  if (const json* p = top.sub("eval")) {
    Fields f(*p, "eval.");
    f.get("n_outer", c.n_outer);
    if (const json* g = f.sub("grid")) {
      if (!g->is_array()) throw InputError("config: eval.grid must be an array");
      for (std::size_t i = 0; i < g->size(); ++i) {
        c.grid.push_back(point_from_json((*g)[i], "eval.grid[" + std::to_string(i) + "]."));
      }
    }
    f.finish();
  }
  top.get("seed", c.seed);
  top.finish();
  c.train.seed = c.seed;
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  auto in = open_in(path, "config");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return from_json(j);
}

json PipelineConfig::to_json() const {
  json grid_json = json::array();
  for (const auto& p : grid) grid_json.push_back(point_to_json(p));
  return {
      {"paths",
       {{"corpus", path_json(paths.corpus)},
        {"labeled", path_json(paths.labeled)},
        {"lexicon", path_json(paths.lexicon)},
        {"app_names", path_json(paths.app_names)},
        {"token_vectors", path_json(paths.token_vectors)},
        {"phrase_vectors", path_json(paths.phrase_vectors)},
        {"checkpoint", path_json(paths.checkpoint)},
        {"gold_clusters", path_json(paths.gold_clusters)},
        {"output_dir", path_json(paths.output_dir)}}},
      {"categories", categories},
      {"max_len", max_len},
      {"lemmatizer", lemmatizer},
      {"drop_non_ascii", drop_non_ascii},
      {"model",
       {{"category_dim", model.category_dim},
        {"sentiment_dim", model.sentiment_dim},
        {"hidden", model.hidden},
        {"token_dim", model.token_dim},
        {"window", model.window},
        {"activation", to_string(model.activation)},
        {"encoder", to_string(model.encoder)}}},
      {"train",
       {{"learning_rate", train.learning_rate},
        {"batch_size", train.batch_size},
        {"dropout", train.dropout},
        {"epochs", train.epochs},
        {"beta1", train.beta1},
        {"beta2", train.beta2},
        {"epsilon", train.epsilon},
        {"structural_mask", train.structural_mask},
        {"validation_fraction", train.validation_fraction}}},
      {"cluster",
       {{"threshold", cluster.threshold},
        {"max_iter", cluster.max_iter},
        {"scope", to_string(cluster.scope)},
        {"embedding", to_string(phrase_embedding)}}},
      {"report", {{"top_k", top_k}, {"examples", examples}}},
      {"eval", {{"n_outer", n_outer}, {"grid", std::move(grid_json)}}},
      {"seed", seed},
  };
}

void PipelineConfig::validate() const {
  if (categories.empty()) throw InputError("config: categories must list at least one category");
  std::set<std::string> unique(categories.begin(), categories.end());
  if (unique.size() != categories.size()) throw InputError("config: duplicate category");
  if (max_len < 1) throw InputError("config: max_len must be >= 1");
  (void)make_lemmatizer(lemmatizer);
  if (model.hidden < 1) throw InputError("config: model.hidden must be >= 1");
  if (model.token_dim < 1) throw InputError("config: model.token_dim must be >= 1");
  if (model.window < 0) throw InputError("config: model.window must be >= 0");
  train_config().validate();
  if (!(cluster.threshold >= -1.0 && cluster.threshold <= 1.0)) {
    throw InputError("config: cluster.threshold must lie in [-1, 1]");
  }
  if (cluster.max_iter < 1) throw InputError("config: cluster.max_iter must be >= 1");
  if (top_k < 1) throw InputError("config: report.top_k must be >= 1");
  if (n_outer < 2) throw InputError("config: eval.n_outer must be >= 2");
  for (const auto& p : grid) {
    if (!(p.learning_rate > 0.0) || p.hidden < 1 || p.token_dim < 1 || p.epochs < 1) {
      throw InputError("config: invalid eval.grid point");
    }
  }
}

TrainConfig PipelineConfig::train_config() const {
  TrainConfig t = train;
  t.seed = seed;
  return t;
}

// ---------------------------------------------------------------------------
// Report.

Report build_report(const ClusterSet& clusters, const std::vector<PhraseRecord>& phrases, const PosOracle& oracle,
                    std::size_t top_k, std::size_t max_examples) {
  Report r;
  r.scope = clusters.scope;
  r.top_k = top_k;

  std::map<std::string, ReportApp> apps;
  for (const auto& p : phrases) {
    auto [it, fresh] = apps.try_emplace(p.app_name, ReportApp{p.app_name, p.category, 0});
    ++it->second.phrase_count;
  }
  for (const auto& [name, a] : apps) r.apps.push_back(a);

  std::vector<ReportCluster> all;
  for (const auto& c : clusters.clusters) {
    std::vector<PhraseRecord> members;
    std::map<std::string, std::vector<PhraseRecord>> by_app;
    for (std::size_t i : c.members) {
      members.push_back(phrases.at(i));
      by_app[phrases[i].app_name].push_back(phrases[i]);
    }
    const ClusterSummary s = name_cluster(members, oracle, 0);
    ReportCluster rc;
    rc.label = c.label;
    rc.category = c.category;
    rc.name = s.name;
    rc.keyword = s.keyword;
    rc.count = members.size();
    for (const auto& [app, list] : by_app) {
      rc.examples[app] = select_examples(list, max_examples);
      r.full_matrix.push_back({app, c.label,
                               static_cast<double>(list.size()) / static_cast<double>(apps.at(app).phrase_count)});
    }
    all.push_back(std::move(rc));
  }

  // Rank within each category by count, then label.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < all.size(); ++i) groups[all[i].category].push_back(i);
  std::set<int> shown;
  for (auto& [category, idx] : groups) {
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      if (all[a].count != all[b].count) return all[a].count > all[b].count;
      return all[a].label < all[b].label;
    });
    for (std::size_t k = 0; k < idx.size(); ++k) {
      all[idx[k]].rank = k + 1;
      if (k < top_k) shown.insert(all[idx[k]].label);
    }
  }
  for (auto& rc : all) {
    if (shown.count(rc.label)) r.clusters.push_back(std::move(rc));
  }
  std::sort(r.clusters.begin(), r.clusters.end(), [](const ReportCluster& a, const ReportCluster& b) {
    if (a.category != b.category) return a.category < b.category;
    return a.rank < b.rank;
  });
  for (const auto& b : r.full_matrix) {
    if (shown.count(b.label)) r.matrix.push_back(b);
  }
  return r;
}

json Report::to_json() const {
  auto phrase_json = [](const PhraseRecord& p) {
    return json{{"review_id", p.review_id},
                {"sentence_index", p.sentence_index},
                {"span", {p.span.start, p.span.end}},
                {"phrase", p.phrase},
                {"sentence", p.sentence}};
  };
  auto bubbles = [](const std::vector<BubbleDatum>& v) {
    json out = json::array();
    for (const auto& b : v) out.push_back({{"app_name", b.app_name}, {"label", b.label}, {"size", b.size}});
    return out;
  };
  json apps_json = json::array();
  for (const auto& a : apps) {
    apps_json.push_back({{"app_name", a.app_name}, {"category", a.category}, {"phrase_count", a.phrase_count}});
  }
  json clusters_json = json::array();
  for (const auto& c : clusters) {
    json ex = json::object();
    for (const auto& [app, list] : c.examples) {
      json arr = json::array();
      for (const auto& p : list) arr.push_back(phrase_json(p));
      ex[app] = std::move(arr);
    }
    clusters_json.push_back({{"label", c.label},
                             {"category", c.category.empty() ? json(nullptr) : json(c.category)},
                             {"name", c.name},
                             {"keyword", c.keyword},
                             {"count", c.count},
                             {"rank", c.rank},
                             {"examples", std::move(ex)}});
  }
  return {{"schema_version", kSchemaVersion},
          {"scope", revmine::to_string(scope)},
          {"top_k", top_k},
          {"apps", std::move(apps_json)},
          {"clusters", std::move(clusters_json)},
          {"matrix", bubbles(matrix)},
          {"full_matrix", bubbles(full_matrix)}};
}

// ---------------------------------------------------------------------------
// Commands.

std::string default_sentences_path(const PipelineConfig& c) { return join_path(c.paths.output_dir, "sentences.jsonl"); }
std::string default_checkpoint_path(const PipelineConfig& c) {
  return c.paths.checkpoint.empty() ? join_path(c.paths.output_dir, "model.ckpt") : c.paths.checkpoint;
}
std::string default_phrases_path(const PipelineConfig& c) { return join_path(c.paths.output_dir, "phrases.jsonl"); }
std::string default_clusters_path(const PipelineConfig& c) { return join_path(c.paths.output_dir, "clusters.json"); }
std::string default_report_path(const PipelineConfig& c) { return join_path(c.paths.output_dir, "report.json"); }
std::string default_eval_path(const PipelineConfig& c) { return join_path(c.paths.output_dir, "eval.json"); }

std::size_t cmd_preprocess(const PipelineConfig& c, const std::string& in_path, const std::string& out_path) {
  require_readable(in_path, "review corpus");
  if (!c.paths.lexicon.empty()) require_readable(c.paths.lexicon, "sentiment lexicon");
  if (!c.paths.app_names.empty()) require_readable(c.paths.app_names, "app-name list");

  const CategorySet categories(c.categories);
  const auto lemmatizer = make_lemmatizer(c.lemmatizer);
  const SentimentLexicon lexicon =
      c.paths.lexicon.empty() ? SentimentLexicon::builtin() : SentimentLexicon::load(c.paths.lexicon);
  std::vector<std::string> app_names;
  if (!c.paths.app_names.empty()) {
    std::ifstream names(c.paths.app_names);
    app_names = read_app_names(names);
  }
  std::ifstream in(in_path, std::ios::binary);
  const auto reviews = read_reviews(in, categories);

  auto out = open_out(out_path);
  std::size_t n = 0;
  for (const auto& review : reviews) {
    int index = 0;
    for (const auto& raw : split_sentences(review.body)) {
      LabeledSentence ls;
      ls.sentence.tokens = clean_tokens(raw, app_names, *lemmatizer);
      if (ls.sentence.tokens.empty()) continue;
      if (c.drop_non_ascii && !has_ascii_letter(ls.sentence.tokens)) continue;
      truncate(ls, c.max_len);
      ls.sentence.review_id = review.review_id;
      ls.sentence.index = index++;
      ls.sentence.app_name = review.app_name;
      ls.sentence.attrs.category = review.category;
      ls.sentence.attrs.sentiment = assign_sentiment(score_sentence(ls.sentence.tokens, lexicon));
      write_labeled(out, ls, categories, false);
      ++n;
    }
  }
  close_checked(out, out_path);
  return n;
}

TrainResult cmd_train(const PipelineConfig& c, const std::string& in_path, const std::string& out_path) {
  require_readable(in_path, "labeled data");
  const auto data = load_labeled(c, in_path, true);
  if (data.empty()) throw InputError("labeled data '" + in_path + "' contains no sentences");
  const auto store = load_token_store(c);
  TrainResult result = train(to_tagged(data), c.train_config(), c.model, c.categories, store.get());

  auto out = open_out(out_path);
  result.model.write(out);
  close_checked(out, out_path);
  const std::string log_path = out_path + ".log.json";
  auto log = open_out(log_path);
  log << log_json(result).dump(2) << '\n';
  close_checked(log, log_path);
  return result;
}

std::size_t cmd_extract(const PipelineConfig& c, const std::string& in_path, const std::string& checkpoint,
                        const std::string& out_path) {
  require_readable(in_path, "sentence file");
  require_readable(checkpoint, "checkpoint");
  const CrfModel model = CrfModel::load(checkpoint);
  if (model.categories != c.categories) throw InputError("checkpoint categories differ from the config");
  PipelineConfig effective = c;
  effective.model.encoder = model.spec.encoder;
  effective.model.token_dim = model.spec.token_dim;
  const auto store = load_token_store(effective);
  const auto sentences = load_labeled(c, in_path, false);

  auto out = open_out(out_path);
  std::size_t n = 0;
  for (const auto& ls : sentences) {
    for (const auto& p : extract(ls.sentence, model, store.get())) {
      write_phrase(out, p);
      ++n;
    }
  }
  close_checked(out, out_path);
  return n;
}

ClusterSet cmd_cluster(const PipelineConfig& c, const std::string& in_path, const std::string& checkpoint,
                       const std::string& out_path) {
  require_readable(in_path, "phrase file");
  const auto phrases = load_phrases(in_path);
  if (phrases.empty()) {
    throw InputError("phrase file '" + in_path + "' is empty; check that extraction produced any phrases");
  }
  std::unique_ptr<PhraseEmbedder> embedder;
  CrfModel model;
  PrecomputedVectors store;
  if (c.phrase_embedding == PhraseEmbedding::kNative) {
    require_readable(checkpoint, "checkpoint");
    model = CrfModel::load(checkpoint);
    if (model.spec.encoder != EncoderKind::kNative) {
      throw InputError("native phrase embeddings need a checkpoint with a native token encoder");
    }
    embedder = std::make_unique<NativePooledEmbedder>(model.native);
  } else {
    require_readable(c.paths.phrase_vectors, "phrase vector store");
    store = PrecomputedVectors::load(c.paths.phrase_vectors);
    embedder = std::make_unique<PrecomputedPhraseEmbedder>(store);
  }
  const LexiconPosOracle oracle;
  ClusterSet set = cluster_phrases(phrases, *embedder, c.cluster, oracle, c.seed);
  auto out = open_out(out_path);
  out << revmine::to_json(set, phrases).dump(2) << '\n';
  close_checked(out, out_path);
  return set;
}

Report cmd_report(const PipelineConfig& c, const std::string& clusters_path, const std::string& phrases_path,
                  const std::string& out_path) {
  require_readable(clusters_path, "cluster file");
  require_readable(phrases_path, "phrase file");
  const auto phrases = load_phrases(phrases_path);
  std::ifstream in(clusters_path, std::ios::binary);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("cluster file '" + clusters_path + "' is not valid JSON: " + e.what());
  }
  const ClusterSet set = cluster_set_from_json(j, phrases);
  const LexiconPosOracle oracle;
  Report report = build_report(set, phrases, oracle, c.top_k, c.examples);
  auto out = open_out(out_path);
  out << report.to_json().dump(2) << '\n';
  close_checked(out, out_path);
  return report;
}

std::pair<std::map<std::string, ClusterScores>, ClusterScores> score_clusters(
    const ClusterSet& predicted, const std::vector<PhraseRecord>& phrases, std::istream& gold) {
  std::map<std::string, int> pred_label;
  std::map<std::string, std::string> app_of;
  for (const auto& c : predicted.clusters) {
    for (std::size_t i : c.members) {
      const auto& p = phrases.at(i);
      const std::string key = phrase_key(p.review_id, p.sentence_index, p.span);
      pred_label[key] = c.label;
      app_of[key] = p.app_name;
    }
  }
  std::map<std::string, int> gold_ids;
  KeyedPartition g_all, c_all;
  std::map<std::string, std::pair<KeyedPartition, KeyedPartition>> per_app;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(gold, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json obj = json::parse(line);
      const auto span = obj.at("span").get<std::vector<int>>();
      if (span.size() != 2) throw InputError("span must be [start,end]");
      const std::string key =
          phrase_key(obj.at("review_id").get<std::string>(), obj.at("sentence_index").get<int>(), {span[0], span[1]});
      const json& label = obj.at("label");
      const std::string label_text = label.is_string() ? label.get<std::string>() : label.dump();
      const int gid = gold_ids.try_emplace(label_text, static_cast<int>(gold_ids.size())).first->second;
      auto it = pred_label.find(key);
      if (it == pred_label.end()) throw InputError("gold phrase " + key + " has no predicted cluster");
      if (!g_all.emplace(key, gid).second) throw InputError("duplicate gold phrase " + key);
      c_all[key] = it->second;
      auto& [g_app, c_app] = per_app[app_of[key]];
      g_app[key] = gid;
      c_app[key] = it->second;
    } catch (const json::exception& e) {
      throw InputError("gold clusters line " + std::to_string(line_no) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("gold clusters line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (g_all.size() < 2) throw InputError("gold clusters need at least two phrases");
  std::map<std::string, ClusterScores> apps;
  for (const auto& [app, parts] : per_app) {
    if (parts.first.size() < 2) continue;
    apps[app] = {ari(parts.first, parts.second), nmi(parts.first, parts.second)};
  }
  return {apps, {ari(g_all, c_all), nmi(g_all, c_all)}};
}

EvalReport cmd_eval(const PipelineConfig& c, const std::string& in_path, const std::string& out_path,
                    std::ostream& table, const std::string& clusters_path, const std::string& phrases_path) {
  require_readable(in_path, "labeled data");
  if (!c.paths.gold_clusters.empty()) {
    require_readable(c.paths.gold_clusters, "gold clusters");
    require_readable(clusters_path, "cluster file");
    require_readable(phrases_path, "phrase file");
  }
  const auto data = load_labeled(c, in_path, true);
  const auto store = load_token_store(c);
  const PrecomputedVectors* store_ptr = store.get();

  std::vector<HyperPoint> grid = c.grid;
  if (grid.empty()) {
    grid.push_back({c.train.learning_rate, c.model.hidden, c.model.token_dim, c.train.epochs});
  }
  const TrainFn train_fn = [&c, store_ptr](const std::vector<LabeledSentence>& tr,
                                           const std::vector<LabeledSentence>& va, const HyperPoint& point,
                                           std::uint64_t seed) -> Predictor {
    TrainConfig tc = c.train_config();
    tc.learning_rate = point.learning_rate;
    tc.epochs = point.epochs;
    tc.seed = seed;
    ModelSpec spec = c.model;
    spec.hidden = point.hidden;
    if (spec.encoder == EncoderKind::kNative) spec.token_dim = point.token_dim;
    auto model = std::make_shared<CrfModel>(
        train(to_tagged(tr), to_tagged(va), tc, spec, c.categories, store_ptr).model);
    return [model, store_ptr](const Sentence& s) { return predict_spans(*model, s, store_ptr); };
  };
  EvalReport report = nested_cv(data, c.n_outer, grid, train_fn, c.seed);

  if (!c.paths.gold_clusters.empty()) {
    const auto phrases = load_phrases(phrases_path);
    std::ifstream cin_(clusters_path, std::ios::binary);
    json j;
    try {
      j = json::parse(cin_);
    } catch (const json::parse_error& e) {
      throw InputError("cluster file '" + clusters_path + "' is not valid JSON: " + e.what());
    }
    const ClusterSet set = cluster_set_from_json(j, phrases);
    std::ifstream gold(c.paths.gold_clusters, std::ios::binary);
    auto [apps, overall] = score_clusters(set, phrases, gold);
    report.clustering_per_app = std::move(apps);
    report.clustering_overall = overall;
  }

  auto out = open_out(out_path);
  out << revmine::to_json(report).dump(2) << '\n';
  close_checked(out, out_path);
  print_table(table, report);
  return report;
}

}  // namespace revmine
