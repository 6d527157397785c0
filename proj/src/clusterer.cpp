#include "revmine/clusterer.hpp"

#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

namespace revmine {

using nlohmann::json;

namespace {

std::vector<std::string> split_words(std::string_view phrase) {
  std::vector<std::string> out;
  std::istringstream in{std::string(phrase)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

double norm(const Embedding& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<int> densify(const std::vector<int>& labels) {
  std::vector<int> sorted = labels;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out[i] = static_cast<int>(std::lower_bound(sorted.begin(), sorted.end(), labels[i]) - sorted.begin());
  }
  return out;
}

template <typename Map>
typename Map::key_type most_frequent(const Map& counts) {
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;  // std::map iterates lexicographically
  }
  return best->first;
}

}  // namespace

void validate_embedding(const Embedding& v, std::string_view what) {
  if (v.empty()) throw InputError("empty embedding for '" + std::string(what) + "'");
  bool nonzero = false;
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError("non-finite embedding for '" + std::string(what) + "'");
    nonzero = nonzero || x != 0.0;
  }
  if (!nonzero) throw InputError("zero embedding for '" + std::string(what) + "'");
}

Embedding PrecomputedPhraseEmbedder::embed(std::string_view phrase) const {
  if (phrase.empty()) throw InputError("empty phrase");
  if (!store_->contains(phrase)) throw InputError("phrase '" + std::string(phrase) + "' missing from vector store");
  const Matrix& m = store_->at(phrase);
  if (m.rows() != 1) throw InputError("phrase vector for '" + std::string(phrase) + "' must have exactly one row");
  Embedding v(m.row(0).begin(), m.row(0).end());
  validate_embedding(v, phrase);
  return v;
}

Embedding NativePooledEmbedder::embed(std::string_view phrase) const {
  const auto words = split_words(phrase);
  if (words.empty()) throw InputError("empty phrase");
  Embedding v(native_->dim(), 0.0);
  for (const auto& w : words) {
    const auto row = native_->table.row(native_->id(w));
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += row[k];
  }
  for (double& x : v) x /= static_cast<double>(words.size());
  validate_embedding(v, phrase);
  return v;
}

double cosine(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) throw InputError("embedding dimensions differ");
  double dot = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  const double c = dot / (norm(a) * norm(b));
  return std::clamp(c, -1.0, 1.0);
}

void SimilarityGraph::add_edge(std::size_t i, std::size_t j, double weight) {
  if (i == j) throw InputError("self-loops are not allowed");
  if (i >= adj_.size() || j >= adj_.size()) throw InputError("edge endpoint out of range");
  auto insert = [](std::vector<Edge>& list, std::size_t to, double w) {
    auto it = std::lower_bound(list.begin(), list.end(), to, [](const Edge& e, std::size_t t) { return e.to < t; });
    if (it != list.end() && it->to == to) {
      it->weight = w;
    } else {
      list.insert(it, Edge{to, w});
    }
  };
  insert(adj_[i], j, weight);
  insert(adj_[j], i, weight);
}

std::size_t SimilarityGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& list : adj_) n += list.size();
  return n / 2;
}

bool SimilarityGraph::has_edge(std::size_t i, std::size_t j) const {
  const auto& list = adj_.at(i);
  return std::binary_search(list.begin(), list.end(), Edge{j, 0.0},
                            [](const Edge& a, const Edge& b) { return a.to < b.to; });
}

double SimilarityGraph::weight(std::size_t i, std::size_t j) const {
  const auto& list = adj_.at(i);
  auto it = std::lower_bound(list.begin(), list.end(), j, [](const Edge& e, std::size_t t) { return e.to < t; });
  return it != list.end() && it->to == j ? it->weight : 0.0;
}

SimilarityGraph build_graph(const std::vector<Embedding>& embeddings, double threshold) {
  if (!(threshold >= -1.0 && threshold <= 1.0)) throw InputError("threshold must lie in [-1, 1]");
  if (embeddings.empty()) throw InputError("no embeddings to cluster");
  const std::size_t n = embeddings.size();
  std::vector<double> norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    validate_embedding(embeddings[i], "#" + std::to_string(i));
    if (embeddings[i].size() != embeddings[0].size()) throw InputError("embedding dimensions differ");
    norms[i] = norm(embeddings[i]);
  }
  SimilarityGraph g(n, threshold);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < embeddings[i].size(); ++k) dot += embeddings[i][k] * embeddings[j][k];
      const double c = std::clamp(dot / (norms[i] * norms[j]), -1.0, 1.0);
      if (c > threshold) g.add_edge(i, j, c);
    }
  }
  return g;
}

int ClusterAssignment::cluster_count() const {
  if (labels.empty()) return 0;
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

ClusterAssignment chinese_whispers(const SimilarityGraph& graph, std::uint64_t seed, int max_iter) {
  std::vector<int> initial(graph.size());
  std::iota(initial.begin(), initial.end(), 0);
  return chinese_whispers(graph, std::move(initial), seed, max_iter);
}

ClusterAssignment chinese_whispers(const SimilarityGraph& graph, std::vector<int> labels, std::uint64_t seed,
                                   int max_iter) {
  if (labels.size() != graph.size()) throw InputError("initial labels do not match the graph size");
  if (max_iter < 1) throw InputError("max_iter must be >= 1");
  Rng rng(seed);
  std::vector<std::size_t> order(graph.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::map<int, double> score;

  ClusterAssignment out;
  while (out.iterations < max_iter) {
    ++out.iterations;
    shuffle(order, rng);
    bool changed = false;
    for (std::size_t node : order) {
      const auto& nb = graph.neighbors(node);
      if (nb.empty()) continue;
      score.clear();
      for (const Edge& e : nb) score[labels[e.to]] += e.weight;
      const int best = most_frequent(score);
      if (best != labels[node]) {
        labels[node] = best;
        changed = true;
      }
    }
    if (!changed) {
      out.converged = true;
      break;
    }
  }
  out.labels = densify(labels);
  return out;
}

std::vector<int> connected_components(const SimilarityGraph& graph) {
  std::vector<int> comp(graph.size(), -1);
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t s = 0; s < graph.size(); ++s) {
    if (comp[s] >= 0) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      for (const Edge& e : graph.neighbors(u)) {
        if (comp[e.to] < 0) {
          comp[e.to] = next;
          stack.push_back(e.to);
        }
      }
    }
    ++next;
  }
  return comp;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& builtin_pos_words();

LexiconPosOracle::LexiconPosOracle() : words_(builtin_pos_words()) {
  std::sort(words_.begin(), words_.end());
  words_.erase(std::unique(words_.begin(), words_.end()), words_.end());
}

bool LexiconPosOracle::is_noun_or_verb(std::string_view token) const {
  if (token.empty() || token.front() == '<') return false;
  if (std::binary_search(words_.begin(), words_.end(), token, std::less<>{})) return true;
  auto ends_with = [&](std::string_view suffix) {
    return token.size() > suffix.size() + 1 && token.substr(token.size() - suffix.size()) == suffix;
  };
  return ends_with("tion") || ends_with("ment") || ends_with("ing");
}

std::vector<PhraseRecord> select_examples(const std::vector<PhraseRecord>& members, std::size_t k) {
  std::map<std::string, std::pair<std::size_t, std::size_t>> seen;  // phrase -> (count, first index)
  for (std::size_t i = 0; i < members.size(); ++i) {
    auto [it, fresh] = seen.try_emplace(members[i].phrase, 0, i);
    ++it->second.first;
  }
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> ranked(seen.begin(), seen.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second.first > b.second.first; });
  std::vector<PhraseRecord> out;
  for (std::size_t i = 0; i < ranked.size() && out.size() < k; ++i) out.push_back(members[ranked[i].second.second]);
  return out;
}

ClusterSummary name_cluster(const std::vector<PhraseRecord>& members, const PosOracle& oracle,
                            std::size_t max_examples) {
  if (members.empty()) throw InputError("cannot name an empty cluster");
  std::map<std::string, std::size_t> all, content;
  std::vector<std::vector<std::string>> words;
  words.reserve(members.size());
  for (const auto& m : members) {
    words.push_back(split_words(m.phrase));
    for (const auto& w : words.back()) {
      ++all[w];
      if (oracle.is_noun_or_verb(w)) ++content[w];
    }
  }
  ClusterSummary out;
  out.count = members.size();
  if (all.empty()) {
    out.name = members.front().phrase;
  } else {
    out.keyword = most_frequent(content.empty() ? all : content);
    std::map<std::string, std::size_t> phrases;
    for (std::size_t i = 0; i < members.size(); ++i) {
      if (std::find(words[i].begin(), words[i].end(), out.keyword) != words[i].end()) ++phrases[members[i].phrase];
    }
    out.name = most_frequent(phrases);
  }
  out.examples = select_examples(members, max_examples);
  return out;
}

// ---------------------------------------------------------------------------

std::string_view to_string(ClusterScope s) { return s == ClusterScope::kGlobal ? "global" : "per-category"; }

ClusterScope cluster_scope_from_string(std::string_view s) {
  if (s == "per-category") return ClusterScope::kPerCategory;
  if (s == "global") return ClusterScope::kGlobal;
  throw InputError("unknown cluster scope '" + std::string(s) + "' (expected per-category or global)");
}

ClusterSet cluster_phrases(const std::vector<PhraseRecord>& phrases, const PhraseEmbedder& embedder,
                           const ClusterOptions& options, const PosOracle& oracle, std::uint64_t seed) {
  if (phrases.empty()) throw InputError("no phrases to cluster; check that extraction produced any");
  std::vector<std::string> group_names;
  std::vector<std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < phrases.size(); ++i) {
    const std::string key = options.scope == ClusterScope::kGlobal ? std::string() : phrases[i].category;
    auto it = std::find(group_names.begin(), group_names.end(), key);
    if (it == group_names.end()) {
      group_names.push_back(key);
      groups.emplace_back();
      it = group_names.end() - 1;
    }
    groups[static_cast<std::size_t>(it - group_names.begin())].push_back(i);
  }

  ClusterSet set;
  set.scope = options.scope;
  int offset = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& idx = groups[g];
    std::vector<Embedding> emb;
    emb.reserve(idx.size());
    for (std::size_t i : idx) emb.push_back(embedder.embed(phrases[i].phrase));
    const SimilarityGraph graph = build_graph(emb, options.threshold);
    const ClusterAssignment a = chinese_whispers(graph, mix_seed(seed, g), options.max_iter);
    const int n_clusters = a.cluster_count();
    std::vector<Cluster> local(static_cast<std::size_t>(n_clusters));
    for (int c = 0; c < n_clusters; ++c) {
      local[static_cast<std::size_t>(c)].label = offset + c;
      local[static_cast<std::size_t>(c)].category = group_names[g];
    }
    for (std::size_t k = 0; k < idx.size(); ++k) local[static_cast<std::size_t>(a.labels[k])].members.push_back(idx[k]);
    for (auto& c : local) {
      std::vector<PhraseRecord> members;
      for (std::size_t i : c.members) members.push_back(phrases[i]);
      const ClusterSummary s = name_cluster(members, oracle, 0);
      c.name = s.name;
      c.keyword = s.keyword;
      set.clusters.push_back(std::move(c));
    }
    offset += n_clusters;
  }
  return set;
}

json to_json(const ClusterSet& set, const std::vector<PhraseRecord>& phrases) {
  json clusters = json::array();
  for (const auto& c : set.clusters) {
    json members = json::array();
    for (std::size_t i : c.members) {
      const auto& p = phrases.at(i);
      members.push_back({{"index", i},
                         {"review_id", p.review_id},
                         {"sentence_index", p.sentence_index},
                         {"span", {p.span.start, p.span.end}}});
    }
    json cj;
    cj["label"] = c.label;
    cj["category"] = c.category.empty() ? json(nullptr) : json(c.category);
    cj["name"] = c.name;
    cj["keyword"] = c.keyword;
    cj["count"] = c.members.size();
    cj["members"] = std::move(members);
    clusters.push_back(std::move(cj));
  }
  return {{"scope", to_string(set.scope)}, {"clusters", std::move(clusters)}};
}

ClusterSet cluster_set_from_json(const json& j, const std::vector<PhraseRecord>& phrases) {
  ClusterSet set;
  try {
    set.scope = cluster_scope_from_string(j.at("scope").get<std::string>());
    std::vector<bool> used(phrases.size(), false);
    for (const auto& cj : j.at("clusters")) {
      Cluster c;
      c.label = cj.at("label").get<int>();
      if (!cj.at("category").is_null()) c.category = cj.at("category").get<std::string>();
      c.name = cj.at("name").get<std::string>();
      c.keyword = cj.at("keyword").get<std::string>();
      for (const auto& m : cj.at("members")) {
        const auto i = m.at("index").get<std::size_t>();
        if (i >= phrases.size()) throw InputError("cluster member index " + std::to_string(i) + " out of range");
        const auto& p = phrases[i];
        const auto span = m.at("span").get<std::vector<int>>();
        if (m.at("review_id").get<std::string>() != p.review_id ||
            m.at("sentence_index").get<int>() != p.sentence_index || span.size() != 2 ||
            span[0] != p.span.start || span[1] != p.span.end) {
          throw InputError("cluster member " + std::to_string(i) + " does not match the phrase file");
        }
        if (used[i]) throw InputError("phrase " + std::to_string(i) + " appears in more than one cluster");
        used[i] = true;
        c.members.push_back(i);
      }
      if (c.members.empty()) throw InputError("cluster " + std::to_string(c.label) + " has no members");
      if (cj.at("count").get<std::size_t>() != c.members.size()) {
        throw InputError("cluster " + std::to_string(c.label) + " count does not match its members");
      }
      set.clusters.push_back(std::move(c));
    }
    if (std::find(used.begin(), used.end(), false) != used.end()) {
      throw InputError("cluster file does not cover every phrase");
    }
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed cluster file: ") + e.what());
  }
  return set;
}

}  // namespace revmine
