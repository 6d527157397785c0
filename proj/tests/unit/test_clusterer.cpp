#include <cmath>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "revmine/clusterer.hpp"
#include "revmine/eval.hpp"

using namespace revmine;

namespace {

PhraseRecord phrase(std::string text, std::string app = "whatsapp", std::string category = "communication",
                    int sentence = 0) {
  PhraseRecord p;
  p.phrase = std::move(text);
  p.app_name = std::move(app);
  p.category = std::move(category);
  p.review_id = p.app_name + "-" + p.phrase;
  p.sentence_index = sentence;
  p.sentiment = -2;
  p.span = {0, 1};
  p.sentence = p.phrase;
  return p;
}

SimilarityGraph complete_graph(std::size_t n, double w = 1.0) {
  SimilarityGraph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) g.add_edge(i, j, w);
  }
  return g;
}

class MapEmbedder final : public PhraseEmbedder {
 public:
  std::map<std::string, Embedding> table;
  Embedding embed(std::string_view p) const override {
    const auto it = table.find(std::string(p));
    if (it == table.end()) throw InputError("no vector for '" + std::string(p) + "'");
    return it->second;
  }
};

}  // namespace

TEST_SUITE("clusterer") {
  TEST_CASE("cosine and edge threshold") {
    CHECK(cosine({1, 2, 3}, {2, 4, 6}) == doctest::Approx(1.0));
    CHECK(cosine({1, 0}, {0, 1}) == 0.0);
    const auto identical = build_graph({{1, 2}, {1, 2}});
    CHECK(identical.has_edge(0, 1));
    CHECK(identical.weight(0, 1) == doctest::Approx(1.0));
    CHECK(build_graph({{1, 0}, {0, 1}}).edge_count() == 0);
    // cos 45 degrees ~ 0.707
    CHECK(build_graph({{1, 0}, {1, 1}}, 0.75).edge_count() == 0);
    CHECK(build_graph({{1, 0}, {1, 1}}, 0.7).edge_count() == 1);
    CHECK_THROWS_AS(build_graph({{1, 0}}, 1.5), InputError);
  }

  TEST_CASE("the threshold comparison is strict") {
    // Vectors whose cosine is exactly 0.5 in floating point.
    const Embedding a{1, 1, 1, 1};
    const Embedding b{1, 1, 1, -1};
    CHECK(cosine(a, b) == 0.5);
    CHECK(build_graph({a, b}, 0.5).edge_count() == 0);
    CHECK(build_graph({a, b}, 0.4999).edge_count() == 1);
  }

  TEST_CASE("graph is symmetric with no self-loops") {
    const auto set = testing::planted_clusters(3, 3, 10, 16, 0.3);
    const auto g = build_graph(set.vectors);
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK_FALSE(g.has_edge(i, i));
      for (const Edge& e : g.neighbors(i)) {
        CHECK(g.has_edge(e.to, i));
        CHECK(g.weight(e.to, i) == e.weight);
        CHECK(e.weight > 0.5);
      }
    }
    SimilarityGraph s(2);
    CHECK_THROWS_AS(s.add_edge(1, 1, 1.0), InputError);
  }

  TEST_CASE("embeddings are validated") {
    CHECK_THROWS_AS(validate_embedding({0, 0, 0}, "x"), InputError);
    CHECK_THROWS_AS(validate_embedding({}, "x"), InputError);
    CHECK_THROWS_AS(validate_embedding({1, std::nan("")}, "x"), InputError);
    CHECK_THROWS_AS(build_graph({{1, 0}, {0, 0}}), InputError);
  }

  TEST_CASE("Chinese Whispers on small graphs") {
    const auto edgeless = chinese_whispers(SimilarityGraph(5), 1);
    CHECK(edgeless.cluster_count() == 5);
    CHECK(edgeless.converged);
    CHECK(edgeless.labels == std::vector<int>{0, 1, 2, 3, 4});

    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto complete = chinese_whispers(complete_graph(6), seed);
      CHECK(complete.cluster_count() == 1);
    }

    SimilarityGraph cliques(8);
    for (std::size_t base : {0u, 4u}) {
      for (std::size_t i = base; i < base + 4; ++i) {
        for (std::size_t j = i + 1; j < base + 4; ++j) cliques.add_edge(i, j, 0.9);
      }
    }
    cliques.add_edge(3, 4, 0.55);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto a = chinese_whispers(cliques, seed);
      CHECK(a.cluster_count() == 2);
      CHECK(ari(Partition{0, 0, 0, 0, 1, 1, 1, 1}, a.labels) == 1.0);
    }
  }

  TEST_CASE("clusters never span connected components") {
    Rng rng(2);
    for (int rep = 0; rep < 50; ++rep) {
      const std::size_t n = 1 + uniform_index(rng, 40);
      const auto g = testing::random_graph(rng, n, 0.08);
      const auto a = chinese_whispers(g, static_cast<std::uint64_t>(rep));
      const auto comp = connected_components(g);
      std::map<int, int> label_comp;
      for (std::size_t i = 0; i < n; ++i) {
        const auto [it, fresh] = label_comp.emplace(a.labels[i], comp[i]);
        CHECK(it->second == comp[i]);
        if (g.neighbors(i).empty()) {
          int same = 0;
          for (int l : a.labels) same += l == a.labels[i];
          CHECK(same == 1);
        }
      }
      std::set<int> dense(a.labels.begin(), a.labels.end());
      CHECK(*dense.rbegin() == static_cast<int>(dense.size()) - 1);
    }
  }

  TEST_CASE("determinism and idempotence from a converged state") {
    Rng rng(3);
    for (int rep = 0; rep < 20; ++rep) {
      const auto g = testing::random_graph(rng, 30, 0.15);
      const auto a = chinese_whispers(g, 99);
      const auto b = chinese_whispers(g, 99);
      CHECK(a.labels == b.labels);
      CHECK(a.iterations == b.iterations);
      if (a.converged) {
        const auto again = chinese_whispers(g, a.labels, 5);
        CHECK(again.labels == a.labels);
        CHECK(again.iterations == 1);
      }
      CHECK(a.iterations <= kDefaultMaxIter);
    }
  }

  TEST_CASE("planted clusters are recovered") {
    int good = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto set = testing::planted_clusters(seed);
      double min_intra = 1.0, max_inter = -1.0;
      for (std::size_t i = 0; i < set.vectors.size(); ++i) {
        for (std::size_t j = i + 1; j < set.vectors.size(); ++j) {
          const double c = cosine(set.vectors[i], set.vectors[j]);
          if (set.truth[i] == set.truth[j]) min_intra = std::min(min_intra, c);
          else max_inter = std::max(max_inter, c);
        }
      }
      CHECK(min_intra > 0.8);
      CHECK(max_inter < 0.2);
      const auto a = chinese_whispers(build_graph(set.vectors, 0.5), seed);
      if (ari(set.truth, a.labels) >= 0.9) ++good;
    }
    CHECK(good >= 18);
  }

  TEST_CASE("POS oracle") {
    const LexiconPosOracle pos;
    CHECK(pos.is_noun_or_verb("send"));
    CHECK(pos.is_noun_or_verb("message"));
    CHECK(pos.is_noun_or_verb("notification"));
    CHECK(pos.is_noun_or_verb("loading"));
    CHECK_FALSE(pos.is_noun_or_verb("the"));
    CHECK_FALSE(pos.is_noun_or_verb("quickly"));
    CHECK_FALSE(pos.is_noun_or_verb("<number>"));
  }

  TEST_CASE("cluster naming") {
    const LexiconPosOracle pos;
    const std::vector<PhraseRecord> members{phrase("send message"), phrase("send message"),
                                            phrase("receive message"), phrase("the message")};
    const auto s = name_cluster(members, pos);
    CHECK(s.keyword == "message");
    CHECK(s.name == "send message");
    CHECK(s.count == 4);
    REQUIRE(s.examples.size() == 3);
    CHECK(s.examples[0].phrase == "send message");
    CHECK(s.examples[1].phrase == "receive message");
    CHECK(s.examples[2].phrase == "the message");

    // Ties: lexicographically smallest keyword, then phrase.
    const auto t = name_cluster({phrase("open video"), phrase("play video"), phrase("open app")}, pos);
    CHECK(t.keyword == "open");
    CHECK(t.name == "open app");

    // Without nouns or verbs any token may be the keyword.
    const auto u = name_cluster({phrase("very slow"), phrase("so slow")}, pos);
    CHECK(u.keyword == "slow");
    CHECK(u.name == "so slow");
    CHECK_THROWS_AS(name_cluster({}, pos), InputError);
  }

  TEST_CASE("select_examples ranks by count then text and keeps first occurrences") {
    std::vector<PhraseRecord> m{phrase("b", "x", "c", 0), phrase("a", "x", "c", 1), phrase("b", "x", "c", 2),
                                phrase("c", "x", "c", 3)};
    const auto ex = select_examples(m, 2);
    REQUIRE(ex.size() == 2);
    CHECK(ex[0].phrase == "b");
    CHECK(ex[0].sentence_index == 0);
    CHECK(ex[1].phrase == "a");
    CHECK(select_examples(m, 10).size() == 3);
  }

  TEST_CASE("phrase embedders") {
    PrecomputedVectors store(2);
    Matrix row(1, 2);
    row(0, 0) = 1;
    store.insert("send message", row);
    store.insert("two rows", Matrix(2, 2, 1.0));
    const PrecomputedPhraseEmbedder pre(store);
    CHECK(pre.embed("send message") == Embedding{1, 0});
    CHECK_THROWS_AS(pre.embed("missing phrase"), InputError);
    CHECK_THROWS_AS(pre.embed("two rows"), InputError);

    NativeEmbedding native({"send", "message"}, 2, 0);
    native.table.fill(0.0);
    native.table(native.id("send"), 0) = 2.0;
    native.table(native.id("message"), 1) = 4.0;
    const NativePooledEmbedder pooled(native);
    const auto v = pooled.embed("send message");
    CHECK(v[0] == doctest::Approx(1.0));
    CHECK(v[1] == doctest::Approx(2.0));
  }

  TEST_CASE("cluster_phrases per category and global") {
    MapEmbedder emb;
    emb.table = {{"send message", {1, 0, 0}}, {"send a message", {0.95, 0.05, 0}}, {"upload photo", {0, 1, 0}},
                 {"post photo", {0, 0.9, 0.1}}};
    const std::vector<PhraseRecord> ps{phrase("send message"), phrase("upload photo", "instagram", "social"),
                                       phrase("send a message", "gmail"), phrase("send message", "instagram", "social"),
                                       phrase("post photo", "instagram", "social")};
    const LexiconPosOracle pos;
    const auto per = cluster_phrases(ps, emb, ClusterOptions{}, pos, 1);
    CHECK(per.scope == ClusterScope::kPerCategory);
    REQUIRE(per.clusters.size() == 3);
    std::set<std::size_t> covered;
    for (std::size_t c = 0; c < per.clusters.size(); ++c) {
      CHECK(per.clusters[c].label == static_cast<int>(c));
      for (std::size_t i : per.clusters[c].members) {
        CHECK(ps[i].category == per.clusters[c].category);
        CHECK(covered.insert(i).second);
      }
    }
    CHECK(covered.size() == ps.size());
    CHECK(per.clusters[0].category == "communication");
    CHECK(per.clusters[0].members == std::vector<std::size_t>{0, 2});

    ClusterOptions global;
    global.scope = ClusterScope::kGlobal;
    const auto all = cluster_phrases(ps, emb, global, pos, 1);
    REQUIRE(all.clusters.size() == 2);
    CHECK(all.clusters[0].category.empty());

    const auto j = to_json(per, ps);
    const auto back = cluster_set_from_json(j, ps);
    CHECK(to_json(back, ps) == j);
    CHECK(j["clusters"][0]["count"] == 2);
    CHECK(to_json(all, ps)["clusters"][0]["category"].is_null());

    auto broken = j;
    broken["clusters"][0]["members"][0]["review_id"] = "nope";
    CHECK_THROWS_AS(cluster_set_from_json(broken, ps), InputError);
    CHECK_THROWS_AS(cluster_phrases({}, emb, ClusterOptions{}, pos, 1), InputError);
    CHECK_THROWS_AS(cluster_phrases({phrase("unknown")}, emb, ClusterOptions{}, pos, 1), InputError);
  }

  TEST_CASE("scope names") {
    CHECK(to_string(ClusterScope::kGlobal) == "global");
    CHECK(cluster_scope_from_string("per-category") == ClusterScope::kPerCategory);
    CHECK_THROWS_AS(cluster_scope_from_string("apps"), InputError);
  }
}
