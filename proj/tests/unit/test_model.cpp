#include <sstream>

#include "doctest.h"
#include "oracles.hpp"
#include "revmine/model.hpp"

using namespace revmine;

namespace {

// Token "send" scores B, "a"/"video" score I, anything else O.
CrfModel worked_example_model() {
  ModelSpec spec;
  spec.category_dim = 2;
  spec.sentiment_dim = 2;
  spec.hidden = 3;
  spec.token_dim = 3;
  spec.window = 0;
  CrfModel m = CrfModel::create(spec, {"communication"}, {"send", "a", "video"}, true, 0.0, 1);
  m.head.hidden_w.fill(0.0);
  m.head.hidden_b.fill(0.0);
  m.head.out_w.fill(0.0);
  m.head.out_b.fill(0.0);
  for (std::size_t j = 0; j < 3; ++j) {
    m.head.hidden_w(j, 4 + j) = 1.0;
    m.head.out_w(j, j) = 10.0;
  }
  m.native.table.fill(0.0);
  for (std::size_t r = 0; r < m.native.table.rows(); ++r) m.native.table(r, 2) = 1.0;
  m.native.table(m.native.id("send"), 2) = 0.0;
  m.native.table(m.native.id("send"), 0) = 1.0;
  for (const char* w : {"a", "video"}) {
    m.native.table(m.native.id(w), 2) = 0.0;
    m.native.table(m.native.id(w), 1) = 1.0;
  }
  for (int i = 0; i < kNumStates; ++i) {
    for (int j = 0; j < kNumStates; ++j) m.transitions.set(i, j, 0.0);
  }
  return m;
}

Sentence make_sentence(const std::string& text) {
  Sentence s;
  s.review_id = "r1";
  s.index = 0;
  s.app_name = "whatsapp";
  s.attrs = {0, -3};
  std::istringstream in(text);
  std::string w;
  while (in >> w) s.tokens.push_back(w);
  return s;
}

}  // namespace

TEST_SUITE("model") {
  TEST_CASE("analytic gradients match central differences for every parameter group") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const auto groups = testing::gradient_check(seed, 1e-5, seed % 2 == 0);
      CHECK(groups.size() == 8);
      for (const auto& g : groups) {
        CAPTURE(seed);
        CAPTURE(g.name);
        CHECK(g.checked > 0);
        CHECK(g.max_rel_error < 1e-4);
      }
    }
  }

  TEST_CASE("relu head gradients") {
    for (std::uint64_t seed = 20; seed < 24; ++seed) {
      for (const auto& g : testing::gradient_check(seed, 1e-5, true, Activation::kRelu)) {
        CAPTURE(g.name);
        CHECK(g.max_rel_error < 1e-4);
      }
    }
  }

  TEST_CASE("duplicating a sentence leaves the mean loss unchanged") {
    CrfModel m = CrfModel::create(ModelSpec{}, {"c"}, {"send", "video"}, true, 0.1, 3);
    TaggedSentence ts = encode_bio(make_sentence("i can not send a video"), {{3, 6}});
    ts.sentence.attrs.category = 0;
    const std::vector<TaggedSentence> one{ts};
    const std::vector<TaggedSentence> two{ts, ts};
    CHECK(nll_loss(one, m, nullptr) == doctest::Approx(nll_loss(two, m, nullptr)).epsilon(1e-12));
  }

  TEST_CASE("extract on the worked sentence") {
    const CrfModel m = worked_example_model();
    const Sentence s = make_sentence("whenever i go to send a video it freezes up");
    const auto tags = predict_tags(m, s, nullptr);
    std::string code;
    for (BioTag t : tags) code += tag_char(t);
    CHECK(code == "OOOOBIIOOO");
    const auto phrases = extract(s, m, nullptr);
    REQUIRE(phrases.size() == 1);
    CHECK(phrases[0].phrase == "send a video");
    CHECK(phrases[0].span == Span{4, 7});
    CHECK(phrases[0].review_id == "r1");
    CHECK(phrases[0].app_name == "whatsapp");
    CHECK(phrases[0].category == "communication");
    CHECK(phrases[0].sentiment == -3);
  }

  TEST_CASE("extract yields nothing on all-O and two records for two runs") {
    const CrfModel m = worked_example_model();
    CHECK(extract(make_sentence("it freezes up"), m, nullptr).empty());
    const auto two = extract(make_sentence("send video then send a video"), m, nullptr);
    REQUIRE(two.size() == 2);
    CHECK(two[0].span == Span{0, 2});
    CHECK(two[1].span == Span{3, 6});
  }

  TEST_CASE("checkpoint round-trip reproduces parameters and extraction exactly") {
    ModelSpec spec;
    spec.hidden = 7;
    spec.token_dim = 5;
    spec.activation = Activation::kRelu;
    const CrfModel m = CrfModel::create(spec, {"a", "b"}, {"send", "video", "photo"}, false, 0.2, 11);
    std::stringstream buf;
    m.write(buf);
    const CrfModel back = CrfModel::read(buf);
    CHECK(back.checksum() == m.checksum());
    CHECK(back.spec == m.spec);
    CHECK(back.categories == m.categories);
    CHECK(back.native.vocab() == m.native.vocab());
    CHECK(back.transitions.structural_mask() == m.transitions.structural_mask());
    CHECK(back.head.dropout == m.head.dropout);
    const Sentence s = make_sentence("send the photo and video now");
    CHECK(model_emissions(back, s, nullptr) == model_emissions(m, s, nullptr));
    CHECK(extract(s, back, nullptr) == extract(s, m, nullptr));
  }

  TEST_CASE("checkpoint version and magic are checked") {
    const CrfModel m = CrfModel::create(ModelSpec{}, {"a"}, {"x"}, true, 0.1, 1);
    std::stringstream buf;
    m.write(buf);
    std::string bytes = buf.str();
    std::string wrong_version = bytes;
    wrong_version[4] = static_cast<char>(CrfModel::kCheckpointVersion + 1);
    std::stringstream in1(wrong_version);
    CHECK_THROWS_AS(CrfModel::read(in1), InputError);
    std::stringstream in2("NOPE" + bytes.substr(4));
    CHECK_THROWS_AS(CrfModel::read(in2), InputError);
    std::stringstream in3(bytes.substr(0, bytes.size() / 2));
    CHECK_THROWS_AS(CrfModel::read(in3), InputError);
  }

  TEST_CASE("text-only models have no attribute parameters") {
    ModelSpec spec;
    spec.category_dim = 0;
    spec.sentiment_dim = 0;
    const CrfModel m = CrfModel::create(spec, {"a"}, {"x"}, true, 0.1, 1);
    CHECK(m.head.input_width() == spec.token_dim);
    const Sentence s = make_sentence("x y");
    Sentence other = s;
    other.attrs.sentiment = 5;
    CHECK(model_emissions(m, s, nullptr) == model_emissions(m, other, nullptr));
  }

  TEST_CASE("precomputed encoder reads vectors by sentence key") {
    ModelSpec spec;
    spec.encoder = EncoderKind::kPrecomputed;
    spec.token_dim = 4;
    const CrfModel m = CrfModel::create(spec, {"a"}, {}, true, 0.1, 5);
    CHECK(m.native.vocab().empty());
    PrecomputedVectors store(4);
    Rng rng(3);
    Sentence s = make_sentence("one two three");
    store.insert(s.key(), testing::random_matrix(rng, 3, 4, 1.0));
    CHECK(model_emissions(m, s, &store).rows() == 3);
    CHECK_THROWS_AS(model_emissions(m, s, nullptr), InputError);
    s.index = 4;
    CHECK_THROWS_AS(model_emissions(m, s, &store), InputError);
  }
}
