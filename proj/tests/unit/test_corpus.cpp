#include <set>
#include <sstream>

#include "doctest.h"
#include "revmine/corpus.hpp"

using namespace revmine;

namespace {

std::vector<BioTag> tags_of(std::string_view s) {
  std::vector<BioTag> out;
  for (char ch : s) {
    if (ch == 'B') out.push_back(BioTag::B);
    if (ch == 'I') out.push_back(BioTag::I);
    if (ch == 'O') out.push_back(BioTag::O);
  }
  return out;
}

Sentence sentence_of(std::size_t n) {
  Sentence s;
  for (std::size_t i = 0; i < n; ++i) s.tokens.push_back("w" + std::to_string(i));
  return s;
}

}  // namespace

TEST_SUITE("corpus") {
  TEST_CASE("split_sentences on terminal punctuation") {
    CHECK(split_sentences("It crashes. I hate it!") == std::vector<std::string>{"It crashes.", "I hate it!"});
    CHECK(split_sentences("").empty());
    CHECK(split_sentences("whenever I go to send a video it freezes up") ==
          std::vector<std::string>{"whenever I go to send a video it freezes up"});
  }

  TEST_CASE("split_sentences handles newlines, runs and blank pieces") {
    CHECK(split_sentences("first line\nsecond line") == std::vector<std::string>{"first line", "second line"});
    CHECK(split_sentences("Why?!? Fine...  ") == std::vector<std::string>{"Why?!?", "Fine..."});
    CHECK(split_sentences("  \n . \n  ").size() <= 1);
    CHECK(split_sentences("   \n\n  ").empty());
  }

  TEST_CASE("split_sentences covers the body") {
    const std::string body = "One. Two!\nThree? four";
    std::string joined;
    for (const auto& s : split_sentences(body)) joined += s;
    std::string stripped;
    for (char ch : body) {
      if (ch != ' ' && ch != '\n') stripped += ch;
    }
    std::string joined_stripped;
    for (char ch : joined) {
      if (ch != ' ') joined_stripped += ch;
    }
    CHECK(joined_stripped == stripped);
  }

  TEST_CASE("clean_tokens replaces numbers and app names") {
    CHECK(clean_tokens("I waited 10 days", {}) == std::vector<std::string>{"i", "waited", "<number>", "days"});
    CHECK(clean_tokens("Gmail keeps crashing", {"gmail"}) ==
          std::vector<std::string>{"<appname>", "keeps", "crashing"});
    CHECK(clean_tokens("OK", {}) == std::vector<std::string>{"ok"});
  }

  TEST_CASE("clean_tokens prefers the longest multi-token app name") {
    const std::vector<std::string> apps{"google", "Google Maps"};
    CHECK(clean_tokens("google maps lost my route", apps) ==
          std::vector<std::string>{"<appname>", "lost", "my", "route"});
    CHECK(clean_tokens("GOOGLE is fine", apps) == std::vector<std::string>{"<appname>", "is", "fine"});
  }

  TEST_CASE("clean_tokens is idempotent") {
    const std::vector<std::string> apps{"whatsapp", "google maps"};
    const SuffixLemmatizer suffix;
    const IdentityLemmatizer identity;
    for (const char* raw : {"WhatsApp keeps crashing since 2 updates", "Google Maps maps 3 routes",
                            "i can't send messages", "running stopped boxes"}) {
      for (const Lemmatizer* lem : std::vector<const Lemmatizer*>{&identity, &suffix}) {
        const auto once = clean_tokens(raw, apps, *lem);
        std::string rejoined;
        for (const auto& t : once) rejoined += t + " ";
        CHECK(clean_tokens(rejoined, apps, *lem) == once);
      }
    }
  }

  TEST_CASE("suffix lemmatizer") {
    const SuffixLemmatizer lem;
    CHECK(lem.lemma("videos") == "video");
    CHECK(lem.lemma("boxes") == "box");
    CHECK(lem.lemma("stories") == "story");
    CHECK(lem.lemma("running") == "run");
    CHECK(lem.lemma("stopped") == "stop");
    CHECK(lem.lemma("send") == "send");
    CHECK(make_lemmatizer("identity")->lemma("videos") == "videos");
    CHECK_THROWS_AS(make_lemmatizer("porter"), InputError);
  }

  TEST_CASE("encode_bio examples") {
    const Sentence s10 = sentence_of(10);
    CHECK(encode_bio(s10, {{4, 7}}).tags == tags_of("OOOOBIIOOO"));
    CHECK(encode_bio(s10, {}).tags == tags_of("OOOOOOOOOO"));
    CHECK(encode_bio(sentence_of(3), {{0, 1}, {2, 3}}).tags == tags_of("BOB"));
  }

  TEST_CASE("encode_bio rejects bad spans") {
    const Sentence s = sentence_of(5);
    CHECK_THROWS_AS(encode_bio(s, {{0, 3}, {2, 4}}), InputError);
    CHECK_THROWS_AS(encode_bio(s, {{3, 6}}), InputError);
    CHECK_THROWS_AS(encode_bio(s, {{2, 2}}), InputError);
    CHECK_THROWS_AS(encode_bio(s, {{-1, 1}}), InputError);
  }

  TEST_CASE("decode_bio examples") {
    CHECK(decode_bio(tags_of("OOOOBIIOOO")) == std::vector<Span>{{4, 7}});
    CHECK(decode_bio(tags_of("OIIO")) == std::vector<Span>{{1, 3}});
    CHECK(decode_bio(tags_of("OOOO")).empty());
    CHECK(decode_bio(tags_of("IBIOBB")) == std::vector<Span>{{0, 1}, {1, 3}, {4, 5}, {5, 6}});
  }

  TEST_CASE("decode_bio is total and round-trips, exhaustively for T <= 8") {
    for (std::size_t T = 1; T <= 8; ++T) {
      std::size_t total = 1;
      for (std::size_t i = 0; i < T; ++i) total *= 3;
      const Sentence s = sentence_of(T);
      for (std::size_t code = 0; code < total; ++code) {
        std::vector<BioTag> tags(T);
        std::size_t x = code;
        for (std::size_t i = 0; i < T; ++i, x /= 3) tags[i] = static_cast<BioTag>(x % 3);
        const auto spans = decode_bio(tags);
        int last_end = 0;
        for (const Span& sp : spans) {
          REQUIRE(sp.start >= last_end);
          REQUIRE(sp.start < sp.end);
          REQUIRE(sp.end <= static_cast<int>(T));
          last_end = sp.end;
        }
        const auto repaired = encode_bio(s, spans).tags;
        REQUIRE(is_well_formed(repaired));
        REQUIRE(decode_bio(repaired) == spans);
        if (is_well_formed(tags)) REQUIRE(repaired == tags);
      }
    }
  }

  TEST_CASE("truncate drops spans crossing the cut") {
    LabeledSentence ls;
    ls.sentence = sentence_of(10);
    ls.spans = {{1, 3}, {4, 7}, {8, 9}};
    CHECK(truncate(ls, 5) == 2);
    CHECK(ls.sentence.tokens.size() == 5);
    CHECK(ls.spans == std::vector<Span>{{1, 3}});
  }

  TEST_CASE("make_folds partitions evenly and deterministically") {
    const FoldPlan ten = make_folds(10, 10, 3);
    for (int f = 0; f < 10; ++f) CHECK(ten.members(f).size() == 1);

    const FoldPlan big = make_folds(8788, 10, 7);
    std::set<std::size_t> seen;
    for (int f = 0; f < 10; ++f) {
      const auto m = big.members(f);
      CHECK((m.size() == 878 || m.size() == 879));
      seen.insert(m.begin(), m.end());
    }
    CHECK(seen.size() == 8788);
    CHECK(make_folds(8788, 10, 7).fold_of == big.fold_of);
    CHECK(make_folds(8788, 10, 8).fold_of != big.fold_of);
    CHECK(big.validation_fold(9) == 0);
    CHECK_THROWS_AS(make_folds(3, 4, 1), InputError);
    CHECK_THROWS_AS(make_folds(3, 1, 1), InputError);
  }

  TEST_CASE("read_reviews validates fields and reports the line") {
    const CategorySet cats({"communication", "social"});
    std::istringstream ok(R"({"review_id":"r1","app_name":"gmail","category":"communication","body":"hi"}
{"review_id":"r2","app_name":"x","category":"social","body":"yo","submitted_at":"2020-01-01T00:00:00Z"}
)");
    const auto reviews = read_reviews(ok, cats);
    REQUIRE(reviews.size() == 2);
    CHECK(reviews[1].category == 1);
    CHECK(reviews[1].submitted_at.value() == "2020-01-01T00:00:00Z");

    std::istringstream bad("{\"review_id\":\"r1\",\"app_name\":\"a\",\"category\":\"social\",\"body\":\"\"}\n{oops\n");
    try {
      read_reviews(bad, cats);
      FAIL("expected an error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::istringstream dup(R"({"review_id":"r","app_name":"a","category":"social","body":""}
{"review_id":"r","app_name":"a","category":"social","body":""})");
    CHECK_THROWS_AS(read_reviews(dup, cats), InputError);
    std::istringstream unknown(R"({"review_id":"r","app_name":"a","category":"games","body":""})");
    CHECK_THROWS_AS(read_reviews(unknown, cats), InputError);
  }

  TEST_CASE("labeled sentences round-trip") {
    const CategorySet cats({"communication", "social"});
    LabeledSentence ls;
    ls.sentence.review_id = "r9";
    ls.sentence.index = 2;
    ls.sentence.app_name = "gmail";
    ls.sentence.tokens = {"i", "can", "not", "send", "a", "video"};
    ls.sentence.attrs = {1, -3};
    ls.spans = {{3, 6}};
    std::stringstream buf;
    write_labeled(buf, ls, cats, true);
    const auto back = read_labeled(buf, cats);
    REQUIRE(back.size() == 1);
    CHECK(back[0].sentence.tokens == ls.sentence.tokens);
    CHECK(back[0].sentence.attrs == ls.sentence.attrs);
    CHECK(back[0].spans == ls.spans);
    CHECK(back[0].sentence.key() == "r9#2");
  }

  TEST_CASE("read_labeled names the line missing a label field") {
    const CategorySet cats({"c"});
    std::istringstream in(R"({"review_id":"a","index":0,"tokens":["x"],"category":"c","sentiment":2,"spans":[]}
{"review_id":"b","index":0,"tokens":["x"],"category":"c","sentiment":2})");
    try {
      read_labeled(in, cats);
      FAIL("expected an error");
    } catch (const InputError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("line 2") != std::string::npos);
      CHECK(msg.find("spans") != std::string::npos);
    }
    std::istringstream zero(R"({"review_id":"a","index":0,"tokens":["x"],"category":"c","sentiment":0,"spans":[]})");
    CHECK_THROWS_AS(read_labeled(zero, cats), InputError);
  }
}
