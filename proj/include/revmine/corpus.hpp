#pragma once

// Review ingestion and sentence preparation.

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "revmine/common.hpp"

namespace revmine {

inline constexpr std::size_t kDefaultMaxLen = 128;

inline constexpr std::string_view kNumberToken = "<number>";
inline constexpr std::string_view kAppNameToken = "<appname>";

/// Closed set of app categories declared in configuration. Categories are
/// stored by index everywhere downstream.
class CategorySet {
 public:
  CategorySet() = default;
  explicit CategorySet(std::vector<std::string> names);

  /// Throws InputError for an undeclared name.
  int index_of(std::string_view name) const;
  const std::string& name(int index) const;
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::vector<std::string> names_;
};

struct RawReview {
  std::string review_id;
  std::string app_name;
  int category = 0;
  std::string body;
  std::optional<std::string> submitted_at;
};

struct ReviewAttributes {
  int category = 0;
  int sentiment = -1;  // {-5..-1, 1..5}

  bool operator==(const ReviewAttributes&) const = default;
};

struct Sentence {
  std::string review_id;
  int index = 0;
  std::string app_name;  // empty when the source file carries none
  std::vector<std::string> tokens;
  ReviewAttributes attrs;

  /// Key used by the precomputed vector store: "<review_id>#<index>".
  std::string key() const;
};

enum class BioTag : std::uint8_t { B = 0, I = 1, O = 2 };
inline constexpr int kNumTags = 3;

char tag_char(BioTag t);

struct Span {
  int start = 0;  // inclusive
  int end = 0;    // exclusive

  auto operator<=>(const Span&) const = default;
};

struct TaggedSentence {
  Sentence sentence;
  std::vector<BioTag> tags;
};

/// A sentence with its gold spans, as read from labeled data.
struct LabeledSentence {
  Sentence sentence;
  std::vector<Span> spans;
};

// ---------------------------------------------------------------------------
// Cleaning.

class Lemmatizer {
 public:
  virtual ~Lemmatizer() = default;
  virtual std::string lemma(std::string_view token) const = 0;
};

class IdentityLemmatizer final : public Lemmatizer {
 public:
  std::string lemma(std::string_view token) const override { return std::string(token); }
};

/// Rule-based English suffix stripper: plural -s/-es, -ing, -ed, undoing a
/// doubled final consonant ("running" -> "run"). Rules are re-applied until
/// nothing changes, so the result is a fixed point.
class SuffixLemmatizer final : public Lemmatizer {
 public:
  std::string lemma(std::string_view token) const override;
};

std::unique_ptr<Lemmatizer> make_lemmatizer(std::string_view name);  // "identity" | "suffix"

/// Splits after runs of '.', '!' or '?' and at newlines. Whitespace-only
/// pieces are dropped; the remaining pieces are trimmed.
std::vector<std::string> split_sentences(std::string_view body);

/// Lowercased tokens. Numbers become <number>; listed app names (longest
/// match first, possibly multi-token) become <appname>; the rest are
/// lemmatized.
std::vector<std::string> clean_tokens(std::string_view raw_sentence,
                                      const std::vector<std::string>& app_names,
                                      const Lemmatizer& lemmatizer = IdentityLemmatizer{});

/// Lowercased word tokenization used by clean_tokens (no replacements).
std::vector<std::string> tokenize(std::string_view text);

bool has_ascii_letter(const std::vector<std::string>& tokens);

// ---------------------------------------------------------------------------
// BIO.

/// Throws InputError for overlapping or out-of-bounds spans.
TaggedSentence encode_bio(const Sentence& sentence, std::vector<Span> gold_spans);
std::vector<BioTag> spans_to_tags(std::size_t n_tokens, std::vector<Span> spans);

/// Total: an I without a preceding B or I opens a new span.
std::vector<Span> decode_bio(const std::vector<BioTag>& tags);

bool is_well_formed(const std::vector<BioTag>& tags);

/// Truncates to max_len tokens and drops spans crossing the cut. Returns
/// how many spans were dropped.
std::size_t truncate(LabeledSentence& s, std::size_t max_len);

// ---------------------------------------------------------------------------
// Folds.

struct FoldPlan {
  int n_outer = 0;
  std::vector<int> fold_of;  // item index -> outer fold

  /// Inner split: the training fold after `outer` (cyclically) validates.
  int validation_fold(int outer) const { return (outer + 1) % n_outer; }
  std::vector<std::size_t> members(int fold) const;
};

FoldPlan make_folds(std::size_t n_items, int n_outer, std::uint64_t seed);

// ---------------------------------------------------------------------------
// File formats (JSON Lines).

std::vector<RawReview> read_reviews(std::istream& in, const CategorySet& categories);
/// Sentence JSON Lines. With require_spans, a missing "spans" field is an
/// error naming the line; otherwise it defaults to no spans.
std::vector<LabeledSentence> read_labeled(std::istream& in, const CategorySet& categories,
                                          std::size_t max_len = kDefaultMaxLen,
                                          bool require_spans = true);
void write_labeled(std::ostream& out, const LabeledSentence& s, const CategorySet& categories,
                   bool with_spans);
std::vector<std::string> read_app_names(std::istream& in);

}  // namespace revmine
