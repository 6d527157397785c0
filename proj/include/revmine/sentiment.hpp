#pragma once

// Dual-polarity lexicon sentiment scoring and the sentence-level
// combination rule that yields the sentiment attribute.

#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace revmine {

struct PolarityScores {
  int positive = 1;   // [1, 5]
  int negative = -1;  // [-5, -1]

  bool operator==(const PolarityScores&) const = default;
};

/// Word strengths plus booster and negation tokens.
///
/// File format (UTF-8, one entry per line, '#'-prefixed lines other than
/// directives are comments):
///
///     token<TAB>strength        strength in [-5,-2] or [2,5]
///     #negation<TAB>token
///     #booster<TAB>token<TAB>delta
///
/// Tokens are lowercased on load.
class SentimentLexicon {
 public:
  void add_word(std::string_view token, int strength);
  void add_booster(std::string_view token, int delta);
  void add_negation(std::string_view token);

  /// 0 when absent.
  int strength(std::string_view token) const;
  int booster(std::string_view token) const;
  bool is_negation(std::string_view token) const;

  std::size_t size() const { return words_.size(); }

  static SentimentLexicon parse(std::istream& in);
  static SentimentLexicon load(const std::string& path);
  /// Bundled general-purpose lexicon (about 300 entries).
  static const SentimentLexicon& builtin();

 private:
  std::unordered_map<std::string, int> words_;
  std::unordered_map<std::string, int> boosters_;
  std::unordered_set<std::string> negations_;
};

/// Text of the bundled lexicon, in the file format above.
std::string_view builtin_lexicon_text();

PolarityScores score_sentence(const std::vector<std::string>& tokens, const SentimentLexicon& lexicon);

/// Negative wins iff |negative| * 1.5 > positive (strict). Neutral scores
/// (1, -1) therefore map to -1.
int assign_sentiment(PolarityScores scores);

}  // namespace revmine
