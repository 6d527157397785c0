#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "revmine/corpus.hpp"

namespace revmine {

/// An extracted problematic-feature phrase and where it came from.
struct PhraseRecord {
  std::string phrase;  // span tokens joined by single spaces
  std::string app_name;
  std::string category;
  std::string review_id;
  int sentence_index = 0;
  int sentiment = 0;
  Span span;
  std::string sentence;  // full sentence tokens, space-joined

  bool operator==(const PhraseRecord&) const = default;
};

/// One JSON object per line:
/// {"review_id","sentence_index","app_name","category","sentiment","span":[s,e],"phrase","sentence"}
void write_phrase(std::ostream& out, const PhraseRecord& p);
std::vector<PhraseRecord> read_phrases(std::istream& in);

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end);

}  // namespace revmine
