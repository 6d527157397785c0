#include "revmine/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "revmine/common.hpp"

namespace revmine {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_int(const std::string& s, std::size_t line_no) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("lexicon line " + std::to_string(line_no) + ": bad integer '" + s + "'");
  }
}

}  // namespace

void SentimentLexicon::add_word(std::string_view token, int strength) {
  const int mag = strength < 0 ? -strength : strength;
  if (mag < 2 || mag > 5) {
    throw InputError("strength " + std::to_string(strength) + " for '" + std::string(token) +
                     "' outside [-5,-2] U [2,5]");
  }
  words_[lower(token)] = strength;
}

void SentimentLexicon::add_booster(std::string_view token, int delta) {
  if (delta == 0 || delta < -4 || delta > 4) {
    throw InputError("booster delta " + std::to_string(delta) + " outside [-4,4]\\{0}");
  }
  boosters_[lower(token)] = delta;
}

void SentimentLexicon::add_negation(std::string_view token) { negations_.insert(lower(token)); }

int SentimentLexicon::strength(std::string_view token) const {
  auto it = words_.find(lower(token));
  return it == words_.end() ? 0 : it->second;
}

int SentimentLexicon::booster(std::string_view token) const {
  auto it = boosters_.find(lower(token));
  return it == boosters_.end() ? 0 : it->second;
}

bool SentimentLexicon::is_negation(std::string_view token) const {
  return negations_.contains(lower(token));
}

SentimentLexicon SentimentLexicon::parse(std::istream& in) {
  SentimentLexicon lex;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_tabs(line);
    if (fields[0] == "#negation") {
      if (fields.size() != 2) throw InputError("lexicon line " + std::to_string(line_no) + ": #negation<TAB>token expected");
      lex.add_negation(fields[1]);
    } else if (fields[0] == "#booster") {
      if (fields.size() != 3) throw InputError("lexicon line " + std::to_string(line_no) + ": #booster<TAB>token<TAB>delta expected");
      lex.add_booster(fields[1], parse_int(fields[2], line_no));
    } else if (fields[0][0] == '#') {
      continue;
    } else {
      if (fields.size() != 2) throw InputError("lexicon line " + std::to_string(line_no) + ": token<TAB>strength expected");
      lex.add_word(fields[0], parse_int(fields[1], line_no));
    }
  }
  return lex;
}

SentimentLexicon SentimentLexicon::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open lexicon '" + path + "'");
  return parse(in);
}

const SentimentLexicon& SentimentLexicon::builtin() {
  static const SentimentLexicon lex = [] {
    std::istringstream in{std::string(builtin_lexicon_text())};
    return parse(in);
  }();
  return lex;
}

PolarityScores score_sentence(const std::vector<std::string>& tokens, const SentimentLexicon& lexicon) {
  PolarityScores out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    int s = lexicon.strength(tokens[i]);
    if (s == 0) continue;
    if (i > 0) {
      const std::string& prev = tokens[i - 1];
      if (lexicon.is_negation(prev)) {
        s = -s;
      } else if (const int d = lexicon.booster(prev); d != 0) {
        const int mag = std::clamp((s > 0 ? s : -s) + d, 1, 5);
        s = s > 0 ? mag : -mag;
      }
    }
    if (s > 0) out.positive = std::max(out.positive, s);
    if (s < 0) out.negative = std::min(out.negative, s);
  }
  return out;
}

int assign_sentiment(PolarityScores scores) {
  return -scores.negative * 1.5 > scores.positive ? scores.negative : scores.positive;
}

}  // namespace revmine
