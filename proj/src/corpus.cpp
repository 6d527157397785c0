#include "revmine/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <iostream>
#include <numeric>
#include <unordered_map>

#include "json.hpp"

namespace revmine {

using nlohmann::json;

CategorySet::CategorySet(std::vector<std::string> names) : names_(std::move(names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (names_[i] == names_[j]) throw InputError("duplicate category '" + names_[i] + "'");
    }
  }
}

int CategorySet::index_of(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw InputError("unknown category '" + std::string(name) + "'");
  return static_cast<int>(it - names_.begin());
}

const std::string& CategorySet::name(int index) const {
  if (index < 0 || static_cast<std::size_t>(index) >= names_.size()) {
    throw InputError("category index " + std::to_string(index) + " out of range");
  }
  return names_[static_cast<std::size_t>(index)];
}

std::string Sentence::key() const { return review_id + "#" + std::to_string(index); }

char tag_char(BioTag t) {
  switch (t) {
    case BioTag::B: return 'B';
    case BioTag::I: return 'I';
    case BioTag::O: return 'O';
  }
  return '?';
}

// ---------------------------------------------------------------------------

namespace {

bool is_word_byte(unsigned char c) {
  return std::isalnum(c) || c == '\'' || c == '_' || c >= 0x80;
}

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool is_special(std::string_view s) { return s == kNumberToken || s == kAppNameToken; }

std::string_view trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool has_vowel(std::string_view s) { return std::any_of(s.begin(), s.end(), is_vowel); }

std::string undouble(std::string stem) {
  const std::size_t n = stem.size();
  if (n >= 3 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
      stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z') {
    stem.pop_back();
  }
  return stem;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::string strip_once(std::string_view w) {
  if (w.size() <= 3 || !std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; })) {
    return std::string(w);
  }
  if (ends_with(w, "ies") && w.size() > 4) return std::string(w.substr(0, w.size() - 3)) + "y";
  if (ends_with(w, "sses") || ends_with(w, "xes") || ends_with(w, "zes") || ends_with(w, "ches") ||
      ends_with(w, "shes")) {
    return std::string(w.substr(0, w.size() - 2));
  }
  if (ends_with(w, "s") && !ends_with(w, "ss") && !ends_with(w, "us") && !ends_with(w, "is")) {
    return std::string(w.substr(0, w.size() - 1));
  }
  if (ends_with(w, "ing")) {
    std::string_view stem = w.substr(0, w.size() - 3);
    if (stem.size() >= 3 && has_vowel(stem)) return undouble(std::string(stem));
  }
  if (ends_with(w, "ed")) {
    std::string_view stem = w.substr(0, w.size() - 2);
    if (stem.size() >= 3 && has_vowel(stem)) return undouble(std::string(stem));
  }
  return std::string(w);
}

}  // namespace

std::string SuffixLemmatizer::lemma(std::string_view token) const {
  std::string cur(token);
  for (;;) {
    std::string next = strip_once(cur);
    if (next == cur) return cur;
    cur = std::move(next);
  }
}

std::unique_ptr<Lemmatizer> make_lemmatizer(std::string_view name) {
  if (name == "identity") return std::make_unique<IdentityLemmatizer>();
  if (name == "suffix") return std::make_unique<SuffixLemmatizer>();
  throw InputError("unknown lemmatizer '" + std::string(name) + "'");
}

std::vector<std::string> split_sentences(std::string_view body) {
  std::vector<std::string> out;
  auto flush = [&](std::size_t b, std::size_t e) {
    std::string_view piece = trim(body.substr(b, e - b));
    if (!piece.empty()) out.emplace_back(piece);
  };
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < body.size()) {
    const char c = body[i];
    if (c == '\n' || c == '\r') {
      flush(start, i);
      start = ++i;
    } else if (c == '.' || c == '!' || c == '?') {
      while (i < body.size() && (body[i] == '.' || body[i] == '!' || body[i] == '?')) ++i;
      flush(start, i);
      start = i;
    } else {
      ++i;
    }
  }
  flush(start, body.size());
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    // Placeholder tokens survive re-tokenization.
    if (text[i] == '<') {
      std::string probe;
      for (std::size_t k = i; k < text.size() && probe.size() < kAppNameToken.size(); ++k) {
        probe.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[k]))));
        if (is_special(probe)) break;
      }
      if (is_special(probe)) {
        tokens.push_back(probe);
        i += probe.size();
        continue;
      }
    }
    if (!is_word_byte(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    std::string tok;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) {
      tok.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
      ++i;
    }
    const auto b = tok.find_first_not_of('\'');
    if (b == std::string::npos) continue;
    const auto e = tok.find_last_not_of('\'');
    tokens.push_back(tok.substr(b, e - b + 1));
  }
  return tokens;
}

std::vector<std::string> clean_tokens(std::string_view raw_sentence,
                                      const std::vector<std::string>& app_names,
                                      const Lemmatizer& lemmatizer) {
  auto normalize = [&](const std::vector<std::string>& raw) {
    std::vector<std::string> out;
    out.reserve(raw.size());
    for (const auto& tok : raw) {
      if (is_special(tok)) {
        out.push_back(tok);
      } else if (is_digits(tok)) {
        out.emplace_back(kNumberToken);
      } else {
        std::string lem = lemmatizer.lemma(tok);
        out.push_back(lem.empty() ? tok : std::move(lem));
      }
    }
    return out;
  };

  // App names are matched in normalized form so that a second pass over
  // already-cleaned text makes the same replacements.
  std::vector<std::vector<std::string>> names;
  for (const auto& n : app_names) {
    auto t = normalize(tokenize(n));
    if (!t.empty()) names.push_back(std::move(t));
  }
  std::stable_sort(names.begin(), names.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  const std::vector<std::string> norm = normalize(tokenize(raw_sentence));
  std::vector<std::string> out;
  out.reserve(norm.size());
  std::size_t i = 0;
  while (i < norm.size()) {
    std::size_t matched = 0;
    for (const auto& name : names) {
      if (i + name.size() <= norm.size() &&
          std::equal(name.begin(), name.end(), norm.begin() + static_cast<std::ptrdiff_t>(i))) {
        matched = name.size();
        break;
      }
    }
    if (matched > 0) {
      out.emplace_back(kAppNameToken);
      i += matched;
    } else {
      out.push_back(norm[i++]);
    }
  }
  return out;
}

bool has_ascii_letter(const std::vector<std::string>& tokens) {
  for (const auto& t : tokens) {
    if (is_special(t)) continue;
    for (unsigned char c : t) {
      if (c < 0x80 && std::isalpha(c)) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------

namespace {

void check_spans(std::size_t n_tokens, std::vector<Span>& spans) {
  std::sort(spans.begin(), spans.end());
  int prev_end = 0;
  for (const Span& s : spans) {
    if (s.start < 0 || s.start >= s.end || static_cast<std::size_t>(s.end) > n_tokens) {
      throw InputError("span [" + std::to_string(s.start) + "," + std::to_string(s.end) +
                       ") out of bounds for " + std::to_string(n_tokens) + " tokens");
    }
    if (s.start < prev_end) {
      throw InputError("overlapping spans at token " + std::to_string(s.start));
    }
    prev_end = s.end;
  }
}

}  // namespace

std::vector<BioTag> spans_to_tags(std::size_t n_tokens, std::vector<Span> spans) {
  check_spans(n_tokens, spans);
  std::vector<BioTag> tags(n_tokens, BioTag::O);
  for (const Span& s : spans) {
    tags[static_cast<std::size_t>(s.start)] = BioTag::B;
    for (int t = s.start + 1; t < s.end; ++t) tags[static_cast<std::size_t>(t)] = BioTag::I;
  }
  return tags;
}

TaggedSentence encode_bio(const Sentence& sentence, std::vector<Span> gold_spans) {
  return {sentence, spans_to_tags(sentence.tokens.size(), std::move(gold_spans))};
}

std::vector<Span> decode_bio(const std::vector<BioTag>& tags) {
  std::vector<Span> spans;
  int open = -1;
  const int n = static_cast<int>(tags.size());
  for (int t = 0; t < n; ++t) {
    switch (tags[static_cast<std::size_t>(t)]) {
      case BioTag::B:
        if (open >= 0) spans.push_back({open, t});
        open = t;
        break;
      case BioTag::I:
        if (open < 0) open = t;  // repair: promote to B
        break;
      case BioTag::O:
        if (open >= 0) spans.push_back({open, t});
        open = -1;
        break;
    }
  }
  if (open >= 0) spans.push_back({open, n});
  return spans;
}

bool is_well_formed(const std::vector<BioTag>& tags) {
  BioTag prev = BioTag::O;
  for (BioTag t : tags) {
    if (t == BioTag::I && prev == BioTag::O) return false;
    prev = t;
  }
  return true;
}

std::size_t truncate(LabeledSentence& s, std::size_t max_len) {
  if (s.sentence.tokens.size() <= max_len) return 0;
  s.sentence.tokens.resize(max_len);
  const auto before = s.spans.size();
  std::erase_if(s.spans, [&](const Span& sp) { return static_cast<std::size_t>(sp.end) > max_len; });
  return before - s.spans.size();
}

// ---------------------------------------------------------------------------

std::vector<std::size_t> FoldPlan::members(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < fold_of.size(); ++i) {
    if (fold_of[i] == fold) out.push_back(i);
  }
  return out;
}

FoldPlan make_folds(std::size_t n_items, int n_outer, std::uint64_t seed) {
  if (n_outer < 2) throw InputError("n_outer must be at least 2");
  if (n_items < static_cast<std::size_t>(n_outer)) {
    throw InputError("dataset of " + std::to_string(n_items) + " items is smaller than " +
                     std::to_string(n_outer) + " folds");
  }
  std::vector<std::size_t> order(n_items);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  shuffle(order, rng);
  FoldPlan plan;
  plan.n_outer = n_outer;
  plan.fold_of.assign(n_items, 0);
  for (std::size_t pos = 0; pos < n_items; ++pos) {
    plan.fold_of[order[pos]] = static_cast<int>(pos % static_cast<std::size_t>(n_outer));
  }
  return plan;
}

// ---------------------------------------------------------------------------

namespace {

std::string line_ctx(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

const json& require(const json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(line_ctx(line_no) + "missing field \"" + key + "\"");
  return *it;
}

int category_from_json(const json& v, const CategorySet& categories) {
  if (v.is_string()) return categories.index_of(v.get<std::string>());
  if (v.is_number_integer()) {
    const int idx = v.get<int>();
    (void)categories.name(idx);
    return idx;
  }
  throw InputError("category must be a string or an integer index");
}

template <typename Fn>
void for_each_json_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw InputError(line_ctx(line_no) + "malformed JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) throw InputError(line_ctx(line_no) + "expected a JSON object");
    try {
      fn(obj, line_no);
    } catch (const json::exception& e) {
      throw InputError(line_ctx(line_no) + e.what());
    } catch (const InputError& e) {
      const std::string msg = e.what();
      if (msg.rfind("line ", 0) == 0) throw;
      throw InputError(line_ctx(line_no) + msg);
    }
  }
}

}  // namespace

std::vector<RawReview> read_reviews(std::istream& in, const CategorySet& categories) {
  std::vector<RawReview> out;
  std::unordered_map<std::string, std::size_t> seen;
  for_each_json_line(in, [&](const json& obj, std::size_t line_no) {
    RawReview r;
    r.review_id = require(obj, "review_id", line_no).get<std::string>();
    if (r.review_id.empty()) throw InputError("empty review_id");
    r.app_name = require(obj, "app_name", line_no).get<std::string>();
    r.category = category_from_json(require(obj, "category", line_no), categories);
    r.body = require(obj, "body", line_no).get<std::string>();
    if (auto it = obj.find("submitted_at"); it != obj.end() && !it->is_null()) {
      r.submitted_at = it->get<std::string>();
    }
    if (!seen.emplace(r.review_id, line_no).second) {
      throw InputError("duplicate review_id '" + r.review_id + "'");
    }
    out.push_back(std::move(r));
  });
  return out;
}

std::vector<LabeledSentence> read_labeled(std::istream& in, const CategorySet& categories,
                                          std::size_t max_len, bool require_spans) {
  std::vector<LabeledSentence> out;
  for_each_json_line(in, [&](const json& obj, std::size_t line_no) {
    LabeledSentence ls;
    Sentence& s = ls.sentence;
    s.review_id = require(obj, "review_id", line_no).get<std::string>();
    s.index = require(obj, "index", line_no).get<int>();
    if (auto it = obj.find("app_name"); it != obj.end()) s.app_name = it->get<std::string>();
    s.tokens = require(obj, "tokens", line_no).get<std::vector<std::string>>();
    if (s.tokens.empty()) throw InputError("sentence has no tokens");
    for (const auto& t : s.tokens) {
      if (t.empty()) throw InputError("empty token");
    }
    s.attrs.category = category_from_json(require(obj, "category", line_no), categories);
    s.attrs.sentiment = require(obj, "sentiment", line_no).get<int>();
    if (s.attrs.sentiment == 0 || s.attrs.sentiment < -5 || s.attrs.sentiment > 5) {
      throw InputError("sentiment " + std::to_string(s.attrs.sentiment) + " outside {-5..-1,1..5}");
    }
    if (auto it = obj.find("spans"); it != obj.end()) {
      for (const auto& sp : *it) {
        if (!sp.is_array() || sp.size() != 2) throw InputError("span must be [start,end]");
        ls.spans.push_back({sp[0].get<int>(), sp[1].get<int>()});
      }
    } else if (require_spans) {
      throw InputError(line_ctx(line_no) + "missing field \"spans\"");
    }
    (void)spans_to_tags(s.tokens.size(), ls.spans);  // validates
    std::sort(ls.spans.begin(), ls.spans.end());
    if (const std::size_t dropped = truncate(ls, max_len); dropped > 0) {
      std::clog << "warning: " << line_ctx(line_no) << "truncated to " << max_len << " tokens, dropped "
                << dropped << " span(s)\n";
    }
    out.push_back(std::move(ls));
  });
  return out;
}

void write_labeled(std::ostream& out, const LabeledSentence& s, const CategorySet& categories,
                   bool with_spans) {
  json obj;
  obj["review_id"] = s.sentence.review_id;
  obj["index"] = s.sentence.index;
  obj["app_name"] = s.sentence.app_name;
  obj["category"] = categories.name(s.sentence.attrs.category);
  obj["sentiment"] = s.sentence.attrs.sentiment;
  obj["tokens"] = s.sentence.tokens;
  if (with_spans) {
    json spans = json::array();
    for (const Span& sp : s.spans) spans.push_back({sp.start, sp.end});
    obj["spans"] = std::move(spans);
  }
  out << obj.dump() << '\n';
}

std::vector<std::string> read_app_names(std::istream& in) {
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view t = trim(line);
    if (!t.empty()) names.emplace_back(t);
  }
  return names;
}

}  // namespace revmine
