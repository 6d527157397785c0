#include "revmine/phrase.hpp"

#include <istream>
#include <ostream>

#include "json.hpp"

namespace revmine {

using nlohmann::json;

std::string join_tokens(const std::vector<std::string>& tokens, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

void write_phrase(std::ostream& out, const PhraseRecord& p) {
  json obj;
  obj["review_id"] = p.review_id;
  obj["sentence_index"] = p.sentence_index;
  obj["app_name"] = p.app_name;
  obj["category"] = p.category;
  obj["sentiment"] = p.sentiment;
  obj["span"] = {p.span.start, p.span.end};
  obj["phrase"] = p.phrase;
  obj["sentence"] = p.sentence;
  out << obj.dump() << '\n';
}

std::vector<PhraseRecord> read_phrases(std::istream& in) {
  std::vector<PhraseRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json obj = json::parse(line);
      PhraseRecord p;
      p.review_id = obj.at("review_id").get<std::string>();
      p.sentence_index = obj.at("sentence_index").get<int>();
      p.app_name = obj.at("app_name").get<std::string>();
      p.category = obj.at("category").get<std::string>();
      p.sentiment = obj.value("sentiment", 0);
      const auto& sp = obj.at("span");
      p.span = {sp.at(0).get<int>(), sp.at(1).get<int>()};
      p.phrase = obj.at("phrase").get<std::string>();
      p.sentence = obj.value("sentence", std::string());
      if (p.phrase.empty()) throw InputError("empty phrase");
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw InputError("phrase line " + std::to_string(line_no) + ": " + e.what());
    } catch (const InputError& e) {
      throw InputError("phrase line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace revmine
