#include "revmine/model.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "revmine/byte_io.hpp"

namespace revmine {

using nlohmann::json;

std::string_view to_string(EncoderKind k) {
  return k == EncoderKind::kNative ? "native" : "precomputed";
}

EncoderKind encoder_kind_from_string(std::string_view s) {
  if (s == "native") return EncoderKind::kNative;
  if (s == "precomputed") return EncoderKind::kPrecomputed;
  throw InputError("unknown encoder '" + std::string(s) + "'");
}

namespace {

void xavier(Matrix& m, Rng& rng) {
  if (m.empty()) return;
  const double a = std::sqrt(6.0 / static_cast<double>(m.rows() + m.cols()));
  for (double& v : m.data()) v = uniform(rng, -a, a);
}

}  // namespace

CrfModel CrfModel::create(const ModelSpec& spec, std::vector<std::string> categories,
                          std::vector<std::string> vocab, bool structural_mask, double dropout,
                          std::uint64_t seed) {
  if (categories.empty()) throw InputError("model needs at least one category");
  if (spec.hidden == 0 || spec.token_dim == 0) throw InputError("hidden and token_dim must be positive");
  if (dropout < 0.0 || dropout >= 1.0) throw InputError("dropout must be in [0, 1)");
  CrfModel m;
  m.spec = spec;
  m.categories = std::move(categories);
  m.transitions = TransitionMatrix(structural_mask);

  Rng rng(seed);
  m.attributes.category = Matrix(m.categories.size(), spec.category_dim);
  m.attributes.sentiment = Matrix(kSentimentRows, spec.sentiment_dim);
  xavier(m.attributes.category, rng);
  xavier(m.attributes.sentiment, rng);

  const std::size_t d_in = spec.category_dim + spec.sentiment_dim + spec.token_dim;
  m.head.hidden_w = Matrix(spec.hidden, d_in);
  m.head.hidden_b = Matrix(1, spec.hidden);
  m.head.out_w = Matrix(kNumTags, spec.hidden);
  m.head.out_b = Matrix(1, kNumTags);
  m.head.activation = spec.activation;
  m.head.dropout = dropout;
  xavier(m.head.hidden_w, rng);
  xavier(m.head.out_w, rng);

  for (int i = 0; i < kNumStates; ++i) {
    for (int j = 0; j < kNumStates; ++j) m.transitions.set(i, j, uniform(rng, -0.1, 0.1));
  }

  if (spec.encoder == EncoderKind::kNative) {
    m.native = NativeEmbedding(std::move(vocab), spec.token_dim, spec.window);
    xavier(m.native.table, rng);
  }
  return m;
}

namespace {

template <typename Param, typename Model>
std::vector<Param> collect_parameters(Model& m) {
  std::vector<Param> out{
      {"attributes.category", &m.attributes.category},
      {"attributes.sentiment", &m.attributes.sentiment},
      {"head.hidden_w", &m.head.hidden_w},
      {"head.hidden_b", &m.head.hidden_b},
      {"head.out_w", &m.head.out_w},
      {"head.out_b", &m.head.out_b},
      {"transitions", &m.transitions.scores()},
  };
  if (m.spec.encoder == EncoderKind::kNative) out.push_back({"native.table", &m.native.table});
  return out;
}

}  // namespace

std::vector<NamedParam> CrfModel::parameters() { return collect_parameters<NamedParam>(*this); }

std::vector<ConstNamedParam> CrfModel::parameters() const {
  return collect_parameters<ConstNamedParam>(*this);
}

CrfModel CrfModel::zeros_like() const {
  CrfModel z = *this;
  for (auto& p : z.parameters()) p.value->fill(0.0);
  return z;
}

std::size_t CrfModel::parameter_count() const {
  std::size_t n = 0;
  for (auto& p : parameters()) n += p.value->size();
  return n;
}

std::uint64_t CrfModel::checksum() const {
  std::uint64_t h = fnv1a({});
  for (auto& p : parameters()) {
    h = fnv1a(std::as_bytes(std::span<const double>(p.value->data())), h);
  }
  return h;
}

std::size_t CrfModel::token_dim() const { return spec.token_dim; }

// ---------------------------------------------------------------------------

namespace {

json hyperparameters(const CrfModel& m) {
  json h;
  h["category_dim"] = m.spec.category_dim;
  h["sentiment_dim"] = m.spec.sentiment_dim;
  h["hidden"] = m.spec.hidden;
  h["token_dim"] = m.spec.token_dim;
  h["window"] = m.spec.window;
  h["activation"] = std::string(to_string(m.spec.activation));
  h["encoder"] = std::string(to_string(m.spec.encoder));
  h["dropout"] = m.head.dropout;
  h["structural_mask"] = m.transitions.structural_mask();
  h["categories"] = m.categories;
  if (m.spec.encoder == EncoderKind::kNative) h["vocab"] = m.native.vocab();
  return h;
}

}  // namespace

void CrfModel::write(std::ostream& out) const {
  out.write("RMCK", 4);
  byte_io::write_u32(out, kCheckpointVersion);
  byte_io::write_string(out, hyperparameters(*this).dump());
  auto params = parameters();
  byte_io::write_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    byte_io::write_string(out, p.name);
    byte_io::write_u32(out, static_cast<std::uint32_t>(p.value->rows()));
    byte_io::write_u32(out, static_cast<std::uint32_t>(p.value->cols()));
    for (double v : p.value->data()) byte_io::write_f64(out, v);
  }
}

void CrfModel::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write checkpoint '" + path + "'");
  write(out);
  if (!out) throw std::runtime_error("failed writing checkpoint '" + path + "'");
}

CrfModel CrfModel::read(std::istream& in) {
  char magic[4];
  byte_io::read_exact(in, magic, 4);
  if (std::string_view(magic, 4) != "RMCK") throw InputError("not a checkpoint (bad magic)");
  const std::uint32_t version = byte_io::read_u32(in);
  if (version != kCheckpointVersion) {
    throw InputError("checkpoint version " + std::to_string(version) + " does not match supported version " +
                     std::to_string(kCheckpointVersion));
  }
  json h;
  try {
    h = json::parse(byte_io::read_string(in));
  } catch (const json::exception& e) {
    throw InputError(std::string("corrupt checkpoint header: ") + e.what());
  }
  ModelSpec spec;
  CrfModel m;
  try {
    spec.category_dim = h.at("category_dim").get<std::size_t>();
    spec.sentiment_dim = h.at("sentiment_dim").get<std::size_t>();
    spec.hidden = h.at("hidden").get<std::size_t>();
    spec.token_dim = h.at("token_dim").get<std::size_t>();
    spec.window = h.at("window").get<int>();
    spec.activation = activation_from_string(h.at("activation").get<std::string>());
    spec.encoder = encoder_kind_from_string(h.at("encoder").get<std::string>());
    std::vector<std::string> vocab;
    if (spec.encoder == EncoderKind::kNative) vocab = h.at("vocab").get<std::vector<std::string>>();
    m = create(spec, h.at("categories").get<std::vector<std::string>>(), std::move(vocab),
               h.at("structural_mask").get<bool>(), h.at("dropout").get<double>(), 0);
  } catch (const json::exception& e) {
    throw InputError(std::string("corrupt checkpoint header: ") + e.what());
  }
  auto params = m.parameters();
  const std::uint32_t count = byte_io::read_u32(in);
  if (count != params.size()) throw InputError("checkpoint tensor count mismatch");
  for (auto& p : params) {
    const std::string name = byte_io::read_string(in);
    const std::uint32_t rows = byte_io::read_u32(in);
    const std::uint32_t cols = byte_io::read_u32(in);
    if (name != p.name || rows != p.value->rows() || cols != p.value->cols()) {
      throw InputError("checkpoint tensor '" + name + "' does not match expected '" + p.name + "'");
    }
    for (double& v : p.value->data()) v = byte_io::read_f64(in);
  }
  return m;
}

CrfModel CrfModel::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open checkpoint '" + path + "'");
  return read(in);
}

// ---------------------------------------------------------------------------

namespace {

Matrix token_vectors(const CrfModel& model, const Sentence& sentence, const PrecomputedVectors* store) {
  if (model.spec.encoder == EncoderKind::kNative) return encode_tokens(sentence, model.native);
  if (store == nullptr) throw InputError("model uses precomputed token vectors but no store was given");
  if (store->dim() != model.spec.token_dim) {
    throw InputError("vector store dim " + std::to_string(store->dim()) + " does not match model token_dim " +
                     std::to_string(model.spec.token_dim));
  }
  return encode_tokens(sentence, *store);
}

}  // namespace

Matrix model_emissions(const CrfModel& model, const Sentence& sentence, const PrecomputedVectors* store) {
  const Matrix tokens = token_vectors(model, sentence, store);
  return emissions(tokens, embed_attributes(sentence.attrs, model.attributes), model.head);
}

std::vector<BioTag> predict_tags(const CrfModel& model, const Sentence& sentence, const PrecomputedVectors* store) {
  return viterbi_decode(model_emissions(model, sentence, store), model.transitions);
}

std::vector<Span> predict_spans(const CrfModel& model, const Sentence& sentence, const PrecomputedVectors* store) {
  return decode_bio(predict_tags(model, sentence, store));
}

double nll_loss(std::span<const TaggedSentence> batch, const CrfModel& model, const PrecomputedVectors* store,
                CrfModel* grad, Rng* dropout_rng) {
  if (batch.empty()) throw InputError("nll_loss needs a non-empty batch");
  const double scale = 1.0 / static_cast<double>(batch.size());
  double total = 0.0;
  for (const TaggedSentence& ts : batch) {
    const Sentence& s = ts.sentence;
    const Matrix tokens = token_vectors(model, s, store);
    const AttributeVectors attrs = embed_attributes(s.attrs, model.attributes);
    const EmissionTrace trace = emissions_forward(tokens, attrs, model.head, dropout_rng);
    SentenceLoss sl = sentence_nll(trace.scores, ts.tags, model.transitions);
    total += sl.loss;
    if (grad == nullptr) continue;

    for (double& v : sl.d_emissions.data()) v *= scale;
    auto& gt = grad->transitions.scores().data();
    for (std::size_t i = 0; i < gt.size(); ++i) gt[i] += sl.d_transitions.data()[i] * scale;

    const bool native = model.spec.encoder == EncoderKind::kNative;
    Matrix d_tokens;
    if (native) d_tokens = Matrix(tokens.rows(), tokens.cols());
    emissions_backward(trace, sl.d_emissions, model.head, grad->head,
                       grad->attributes.category.row(static_cast<std::size_t>(s.attrs.category)),
                       grad->attributes.sentiment.row(AttributeEmbedder::sentiment_row(s.attrs.sentiment)),
                       native ? &d_tokens : nullptr);
    if (native) encode_tokens_backward(s, model.native, d_tokens, grad->native.table);
  }
  return total * scale;
}

std::vector<PhraseRecord> extract(const Sentence& sentence, const CrfModel& model, const PrecomputedVectors* store) {
  std::vector<PhraseRecord> out;
  const std::string category =
      static_cast<std::size_t>(sentence.attrs.category) < model.categories.size()
          ? model.categories[static_cast<std::size_t>(sentence.attrs.category)]
          : std::to_string(sentence.attrs.category);
  const std::string text = join_tokens(sentence.tokens, 0, sentence.tokens.size());
  for (const Span& sp : predict_spans(model, sentence, store)) {
    PhraseRecord p;
    p.phrase = join_tokens(sentence.tokens, static_cast<std::size_t>(sp.start), static_cast<std::size_t>(sp.end));
    p.app_name = sentence.app_name;
    p.category = category;
    p.review_id = sentence.review_id;
    p.sentence_index = sentence.index;
    p.sentiment = sentence.attrs.sentiment;
    p.span = sp;
    p.sentence = text;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace revmine
