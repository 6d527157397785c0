#include "revmine/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include "revmine/byte_io.hpp"

namespace revmine {

std::string_view to_string(Activation a) {
  switch (a) {
    case Activation::kTanh: return "tanh";
    case Activation::kRelu: return "relu";
  }
  return "?";
}

Activation activation_from_string(std::string_view s) {
  if (s == "tanh") return Activation::kTanh;
  if (s == "relu") return Activation::kRelu;
  throw InputError("unknown activation '" + std::string(s) + "'");
}

std::size_t AttributeEmbedder::sentiment_row(int sentiment) {
  if (sentiment >= -5 && sentiment <= -1) return static_cast<std::size_t>(sentiment + 5);
  if (sentiment >= 1 && sentiment <= 5) return static_cast<std::size_t>(sentiment + 4);
  throw InputError("sentiment " + std::to_string(sentiment) + " outside {-5..-1,1..5}");
}

AttributeVectors embed_attributes(const ReviewAttributes& attrs, const AttributeEmbedder& embedder) {
  if (attrs.category < 0 || static_cast<std::size_t>(attrs.category) >= embedder.category.rows()) {
    throw InputError("category index " + std::to_string(attrs.category) + " out of range");
  }
  return {embedder.category.row(static_cast<std::size_t>(attrs.category)),
          embedder.sentiment.row(AttributeEmbedder::sentiment_row(attrs.sentiment))};
}

// ---------------------------------------------------------------------------

NativeEmbedding::NativeEmbedding(std::vector<std::string> vocab, std::size_t dim, int window)
    : window(window) {
  for (std::string_view special : {kUnknownToken, kNumberToken, kAppNameToken}) {
    if (std::find(vocab.begin(), vocab.end(), special) == vocab.end()) {
      vocab.emplace_back(special);
    }
  }
  vocab_ = std::move(vocab);
  for (std::size_t i = 0; i < vocab_.size(); ++i) {
    if (!index_.emplace(vocab_[i], i).second) throw InputError("duplicate vocabulary entry '" + vocab_[i] + "'");
  }
  unk_ = index_.at(std::string(kUnknownToken));
  table = Matrix(vocab_.size(), dim);
}

std::vector<std::string> NativeEmbedding::build_vocab(std::span<const Sentence> sentences) {
  std::set<std::string> words;
  for (const auto& s : sentences) words.insert(s.tokens.begin(), s.tokens.end());
  std::vector<std::string> vocab{std::string(kUnknownToken), std::string(kNumberToken),
                                 std::string(kAppNameToken)};
  for (const auto& w : words) {
    if (w != kUnknownToken && w != kNumberToken && w != kAppNameToken) vocab.push_back(w);
  }
  return vocab;
}

std::size_t NativeEmbedding::id(std::string_view token) const {
  auto it = index_.find(std::string(token));
  return it == index_.end() ? unk_ : it->second;
}

namespace {

// Four independent lanes summed in a fixed order: vectorizable without
// reassociation, and bit-stable across runs.
double dot(std::span<const double> a, std::span<const double> b) {
  double lane[4] = {0.0, 0.0, 0.0, 0.0};
  const std::size_t n = a.size();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) lane[k] += a[i + k] * b[i + k];
  }
  for (; i < n; ++i) lane[0] += a[i] * b[i];
  return (lane[0] + lane[1]) + (lane[2] + lane[3]);
}

struct WindowRange {
  std::size_t lo, hi;  // [lo, hi)
};

WindowRange window_of(std::size_t t, std::size_t n, int window) {
  const std::size_t w = static_cast<std::size_t>(std::max(window, 0));
  return {t >= w ? t - w : 0, std::min(n, t + w + 1)};
}

}  // namespace

Matrix encode_tokens(const Sentence& sentence, const NativeEmbedding& native) {
  const std::size_t n = sentence.tokens.size();
  const std::size_t d = native.dim();
  std::vector<std::size_t> ids(n);
  for (std::size_t t = 0; t < n; ++t) ids[t] = native.id(sentence.tokens[t]);
  Matrix out(n, d);
  for (std::size_t t = 0; t < n; ++t) {
    const auto [lo, hi] = window_of(t, n, native.window);
    const double scale = 1.0 / static_cast<double>(hi - lo);
    auto dst = out.row(t);
    for (std::size_t j = lo; j < hi; ++j) {
      auto src = native.table.row(ids[j]);
      for (std::size_t k = 0; k < d; ++k) dst[k] += src[k] * scale;
    }
  }
  return out;
}

Matrix encode_tokens(const Sentence& sentence, const PrecomputedVectors& store) {
  const Matrix& m = store.at(sentence.key());
  if (m.rows() != sentence.tokens.size()) {
    throw InputError("precomputed vectors for '" + sentence.key() + "' have " + std::to_string(m.rows()) +
                     " rows, sentence has " + std::to_string(sentence.tokens.size()) + " tokens");
  }
  return m;
}

Matrix encode_tokens(const Sentence& sentence, const EncoderPlugin& plugin) {
  return std::visit([&](const auto* p) { return encode_tokens(sentence, *p); }, plugin);
}

void encode_tokens_backward(const Sentence& sentence, const NativeEmbedding& native, const Matrix& d_tokens,
                            Matrix& d_table) {
  const std::size_t n = sentence.tokens.size();
  const std::size_t d = native.dim();
  std::vector<std::size_t> ids(n);
  for (std::size_t t = 0; t < n; ++t) ids[t] = native.id(sentence.tokens[t]);
  for (std::size_t t = 0; t < n; ++t) {
    const auto [lo, hi] = window_of(t, n, native.window);
    const double scale = 1.0 / static_cast<double>(hi - lo);
    auto src = d_tokens.row(t);
    for (std::size_t j = lo; j < hi; ++j) {
      auto dst = d_table.row(ids[j]);
      for (std::size_t k = 0; k < d; ++k) dst[k] += src[k] * scale;
    }
  }
}

// ---------------------------------------------------------------------------

void PrecomputedVectors::insert(std::string key, Matrix rows) {
  if (rows.cols() != dim_) {
    throw InputError("vector width " + std::to_string(rows.cols()) + " does not match store dim " +
                     std::to_string(dim_));
  }
  for (double v : rows.data()) {
    if (!std::isfinite(v)) throw InputError("non-finite entry in vectors for '" + key + "'");
  }
  rows_.insert_or_assign(std::move(key), std::move(rows));
}

const Matrix& PrecomputedVectors::at(std::string_view key) const {
  auto it = rows_.find(key);
  if (it == rows_.end()) throw InputError("no precomputed vectors for '" + std::string(key) + "'");
  return it->second;
}

void PrecomputedVectors::write(std::ostream& out) const {
  out.write("RMVS", 4);
  byte_io::write_u32(out, kVersion);
  byte_io::write_u32(out, static_cast<std::uint32_t>(dim_));
  for (const auto& [key, m] : rows_) {
    byte_io::write_string(out, key);
    byte_io::write_u32(out, static_cast<std::uint32_t>(m.rows()));
    for (double v : m.data()) byte_io::write_f32(out, static_cast<float>(v));
  }
}

void PrecomputedVectors::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  write(out);
}

PrecomputedVectors PrecomputedVectors::read(std::istream& in) {
  char magic[4];
  byte_io::read_exact(in, magic, 4);
  if (std::string_view(magic, 4) != "RMVS") throw InputError("not a vector store (bad magic)");
  const std::uint32_t version = byte_io::read_u32(in);
  if (version != kVersion) throw InputError("unsupported vector store version " + std::to_string(version));
  PrecomputedVectors store(byte_io::read_u32(in));
  while (in.peek() != std::char_traits<char>::eof()) {
    std::string key = byte_io::read_string(in);
    const std::uint32_t rows = byte_io::read_u32(in);
    Matrix m(rows, store.dim_);
    for (double& v : m.data()) v = byte_io::read_f32(in);
    store.insert(std::move(key), std::move(m));
  }
  return store;
}

PrecomputedVectors PrecomputedVectors::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open vector store '" + path + "'");
  return read(in);
}

// ---------------------------------------------------------------------------

EmissionTrace emissions_forward(const Matrix& tokens, AttributeVectors attrs, const EmissionHead& head,
                                Rng* dropout_rng) {
  const std::size_t n = tokens.rows();
  const std::size_t d_c = attrs.category.size();
  const std::size_t d_s = attrs.sentiment.size();
  const std::size_t d_t = tokens.cols();
  const std::size_t d_in = d_c + d_s + d_t;
  if (d_in != head.input_width()) {
    throw InputError("emission head expects input width " + std::to_string(head.input_width()) + ", got " +
                     std::to_string(d_in));
  }
  const std::size_t d_h = head.hidden_width();
  const std::size_t k_out = head.out_w.rows();

  EmissionTrace tr;
  tr.input = Matrix(n, d_in);
  const bool drop = dropout_rng != nullptr && head.dropout > 0.0;
  if (drop) tr.keep_scale = Matrix(n, d_t);
  const double keep = 1.0 - head.dropout;
  for (std::size_t t = 0; t < n; ++t) {
    auto x = tr.input.row(t);
    std::copy(attrs.category.begin(), attrs.category.end(), x.begin());
    std::copy(attrs.sentiment.begin(), attrs.sentiment.end(), x.begin() + static_cast<std::ptrdiff_t>(d_c));
    auto v = tokens.row(t);
    for (std::size_t k = 0; k < d_t; ++k) {
      double m = 1.0;
      if (drop) {
        m = uniform01(*dropout_rng) < head.dropout ? 0.0 : 1.0 / keep;
        tr.keep_scale(t, k) = m;
      }
      x[d_c + d_s + k] = v[k] * m;
    }
  }

  tr.hidden = Matrix(n, d_h);
  tr.scores = Matrix(n, k_out);
  for (std::size_t t = 0; t < n; ++t) {
    auto x = tr.input.row(t);
    auto h = tr.hidden.row(t);
    for (std::size_t j = 0; j < d_h; ++j) {
      const double z = head.hidden_b(0, j) + dot(head.hidden_w.row(j), x);
      h[j] = head.activation == Activation::kTanh ? std::tanh(z) : std::max(z, 0.0);
    }
    for (std::size_t k = 0; k < k_out; ++k) {
      tr.scores(t, k) = head.out_b(0, k) + dot(head.out_w.row(k), h);
    }
  }
  return tr;
}

void emissions_backward(const EmissionTrace& trace, const Matrix& d_scores, const EmissionHead& head,
                        EmissionHead& grad, std::span<double> d_category, std::span<double> d_sentiment,
                        Matrix* d_tokens) {
  const std::size_t n = trace.scores.rows();
  const std::size_t d_h = head.hidden_width();
  const std::size_t d_in = head.input_width();
  const std::size_t k_out = head.out_w.rows();
  const std::size_t d_c = d_category.size();
  const std::size_t d_s = d_sentiment.size();
  const std::size_t d_t = d_in - d_c - d_s;

  std::vector<double> d_hidden(d_h);
  std::vector<double> d_input(d_in);
  for (std::size_t t = 0; t < n; ++t) {
    auto g = d_scores.row(t);
    auto h = trace.hidden.row(t);
    std::fill(d_hidden.begin(), d_hidden.end(), 0.0);
    for (std::size_t k = 0; k < k_out; ++k) {
      if (g[k] == 0.0) continue;
      grad.out_b(0, k) += g[k];
      auto w = head.out_w.row(k);
      auto gw = grad.out_w.row(k);
      for (std::size_t j = 0; j < d_h; ++j) {
        gw[j] += g[k] * h[j];
        d_hidden[j] += g[k] * w[j];
      }
    }
    // Through the activation.
    for (std::size_t j = 0; j < d_h; ++j) {
      d_hidden[j] *= head.activation == Activation::kTanh ? 1.0 - h[j] * h[j] : (h[j] > 0.0 ? 1.0 : 0.0);
    }
    auto x = trace.input.row(t);
    std::fill(d_input.begin(), d_input.end(), 0.0);
    for (std::size_t j = 0; j < d_h; ++j) {
      const double dz = d_hidden[j];
      if (dz == 0.0) continue;
      grad.hidden_b(0, j) += dz;
      auto w = head.hidden_w.row(j);
      auto gw = grad.hidden_w.row(j);
      for (std::size_t i = 0; i < d_in; ++i) {
        gw[i] += dz * x[i];
        d_input[i] += dz * w[i];
      }
    }
    for (std::size_t i = 0; i < d_c; ++i) d_category[i] += d_input[i];
    for (std::size_t i = 0; i < d_s; ++i) d_sentiment[i] += d_input[d_c + i];
    if (d_tokens != nullptr) {
      auto dv = d_tokens->row(t);
      for (std::size_t k = 0; k < d_t; ++k) {
        const double m = trace.keep_scale.empty() ? 1.0 : trace.keep_scale(t, k);
        dv[k] += d_input[d_c + d_s + k] * m;
      }
    }
  }
}

}  // namespace revmine
