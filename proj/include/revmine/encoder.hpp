#pragma once

// Token encoders and the MLP emission head.
//
// The emission for token t is
//
//     out_w * f(hidden_w * [h_c; h_s; v_t] + hidden_b) + out_b
//
// where h_c / h_s are the category / sentiment embeddings (broadcast to every
// position) and v_t is the token vector from the active encoder. Dropout, when
// enabled, touches v_t only.

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "revmine/common.hpp"
#include "revmine/corpus.hpp"

namespace revmine {

inline constexpr std::size_t kSentimentRows = 10;
inline constexpr std::string_view kUnknownToken = "<unk>";

enum class Activation { kTanh, kRelu };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view s);

struct AttributeEmbedder {
  Matrix category;   // n_categories x d_c
  Matrix sentiment;  // 10 x d_s

  /// -5..-1 -> rows 0..4, 1..5 -> rows 5..9.
  static std::size_t sentiment_row(int sentiment);
};

struct AttributeVectors {
  std::span<const double> category;
  std::span<const double> sentiment;
};

/// Throws InputError for an out-of-range category or sentiment.
AttributeVectors embed_attributes(const ReviewAttributes& attrs, const AttributeEmbedder& embedder);

struct EmissionHead {
  Matrix hidden_w;  // d_h x (d_c + d_s + d_t)
  Matrix hidden_b;  // 1 x d_h
  Matrix out_w;     // K x d_h
  Matrix out_b;     // 1 x K
  Activation activation = Activation::kTanh;
  double dropout = 0.1;

  std::size_t input_width() const { return hidden_w.cols(); }
  std::size_t hidden_width() const { return hidden_w.rows(); }
};

/// Trainable lookup table over a closed vocabulary. Rows for <unk>,
/// <number> and <appname> always exist. With window > 0 each token vector is
/// the mean of the rows within +-window positions.
class NativeEmbedding {
 public:
  NativeEmbedding() = default;
  NativeEmbedding(std::vector<std::string> vocab, std::size_t dim, int window);

  /// Vocabulary of every distinct token in `sentences`, specials first, the
  /// rest sorted.
  static std::vector<std::string> build_vocab(std::span<const Sentence> sentences);

  std::size_t id(std::string_view token) const;
  std::size_t unknown_id() const { return unk_; }
  const std::vector<std::string>& vocab() const { return vocab_; }
  std::size_t dim() const { return table.cols(); }

  Matrix table;  // |V| x d_t
  int window = 0;

 private:
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t unk_ = 0;
};

/// File-backed vectors keyed by sentence id ("<review_id>#<index>") or, for
/// phrase stores, by phrase text.
///
/// Binary layout, little-endian:
///   magic "RMVS" | u32 version (1) | u32 dim
///   repeated: u32 key_len | key bytes | u32 rows | rows*dim f32
class PrecomputedVectors {
 public:
  static constexpr std::uint32_t kVersion = 1;

  explicit PrecomputedVectors(std::size_t dim = 0) : dim_(dim) {}

  void insert(std::string key, Matrix rows);
  /// Throws InputError for a missing key.
  const Matrix& at(std::string_view key) const;
  bool contains(std::string_view key) const { return rows_.find(key) != rows_.end(); }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }

  void write(std::ostream& out) const;
  void save(const std::string& path) const;
  static PrecomputedVectors read(std::istream& in);
  static PrecomputedVectors load(const std::string& path);

 private:
  std::size_t dim_;
  std::map<std::string, Matrix, std::less<>> rows_;
};

using EncoderPlugin = std::variant<const NativeEmbedding*, const PrecomputedVectors*>;

/// (T x d_t) token vectors.
Matrix encode_tokens(const Sentence& sentence, const NativeEmbedding& native);
Matrix encode_tokens(const Sentence& sentence, const PrecomputedVectors& store);
Matrix encode_tokens(const Sentence& sentence, const EncoderPlugin& plugin);

/// Adds d(loss)/d(table) given d(loss)/d(token vectors).
void encode_tokens_backward(const Sentence& sentence, const NativeEmbedding& native,
                            const Matrix& d_tokens, Matrix& d_table);

/// Intermediate values kept for the backward pass.
struct EmissionTrace {
  Matrix input;      // T x d_in, after dropout
  Matrix hidden;     // T x d_h, post-activation
  Matrix scores;     // T x K
  Matrix keep_scale; // T x d_t dropout multipliers; empty when dropout is off
};

/// Pass `dropout_rng` to run in training mode; nullptr disables dropout.
EmissionTrace emissions_forward(const Matrix& tokens, AttributeVectors attrs, const EmissionHead& head,
                                Rng* dropout_rng = nullptr);

inline Matrix emissions(const Matrix& tokens, AttributeVectors attrs, const EmissionHead& head,
                        Rng* dropout_rng = nullptr) {
  return emissions_forward(tokens, attrs, head, dropout_rng).scores;
}

/// Accumulates gradients into `grad` (same shapes as `head`), the attribute
/// vectors, and optionally the token vectors.
void emissions_backward(const EmissionTrace& trace, const Matrix& d_scores, const EmissionHead& head,
                        EmissionHead& grad, std::span<double> d_category, std::span<double> d_sentiment,
                        Matrix* d_tokens);

}  // namespace revmine
