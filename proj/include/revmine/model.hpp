#pragma once

// The trainable extractor and its checkpoint format.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "revmine/crf.hpp"
#include "revmine/encoder.hpp"
#include "revmine/phrase.hpp"

namespace revmine {

enum class EncoderKind { kNative, kPrecomputed };

std::string_view to_string(EncoderKind k);
EncoderKind encoder_kind_from_string(std::string_view s);

/// Architecture. Setting both attribute dims to 0 gives a text-only model.
struct ModelSpec {
  std::size_t category_dim = 16;
  std::size_t sentiment_dim = 16;
  std::size_t hidden = 128;
  std::size_t token_dim = 64;
  int window = 2;
  Activation activation = Activation::kTanh;
  EncoderKind encoder = EncoderKind::kNative;
  bool operator==(const ModelSpec&) const = default;
};

struct NamedParam {
  std::string name;
  Matrix* value;
};

struct ConstNamedParam {
  std::string name;
  const Matrix* value;
};

class CrfModel {
 public:
  ModelSpec spec;
  std::vector<std::string> categories;
  AttributeEmbedder attributes;
  EmissionHead head;
  TransitionMatrix transitions;
  NativeEmbedding native;  // empty unless spec.encoder == kNative

  /// Xavier-style uniform init for tables and MLP, uniform(-0.1, 0.1) for
  /// trainable transitions. `vocab` is ignored for precomputed encoders.
  static CrfModel create(const ModelSpec& spec, std::vector<std::string> categories,
                         std::vector<std::string> vocab, bool structural_mask, double dropout,
                         std::uint64_t seed);

  /// Every trainable tensor, in checkpoint order.
  std::vector<NamedParam> parameters();
  std::vector<ConstNamedParam> parameters() const;
  /// Same shapes, all zeros; used as a gradient accumulator.
  CrfModel zeros_like() const;
  std::size_t parameter_count() const;
  /// FNV-1a over every parameter's bytes.
  std::uint64_t checksum() const;

  std::size_t token_dim() const;

  /// Binary checkpoint, little-endian:
  ///   magic "RMCK" | u32 version | u32 len + JSON hyperparameters
  ///   u32 tensor count | per tensor: u32 len + name, u32 rows, u32 cols, rows*cols f64
  void write(std::ostream& out) const;
  void save(const std::string& path) const;
  static CrfModel read(std::istream& in);
  static CrfModel load(const std::string& path);

  static constexpr std::uint32_t kCheckpointVersion = 1;
};

/// Emission scores for one sentence; `store` is required for precomputed
/// encoders.
Matrix model_emissions(const CrfModel& model, const Sentence& sentence, const PrecomputedVectors* store);

std::vector<BioTag> predict_tags(const CrfModel& model, const Sentence& sentence, const PrecomputedVectors* store);
std::vector<Span> predict_spans(const CrfModel& model, const Sentence& sentence, const PrecomputedVectors* store);

/// Mean over the batch of log Z - gold score. When `grad` is non-null the
/// mean gradient is added to it; `dropout_rng` enables training-mode dropout.
double nll_loss(std::span<const TaggedSentence> batch, const CrfModel& model, const PrecomputedVectors* store,
                CrfModel* grad = nullptr, Rng* dropout_rng = nullptr);

/// Decoded spans of `sentence` as phrase records.
std::vector<PhraseRecord> extract(const Sentence& sentence, const CrfModel& model, const PrecomputedVectors* store);

}  // namespace revmine
