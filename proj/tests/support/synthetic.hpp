#pragma once

// Generated review corpora with planted problematic-feature spans.

#include <cstdint>
#include <string>
#include <vector>

#include "revmine/corpus.hpp"

namespace revmine::testing {

inline const std::vector<std::string> kSyntheticCategories{"communication", "social"};

enum class SyntheticKind {
  /// Spans follow trigger contexts ("can not", "when i try to", ...);
  /// distractor sentences mention the same features without a trigger.
  kTrigger,
  /// Every sentence names two features joined by "and"; negative sentiment
  /// marks the first as the problem, positive sentiment the second.
  kSentimentPosition,
};

struct SyntheticOptions {
  std::size_t n_sentences = 2000;
  std::uint64_t seed = 1;
  SyntheticKind kind = SyntheticKind::kTrigger;
  double distractor_rate = 0.35;
};

std::vector<LabeledSentence> make_corpus(const SyntheticOptions& options);

/// Number of distinct tokens the trigger generator can emit.
std::size_t trigger_vocabulary_size();

struct Split {
  std::vector<LabeledSentence> train, validation, test;
};

/// Deterministic 80/10/10 split.
Split split_80_10_10(const std::vector<LabeledSentence>& data, std::uint64_t seed);

}  // namespace revmine::testing
