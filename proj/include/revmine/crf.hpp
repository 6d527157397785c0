#pragma once

// Linear-chain CRF over {B, I, O} with virtual START/STOP states.
//
// score(tags) = sum_t A[tag_{t-1}, tag_t] + E[t, tag_t] + A[tag_T, STOP],
// with tag_0 = START. All arithmetic is in doubles.

#include <span>
#include <vector>

#include "revmine/common.hpp"
#include "revmine/corpus.hpp"

namespace revmine {

inline constexpr int kStartState = 3;
inline constexpr int kStopState = 4;
inline constexpr int kNumStates = 5;

/// Working value for forbidden transitions.
inline constexpr double kMaskedScore = -1e4;

class TransitionMatrix {
 public:
  /// All trainable entries zero. Transitions into START and out of STOP are
  /// always masked; with `structural_mask`, O->I and START->I are as well.
  explicit TransitionMatrix(bool structural_mask = true);

  double operator()(int from, int to) const { return scores_(static_cast<std::size_t>(from), static_cast<std::size_t>(to)); }
  bool trainable(int from, int to) const { return trainable_[static_cast<std::size_t>(from * kNumStates + to)]; }
  bool structural_mask() const { return structural_mask_; }

  /// Sets a trainable entry. Masked entries are ignored.
  void set(int from, int to, double v);

  /// Raw scores, including masked entries. Callers that write through this
  /// must call reapply_mask() afterwards.
  Matrix& scores() { return scores_; }
  const Matrix& scores() const { return scores_; }
  void reapply_mask();

 private:
  Matrix scores_;
  std::vector<bool> trainable_;
  bool structural_mask_;
};

double sequence_score(const Matrix& emissions, std::span<const BioTag> tags, const TransitionMatrix& transitions);

/// log of the sum over all K^T tag sequences of exp(sequence_score), by the
/// forward algorithm in log space.
double log_partition(const Matrix& emissions, const TransitionMatrix& transitions);

struct Marginals {
  double log_z = 0.0;
  Matrix node;  // T x K posterior tag probabilities
  Matrix edge;  // kNumStates x kNumStates expected transition counts
};

Marginals forward_backward(const Matrix& emissions, const TransitionMatrix& transitions);

struct SentenceLoss {
  double loss = 0.0;      // log_partition - sequence_score(gold)
  Matrix d_emissions;     // T x K
  Matrix d_transitions;   // kNumStates x kNumStates, zero on masked entries
};

SentenceLoss sentence_nll(const Matrix& emissions, std::span<const BioTag> gold,
                          const TransitionMatrix& transitions);

/// Highest-scoring tag sequence; ties go to the lower tag index (B < I < O).
std::vector<BioTag> viterbi_decode(const Matrix& emissions, const TransitionMatrix& transitions);

}  // namespace revmine
