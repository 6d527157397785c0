#include "revmine/crf.hpp"

#include <cmath>
#include <limits>

namespace revmine {

namespace {

constexpr std::size_t K = kNumTags;

double log_sum_exp(std::span<const double> xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

void check_emissions(const Matrix& emissions) {
  if (emissions.cols() != K) throw InputError("emission matrix must have 3 columns");
}

std::size_t idx(BioTag t) { return static_cast<std::size_t>(t); }

}  // namespace

TransitionMatrix::TransitionMatrix(bool structural_mask)
    : scores_(kNumStates, kNumStates), trainable_(kNumStates * kNumStates, true), structural_mask_(structural_mask) {
  for (int i = 0; i < kNumStates; ++i) {
    trainable_[static_cast<std::size_t>(i * kNumStates + kStartState)] = false;
    trainable_[static_cast<std::size_t>(kStopState * kNumStates + i)] = false;
  }
  trainable_[static_cast<std::size_t>(kStartState * kNumStates + kStopState)] = false;
  if (structural_mask) {
    const int i_tag = static_cast<int>(BioTag::I);
    trainable_[static_cast<std::size_t>(static_cast<int>(BioTag::O) * kNumStates + i_tag)] = false;
    trainable_[static_cast<std::size_t>(kStartState * kNumStates + i_tag)] = false;
  }
  reapply_mask();
}

void TransitionMatrix::set(int from, int to, double v) {
  if (trainable(from, to)) scores_(static_cast<std::size_t>(from), static_cast<std::size_t>(to)) = v;
}

void TransitionMatrix::reapply_mask() {
  for (std::size_t i = 0; i < trainable_.size(); ++i) {
    if (!trainable_[i]) scores_.data()[i] = kMaskedScore;
  }
}

double sequence_score(const Matrix& emissions, std::span<const BioTag> tags, const TransitionMatrix& a) {
  check_emissions(emissions);
  if (tags.size() != emissions.rows() || tags.empty()) {
    throw InputError("tag count does not match emission rows");
  }
  double s = 0.0;
  int prev = kStartState;
  for (std::size_t t = 0; t < tags.size(); ++t) {
    const int cur = static_cast<int>(tags[t]);
    s += a(prev, cur) + emissions(t, idx(tags[t]));
    prev = cur;
  }
  return s + a(prev, kStopState);
}

namespace {

// alpha(t, j) = log-sum over prefixes ending in tag j at t.
Matrix forward_table(const Matrix& e, const TransitionMatrix& a) {
  const std::size_t n = e.rows();
  Matrix alpha(n, K);
  for (std::size_t j = 0; j < K; ++j) alpha(0, j) = a(kStartState, static_cast<int>(j)) + e(0, j);
  double buf[K];
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t j = 0; j < K; ++j) {
      for (std::size_t i = 0; i < K; ++i) buf[i] = alpha(t - 1, i) + a(static_cast<int>(i), static_cast<int>(j));
      alpha(t, j) = log_sum_exp(buf) + e(t, j);
    }
  }
  return alpha;
}

// beta(t, i) = log-sum over suffixes after tag i at t, including STOP.
Matrix backward_table(const Matrix& e, const TransitionMatrix& a) {
  const std::size_t n = e.rows();
  Matrix beta(n, K);
  for (std::size_t i = 0; i < K; ++i) beta(n - 1, i) = a(static_cast<int>(i), kStopState);
  double buf[K];
  for (std::size_t t = n - 1; t-- > 0;) {
    for (std::size_t i = 0; i < K; ++i) {
      for (std::size_t j = 0; j < K; ++j) {
        buf[j] = a(static_cast<int>(i), static_cast<int>(j)) + e(t + 1, j) + beta(t + 1, j);
      }
      beta(t, i) = log_sum_exp(buf);
    }
  }
  return beta;
}

double final_log_z(const Matrix& alpha, const TransitionMatrix& a) {
  const std::size_t last = alpha.rows() - 1;
  double buf[K];
  for (std::size_t j = 0; j < K; ++j) buf[j] = alpha(last, j) + a(static_cast<int>(j), kStopState);
  return log_sum_exp(buf);
}

}  // namespace

double log_partition(const Matrix& emissions, const TransitionMatrix& transitions) {
  check_emissions(emissions);
  if (emissions.rows() == 0) throw InputError("log_partition needs at least one token");
  return final_log_z(forward_table(emissions, transitions), transitions);
}

Marginals forward_backward(const Matrix& emissions, const TransitionMatrix& a) {
  check_emissions(emissions);
  const std::size_t n = emissions.rows();
  if (n == 0) throw InputError("forward_backward needs at least one token");
  const Matrix alpha = forward_table(emissions, a);
  const Matrix beta = backward_table(emissions, a);
  Marginals m;
  m.log_z = final_log_z(alpha, a);
  m.node = Matrix(n, K);
  m.edge = Matrix(kNumStates, kNumStates);
  for (std::size_t t = 0; t < n; ++t) {
    for (std::size_t j = 0; j < K; ++j) m.node(t, j) = std::exp(alpha(t, j) + beta(t, j) - m.log_z);
  }
  for (std::size_t j = 0; j < K; ++j) {
    m.edge(kStartState, j) += m.node(0, j);
    m.edge(j, kStopState) += m.node(n - 1, j);
  }
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t i = 0; i < K; ++i) {
      for (std::size_t j = 0; j < K; ++j) {
        m.edge(i, j) += std::exp(alpha(t - 1, i) + a(static_cast<int>(i), static_cast<int>(j)) + emissions(t, j) +
                                 beta(t, j) - m.log_z);
      }
    }
  }
  return m;
}

SentenceLoss sentence_nll(const Matrix& emissions, std::span<const BioTag> gold, const TransitionMatrix& a) {
  const double gold_score = sequence_score(emissions, gold, a);
  Marginals m = forward_backward(emissions, a);
  SentenceLoss out;
  out.loss = m.log_z - gold_score;
  out.d_emissions = std::move(m.node);
  for (std::size_t t = 0; t < gold.size(); ++t) out.d_emissions(t, idx(gold[t])) -= 1.0;
  out.d_transitions = std::move(m.edge);
  int prev = kStartState;
  for (BioTag tag : gold) {
    out.d_transitions(static_cast<std::size_t>(prev), idx(tag)) -= 1.0;
    prev = static_cast<int>(tag);
  }
  out.d_transitions(static_cast<std::size_t>(prev), kStopState) -= 1.0;
  for (int i = 0; i < kNumStates; ++i) {
    for (int j = 0; j < kNumStates; ++j) {
      if (!a.trainable(i, j)) out.d_transitions(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = 0.0;
    }
  }
  return out;
}

std::vector<BioTag> viterbi_decode(const Matrix& emissions, const TransitionMatrix& a) {
  check_emissions(emissions);
  const std::size_t n = emissions.rows();
  if (n == 0) throw InputError("viterbi_decode needs at least one token");
  Matrix best(n, K);
  std::vector<std::uint8_t> back(n * K, 0);
  for (std::size_t j = 0; j < K; ++j) best(0, j) = a(kStartState, static_cast<int>(j)) + emissions(0, j);
  for (std::size_t t = 1; t < n; ++t) {
    for (std::size_t j = 0; j < K; ++j) {
      std::size_t arg = 0;
      double top = best(t - 1, 0) + a(0, static_cast<int>(j));
      for (std::size_t i = 1; i < K; ++i) {
        const double s = best(t - 1, i) + a(static_cast<int>(i), static_cast<int>(j));
        if (s > top) {  // strict: keeps the lower index on ties
          top = s;
          arg = i;
        }
      }
      best(t, j) = top + emissions(t, j);
      back[t * K + j] = static_cast<std::uint8_t>(arg);
    }
  }
  std::size_t arg = 0;
  double top = best(n - 1, 0) + a(0, kStopState);
  for (std::size_t j = 1; j < K; ++j) {
    const double s = best(n - 1, j) + a(static_cast<int>(j), kStopState);
    if (s > top) {
      top = s;
      arg = j;
    }
  }
  std::vector<BioTag> tags(n);
  for (std::size_t t = n; t-- > 0;) {
    tags[t] = static_cast<BioTag>(arg);
    if (t > 0) arg = back[t * K + arg];
  }
  return tags;
}

}  // namespace revmine
