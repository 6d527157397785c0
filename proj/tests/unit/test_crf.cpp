#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "revmine/crf.hpp"

using namespace revmine;
using revmine::testing::brute_force;
using revmine::testing::random_matrix;
using revmine::testing::random_transitions;

namespace {

TransitionMatrix zero_transitions(bool mask = false) { return TransitionMatrix(mask); }

}  // namespace

TEST_SUITE("crf") {
  TEST_CASE("transition masks") {
    const TransitionMatrix plain(false);
    const TransitionMatrix masked(true);
    for (int i = 0; i < kNumStates; ++i) {
      CHECK(plain(i, kStartState) == kMaskedScore);
      CHECK(plain(kStopState, i) == kMaskedScore);
      CHECK_FALSE(plain.trainable(i, kStartState));
    }
    CHECK(plain(static_cast<int>(BioTag::O), static_cast<int>(BioTag::I)) == 0.0);
    CHECK(masked(static_cast<int>(BioTag::O), static_cast<int>(BioTag::I)) == kMaskedScore);
    CHECK(masked(kStartState, static_cast<int>(BioTag::I)) == kMaskedScore);
    TransitionMatrix t(true);
    t.set(static_cast<int>(BioTag::O), static_cast<int>(BioTag::I), 3.0);
    CHECK(t(static_cast<int>(BioTag::O), static_cast<int>(BioTag::I)) == kMaskedScore);
  }

  TEST_CASE("sequence_score examples") {
    Matrix e(1, 3);
    e(0, 0) = 1;
    e(0, 1) = 2;
    e(0, 2) = 3;
    CHECK(sequence_score(e, std::vector<BioTag>{BioTag::O}, zero_transitions()) == 3.0);
    const Matrix z(4, 3);
    for (const auto& tags : testing::all_tag_lists(4)) CHECK(sequence_score(z, tags, zero_transitions()) == 0.0);
  }

  TEST_CASE("sequence_score equals direct summation") {
    Rng rng(1);
    for (int rep = 0; rep < 50; ++rep) {
      const Matrix e = random_matrix(rng, 3, 3, 2.0);
      const TransitionMatrix a = random_transitions(rng, rep % 2 == 0, 1.0);
      for (const auto& tags : testing::all_tag_lists(3)) {
        CHECK(sequence_score(e, tags, a) == doctest::Approx(testing::brute_score(e, tags, a)).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("log_partition of all-zero scores is T ln K") {
    for (std::size_t T = 1; T <= 6; ++T) {
      const Matrix z(T, 3);
      CHECK(log_partition(z, zero_transitions()) == doctest::Approx(static_cast<double>(T) * std::log(3.0)));
    }
  }

  TEST_CASE("log_partition and viterbi match enumeration") {
    Rng rng(2);
    for (int rep = 0; rep < 200; ++rep) {
      const std::size_t T = 1 + static_cast<std::size_t>(rep % 6);
      const Matrix e = random_matrix(rng, T, 3, 3.0);
      const TransitionMatrix a = random_transitions(rng, rep % 3 != 0, 2.0);
      const auto bf = brute_force(e, a);
      CHECK(std::fabs(log_partition(e, a) - bf.log_z) < 1e-8);
      const auto tags = viterbi_decode(e, a);
      CHECK(testing::brute_score(e, tags, a) == bf.max_score);
      CHECK(tags == bf.argmax);
      for (const auto& t : testing::all_tag_lists(T)) CHECK(bf.log_z >= sequence_score(e, t, a));
    }
  }

  TEST_CASE("probabilities sum to one") {
    Rng rng(3);
    for (std::size_t T = 1; T <= 6; ++T) {
      const Matrix e = random_matrix(rng, T, 3, 3.0);
      const TransitionMatrix a = random_transitions(rng, T % 2 == 0, 2.0);
      const double log_z = log_partition(e, a);
      double total = 0.0;
      for (const auto& t : testing::all_tag_lists(T)) total += std::exp(sequence_score(e, t, a) - log_z);
      CHECK(std::fabs(total - 1.0) < 1e-8);
    }
  }

  TEST_CASE("marginals match enumeration") {
    Rng rng(4);
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t T = 1 + static_cast<std::size_t>(rep % 5);
      const Matrix e = random_matrix(rng, T, 3, 2.0);
      const TransitionMatrix a = random_transitions(rng, rep % 2 == 0, 1.0);
      const auto m = forward_backward(e, a);
      Matrix node(T, 3);
      Matrix edge(kNumStates, kNumStates);
      for (const auto& tags : testing::all_tag_lists(T)) {
        const double p = std::exp(testing::brute_score(e, tags, a) - m.log_z);
        int prev = kStartState;
        for (std::size_t t = 0; t < T; ++t) {
          node(t, static_cast<std::size_t>(tags[t])) += p;
          edge(static_cast<std::size_t>(prev), static_cast<std::size_t>(tags[t])) += p;
          prev = static_cast<int>(tags[t]);
        }
        edge(static_cast<std::size_t>(prev), kStopState) += p;
      }
      for (std::size_t i = 0; i < node.size(); ++i) CHECK(std::fabs(node.data()[i] - m.node.data()[i]) < 1e-10);
      for (std::size_t i = 0; i < edge.size(); ++i) CHECK(std::fabs(edge.data()[i] - m.edge.data()[i]) < 1e-10);
    }
  }

  TEST_CASE("viterbi with zero transitions is the per-token argmax") {
    Rng rng(5);
    for (int rep = 0; rep < 30; ++rep) {
      const Matrix e = random_matrix(rng, 6, 3, 1.0);
      const auto tags = viterbi_decode(e, zero_transitions());
      for (std::size_t t = 0; t < 6; ++t) {
        const auto row = e.row(t);
        const auto best = std::max_element(row.begin(), row.end()) - row.begin();
        CHECK(static_cast<long>(tags[t]) == best);
      }
    }
  }

  TEST_CASE("viterbi ties go to the lower tag") {
    const Matrix e(3, 3);
    CHECK(viterbi_decode(e, zero_transitions()) == std::vector<BioTag>{BioTag::B, BioTag::B, BioTag::B});
  }

  TEST_CASE("structural mask keeps decoding well formed") {
    Rng rng(6);
    for (int rep = 0; rep < 100; ++rep) {
      Matrix e = random_matrix(rng, 6, 3, 3.0);
      for (std::size_t t = 0; t < 6; ++t) e(t, 1) += 2.0;  // favour I
      CHECK(is_well_formed(viterbi_decode(e, random_transitions(rng, true, 1.0))));
    }
  }

  TEST_CASE("decoding is invariant to a constant shift of an emission row") {
    Rng rng(7);
    for (int rep = 0; rep < 50; ++rep) {
      const Matrix e = random_matrix(rng, 5, 3, 2.0);
      const TransitionMatrix a = random_transitions(rng, false, 1.0);
      Matrix shifted = e;
      for (std::size_t t = 0; t < 5; ++t) {
        const double c = uniform(rng, -5.0, 5.0);
        for (std::size_t k = 0; k < 3; ++k) shifted(t, k) += c;
      }
      CHECK(viterbi_decode(e, a) == viterbi_decode(shifted, a));
    }
  }

  TEST_CASE("sentence_nll is small for peaked emissions and never negative") {
    const std::vector<BioTag> gold{BioTag::O, BioTag::B, BioTag::I, BioTag::O};
    Matrix e(4, 3, -100.0);
    for (std::size_t t = 0; t < 4; ++t) e(t, static_cast<std::size_t>(gold[t])) = 100.0;
    CHECK(sentence_nll(e, gold, zero_transitions()).loss < 1e-6);
    CHECK(sentence_nll(e, gold, zero_transitions()).loss >= 0.0);

    Rng rng(8);
    for (int rep = 0; rep < 100; ++rep) {
      const Matrix r = random_matrix(rng, 4, 3, 3.0);
      CHECK(sentence_nll(r, gold, random_transitions(rng, rep % 2 == 0, 2.0)).loss >= 0.0);
    }
  }

  TEST_CASE("sentence_nll gradients match central differences") {
    Rng rng(9);
    const double h = 1e-5;
    for (int rep = 0; rep < 20; ++rep) {
      const std::size_t T = 1 + static_cast<std::size_t>(rep % 5);
      Matrix e = random_matrix(rng, T, 3, 2.0);
      TransitionMatrix a = random_transitions(rng, rep % 2 == 0, 1.0);
      std::vector<BioTag> raw(T);
      for (auto& t : raw) t = static_cast<BioTag>(uniform_index(rng, 3));
      const auto gold = spans_to_tags(T, decode_bio(raw));
      const SentenceLoss l = sentence_nll(e, gold, a);
      for (std::size_t i = 0; i < e.size(); ++i) {
        const double saved = e.data()[i];
        e.data()[i] = saved + h;
        const double up = sentence_nll(e, gold, a).loss;
        e.data()[i] = saved - h;
        const double down = sentence_nll(e, gold, a).loss;
        e.data()[i] = saved;
        CHECK(testing::relative_error(l.d_emissions.data()[i], (up - down) / (2 * h)) < 1e-4);
      }
      for (int from = 0; from < kNumStates; ++from) {
        for (int to = 0; to < kNumStates; ++to) {
          const auto idx = static_cast<std::size_t>(from * kNumStates + to);
          if (!a.trainable(from, to)) {
            CHECK(l.d_transitions.data()[idx] == 0.0);
            continue;
          }
          const double saved = a(from, to);
          a.set(from, to, saved + h);
          const double up = sentence_nll(e, gold, a).loss;
          a.set(from, to, saved - h);
          const double down = sentence_nll(e, gold, a).loss;
          a.set(from, to, saved);
          CHECK(testing::relative_error(l.d_transitions.data()[idx], (up - down) / (2 * h)) < 1e-4);
        }
      }
    }
  }
}
