#pragma once

#include <cstdint>
#include <vector>

#include "revmine/model.hpp"

namespace revmine {

struct TrainConfig {
  double learning_rate = 1e-4;
  std::size_t batch_size = 32;
  double dropout = 0.1;
  int epochs = 100;
  std::uint64_t seed = 42;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  bool structural_mask = true;
  /// Share of the data held out for epoch selection when no explicit
  /// validation set is given.
  double validation_fraction = 0.1;

  void validate() const;  // throws InputError
  bool operator==(const TrainConfig&) const = default;
};

/// Adam with bias correction; state is shaped like the model.
class Adam {
 public:
  Adam(const CrfModel& model, const TrainConfig& config);
  void step(CrfModel& model, const CrfModel& grad);

 private:
  CrfModel m_, v_;
  double lr_, beta1_, beta2_, eps_;
  long long t_ = 0;
};

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;
  double validation_f1 = 0.0;
};

struct TrainResult {
  CrfModel model;  // parameters from the epoch with the best validation F1
  std::vector<EpochLog> log;
  int best_epoch = 0;
};

/// Mini-batch Adam on the mean NLL; all randomness derives from
/// config.seed. With an empty `validation` set the last
/// epoch is kept.
TrainResult train(const std::vector<TaggedSentence>& train_set, const std::vector<TaggedSentence>& validation,
                  const TrainConfig& config, const ModelSpec& spec, const std::vector<std::string>& categories,
                  const PrecomputedVectors* store = nullptr);

/// Splits `validation_fraction` of `dataset` off (seeded) for validation.
TrainResult train(const std::vector<TaggedSentence>& dataset, const TrainConfig& config, const ModelSpec& spec,
                  const std::vector<std::string>& categories, const PrecomputedVectors* store = nullptr);

std::vector<TaggedSentence> to_tagged(const std::vector<LabeledSentence>& data);

}  // namespace revmine
