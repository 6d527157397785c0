#include "revmine/train.hpp"

#include <cmath>
#include <numeric>

#include "revmine/eval.hpp"

namespace revmine {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InputError("learning_rate must be > 0");
  if (batch_size < 1) throw InputError("batch_size must be >= 1");
  if (dropout < 0.0 || dropout >= 1.0) throw InputError("dropout must be in [0, 1)");
  if (epochs < 1) throw InputError("epochs must be >= 1");
  if (validation_fraction < 0.0 || validation_fraction >= 1.0) {
    throw InputError("validation_fraction must be in [0, 1)");
  }
}

Adam::Adam(const CrfModel& model, const TrainConfig& config)
    : m_(model.zeros_like()),
      v_(model.zeros_like()),
      lr_(config.learning_rate),
      beta1_(config.beta1),
      beta2_(config.beta2),
      eps_(config.epsilon) {}

void Adam::step(CrfModel& model, const CrfModel& grad) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  auto params = model.parameters();
  auto grads = grad.parameters();
  auto ms = m_.parameters();
  auto vs = v_.parameters();
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto& w = params[p].value->data();
    const auto& g = grads[p].value->data();
    auto& m = ms[p].value->data();
    auto& v = vs[p].value->data();
    for (std::size_t i = 0; i < w.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
      w[i] -= lr_ * (m[i] / c1) / (std::sqrt(v[i] / c2) + eps_);
    }
  }
  model.transitions.reapply_mask();
}

std::vector<TaggedSentence> to_tagged(const std::vector<LabeledSentence>& data) {
  std::vector<TaggedSentence> out;
  out.reserve(data.size());
  for (const auto& ls : data) out.push_back(encode_bio(ls.sentence, ls.spans));
  return out;
}

namespace {

double validation_f1(const CrfModel& model, const std::vector<TaggedSentence>& data, const PrecomputedVectors* store) {
  std::vector<std::vector<Span>> pred, gold;
  pred.reserve(data.size());
  gold.reserve(data.size());
  for (const auto& ts : data) {
    pred.push_back(predict_spans(model, ts.sentence, store));
    gold.push_back(decode_bio(ts.tags));
  }
  return span_prf(pred, gold).f1;
}

}  // namespace

TrainResult train(const std::vector<TaggedSentence>& train_set, const std::vector<TaggedSentence>& validation,
                  const TrainConfig& config, const ModelSpec& spec, const std::vector<std::string>& categories,
                  const PrecomputedVectors* store) {
  config.validate();
  if (train_set.empty()) throw InputError("training set is empty");
  for (const auto& ts : train_set) {
    if (ts.tags.size() != ts.sentence.tokens.size() || ts.tags.empty()) {
      throw InputError("sentence '" + ts.sentence.key() + "' has mismatched tags");
    }
  }

  std::vector<Sentence> sentences;
  sentences.reserve(train_set.size());
  for (const auto& ts : train_set) sentences.push_back(ts.sentence);
  const auto vocab = NativeEmbedding::build_vocab(sentences);

  TrainResult result;
  CrfModel model = CrfModel::create(spec, categories, vocab, config.structural_mask, config.dropout,
                                    mix_seed(config.seed, 0));
  Adam adam(model, config);
  CrfModel grad = model.zeros_like();
  Rng shuffle_rng(mix_seed(config.seed, 1));
  Rng dropout_rng(mix_seed(config.seed, 2));

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<TaggedSentence> batch;
  double best_f1 = -1.0;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    shuffle(order, shuffle_rng);
    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(train_set[order[i]]);
      for (auto& p : grad.parameters()) p.value->fill(0.0);
      loss_sum += nll_loss(batch, model, store, &grad, &dropout_rng) * static_cast<double>(batch.size());
      adam.step(model, grad);
    }
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = loss_sum / static_cast<double>(order.size());
    if (!validation.empty()) {
      entry.validation_f1 = validation_f1(model, validation, store);
      if (entry.validation_f1 > best_f1) {
        best_f1 = entry.validation_f1;
        result.model = model;
        result.best_epoch = epoch;
      }
    }
    result.log.push_back(entry);
  }
  if (validation.empty()) {
    result.model = std::move(model);
    result.best_epoch = config.epochs;
  }
  return result;
}

TrainResult train(const std::vector<TaggedSentence>& dataset, const TrainConfig& config, const ModelSpec& spec,
                  const std::vector<std::string>& categories, const PrecomputedVectors* store) {
  config.validate();
  if (dataset.empty()) throw InputError("training set is empty");
  std::vector<std::size_t> order(dataset.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(mix_seed(config.seed, 3));
  shuffle(order, rng);
  const auto n_val = static_cast<std::size_t>(std::floor(config.validation_fraction * static_cast<double>(dataset.size())));
  std::vector<TaggedSentence> tr, va;
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_val ? va : tr).push_back(dataset[order[i]]);
  }
  if (tr.empty()) throw InputError("no training sentences left after the validation split");
  return train(tr, va, config, spec, categories, store);
}

}  // namespace revmine
