#include "srr/train.hpp"

#include <algorithm>

namespace srr {

std::vector<TrainPair> make_pairs(const Sample& sample, Rng& rng) {
  std::vector<int> gold, rest;
  for (int i = 0; i < static_cast<int>(sample.candidates.size()); ++i) {
    if (sample.is_gold(sample.candidates[i].id)) gold.push_back(i);
    else rest.push_back(i);
  }
  std::vector<TrainPair> pairs;
  for (int gi : gold) {
    pairs.push_back({gi, 1});
    if (!rest.empty()) pairs.push_back({rng.pick(rest), 0});
  }
  return pairs;
}

namespace {

std::vector<Tensor<float>*> tensor_list(Params& p) {
  std::vector<Tensor<float>*> out;
  p.visit([&](const std::string&, Tensor<float>& t) { out.push_back(&t); });
  return out;
}

}  // namespace

void adam_step(Params& params, const Params& grads, AdamState& state,
               const TrainConfig& config) {
  if (state.step == 0) {
    state.m.allocate(params.config);
    state.v.allocate(params.config);
  }
  ++state.step;
  auto ps = tensor_list(params);
  auto gs = tensor_list(const_cast<Params&>(grads));
  auto ms = tensor_list(state.m);
  auto vs = tensor_list(state.v);
  double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  for (std::size_t t = 0; t < ps.size(); ++t) {
    if (gs[t]->v.size() != ps[t]->v.size()) {
      throw std::invalid_argument("gradient shape mismatch in adam_step");
    }
    for (std::size_t i = 0; i < ps[t]->v.size(); ++i) {
      double g = gs[t]->v[i];
      double m = config.beta1 * ms[t]->v[i] + (1.0 - config.beta1) * g;
      double v = config.beta2 * vs[t]->v[i] + (1.0 - config.beta2) * g * g;
      ms[t]->v[i] = static_cast<float>(m);
      vs[t]->v[i] = static_cast<float>(v);
      double update = config.learning_rate * (m / bc1) /
                      (std::sqrt(v / bc2) + config.adam_eps);
      ps[t]->v[i] = static_cast<float>(ps[t]->v[i] - update);
    }
  }
}

namespace {

struct ValMetrics {
  double top1_error = 0;
  double exact_match = 0;
};

ValMetrics eval_split(const std::vector<Sample>& split, const Params& params,
                      const Stopwords& stopwords, const ModuleMask& mask) {
  ValMetrics m;
  if (split.empty()) return m;
  int err = 0, em = 0;
  for (const Sample& s : split) {
    Prediction pred =
        resolve(s, params, stopwords, params.config.threshold, mask);
    if (!s.is_gold(pred.argmax_id)) ++err;
    std::vector<int> sel = pred.selected_ids;
    std::vector<int> gold = s.gold_ids;
    std::sort(sel.begin(), sel.end());
    std::sort(gold.begin(), gold.end());
    if (sel == gold) ++em;
  }
  m.top1_error = 100.0 * err / static_cast<double>(split.size());
  m.exact_match = 100.0 * em / static_cast<double>(split.size());
  return m;
}

}  // namespace

Params train(const std::vector<Sample>& train_split,
             const std::vector<Sample>& val_split,
             const ModelConfig& model_config, const TrainConfig& train_config,
             const Stopwords& stopwords, const ModuleMask& mask,
             TrainHistory* history) {
  if (train_split.empty() || val_split.empty()) {
    throw std::invalid_argument("train and val splits must be non-empty");
  }
  if (!mask.cat && !mask.loc && !mask.text) {
    throw std::invalid_argument("at least one module must be enabled");
  }

  Params params;
  params.allocate(model_config);
  params.init_random(train_config.seed);
  AdamState state;
  Rng rng(train_config.seed + 0x9e3779b97f4a7c15ull);

  Params best = params;
  double best_top1 = std::numeric_limits<double>::infinity();
  int best_epoch = -1;

  std::vector<int> order(train_split.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

  for (int epoch = 0; epoch < train_config.max_epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0;
    int n_batches = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(train_config.batch_size)) {
      std::vector<BatchItem> batch;
      std::size_t end = std::min(
          order.size(), start + static_cast<std::size_t>(train_config.batch_size));
      for (std::size_t i = start; i < end; ++i) {
        const Sample& s = train_split[order[i]];
        BatchItem item;
        item.sample = &s;
        item.pairs = make_pairs(s, rng);
        if (!item.pairs.empty()) batch.push_back(std::move(item));
      }
      if (batch.empty()) continue;
      Params grads;
      grads.allocate(model_config);
      float loss = batch_loss(batch, params, train_config.aux_loss_weight,
                              stopwords, mask, &grads);
      adam_step(params, grads, state, train_config);
      loss_sum += loss;
      ++n_batches;
    }

    ValMetrics vm = eval_split(val_split, params, stopwords, mask);
    EpochStats es;
    es.epoch = epoch;
    es.train_loss = n_batches ? loss_sum / n_batches : 0.0;
    es.val_top1_error = vm.top1_error;
    es.val_exact_match = vm.exact_match;
    if (history) history->epochs.push_back(es);

    if (vm.top1_error < best_top1) {
      best_top1 = vm.top1_error;
      best = params;
      best_epoch = epoch;
    } else if (epoch - best_epoch > train_config.patience) {
      break;
    }
  }
  if (history) history->selected_epoch = best_epoch;
  return best;
}

}  // namespace srr
