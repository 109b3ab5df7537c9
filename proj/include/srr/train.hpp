#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "srr/model.hpp"
#include "srr/model_math.hpp"
#include "srr/rng.hpp"
#include "srr/types.hpp"

namespace srr {

struct TrainConfig {
  double learning_rate = 4e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  int batch_size = 32;
  int max_epochs = 30;
  int patience = 5;
  double aux_loss_weight = 0.5;
  std::uint64_t seed = 1;
};

struct EpochStats {
  int epoch = 0;
  double train_loss = 0;
  double val_top1_error = 0;
  double val_exact_match = 0;
};

struct TrainHistory {
  std::vector<EpochStats> epochs;
  int selected_epoch = -1;
};

// One positive per gold id, each with one uniformly drawn negative.
// Returned as (candidate index, label) pairs.
struct TrainPair {
  int candidate_index = 0;
  int label = 0;
};

std::vector<TrainPair> make_pairs(const Sample& sample, Rng& rng);

struct BatchItem {
  const Sample* sample = nullptr;
  std::vector<TrainPair> pairs;
};

namespace detail {

template <typename T>
T clamp_prob(T p) {
  const T lo = T(1e-7);
  return std::min(T(1) - lo, std::max(lo, p));
}

template <typename T>
void add_scaled(std::vector<T>& acc, const std::vector<T>& v, T s) {
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] += s * v[i];
}

// Backward through one scored candidate. Accumulates parameter gradients
// plus the per-sample accumulators for the shared request side.
template <typename T>
void score_entity_backward(const Entity& entity,
                           const RequestEncoding<T>& enc,
                           const EntityScoreCache<T>& c, T dlogit,
                           const ParamsT<T>& p, const ModuleMask& mask,
                           ParamsT<T>& g, std::vector<T>& dweights,
                           std::vector<T>& dr_cat, std::vector<T>& dr_loc) {
  dweights[0] += dlogit * c.s_cat;
  dweights[1] += dlogit * c.s_loc;
  dweights[2] += dlogit * c.s_text;

  if (mask.cat) {
    T ds = dlogit * enc.weights[0];
    std::vector<T> du(c.u.y.size());
    for (std::size_t i = 0; i < du.size(); ++i) du[i] = ds * enc.r_cat.y[i];
    std::vector<T> dcat_emb(c.cat_emb.size(), T(0));
    dense2_backward(p.cat_entity, c.u, du, g.cat_entity, &dcat_emb);
    const auto& words = category_word_tokens(entity.category);
    T inv = T(1) / static_cast<T>(words.size());
    for (const auto& w : words) {
      int b = token_bucket(w, p.config.vocab_buckets);
      for (std::size_t j = 0; j < dcat_emb.size(); ++j) {
        g.embed.at(b, static_cast<int>(j)) += dcat_emb[j] * inv;
      }
    }
    add_scaled(dr_cat, c.u.y, ds);
  }
  if (mask.loc) {
    T ds = dlogit * enc.weights[1];
    std::vector<T> dlf(c.lf.y.size());
    for (std::size_t i = 0; i < dlf.size(); ++i) dlf[i] = ds * enc.r_loc.y[i];
    dense2_backward(p.loc_feature, c.lf, dlf, g.loc_feature,
                    static_cast<std::vector<T>*>(nullptr));
    add_scaled(dr_loc, c.lf.y, ds);
  }
  if (mask.text) {
    std::vector<T> dy = {dlogit * enc.weights[2]};
    dense2_backward(p.text_mlp, c.tx, dy, g.text_mlp,
                    static_cast<std::vector<T>*>(nullptr));
  }
}

}  // namespace detail

// Mean BCE over pairs plus aux cross-entropy on tagged module weights.
// Gradients are accumulated into *grads when non-null.
template <typename T>
T batch_loss(const std::vector<BatchItem>& batch, const ParamsT<T>& p,
             double aux_weight, const Stopwords& stopwords,
             const ModuleMask& mask, ParamsT<T>* grads) {
  std::size_t n_pairs = 0;
  std::size_t n_tagged = 0;
  for (const auto& item : batch) {
    n_pairs += item.pairs.size();
    if (item.sample->supervision_tag &&
        mask.allows(*item.sample->supervision_tag) && aux_weight > 0) {
      ++n_tagged;
    }
  }
  if (n_pairs == 0) return T(0);

  T loss = T(0);
  for (const auto& item : batch) {
    const Sample& s = *item.sample;
    auto enc = encode_request(s.request.tokens, p, mask);
    int D = p.config.embed_dim;

    std::vector<T> dweights(3, T(0));
    std::vector<T> dr_cat(static_cast<std::size_t>(D), T(0));
    std::vector<T> dr_loc(static_cast<std::size_t>(D), T(0));

    for (const auto& pair : item.pairs) {
      const Entity& e = s.candidates[pair.candidate_index];
      auto c = score_entity_forward(s, e, enc, p, stopwords, mask);
      T y = static_cast<T>(pair.label);
      T pc = detail::clamp_prob(c.p);
      loss += -(y * std::log(pc) + (T(1) - y) * std::log(T(1) - pc)) /
              static_cast<T>(n_pairs);
      if (grads) {
        T dlogit = (c.p - y) / static_cast<T>(n_pairs);
        detail::score_entity_backward(e, enc, c, dlogit, p, mask, *grads,
                                      dweights, dr_cat, dr_loc);
      }
    }

    std::vector<T> dlogits(3, T(0));
    bool tagged = s.supervision_tag && mask.allows(*s.supervision_tag) &&
                  aux_weight > 0;
    if (tagged) {
      int idx = static_cast<int>(*s.supervision_tag);
      T w = std::max(enc.weights[idx], T(1e-7));
      loss += static_cast<T>(aux_weight) * (-std::log(w)) /
              static_cast<T>(n_tagged);
      if (grads) {
        T scale = static_cast<T>(aux_weight) / static_cast<T>(n_tagged);
        for (int i = 0; i < 3; ++i) {
          dlogits[i] += scale * (enc.weights[i] - (i == idx ? T(1) : T(0)));
        }
      }
    }

    if (!grads) continue;

    // Weight-block softmax backward; masked entries have alpha = 0 and
    // drop out of the formula naturally.
    T dot_wa = T(0);
    for (int i = 0; i < 3; ++i) dot_wa += enc.weights[i] * dweights[i];
    for (int i = 0; i < 3; ++i) {
      dlogits[i] += enc.weights[i] * (dweights[i] - dot_wa);
    }
    std::vector<T> dmean(static_cast<std::size_t>(D), T(0));
    dense2_backward(p.weight_block, enc.wc, dlogits, grads->weight_block,
                    &dmean);

    std::vector<std::vector<T>> dembs(
        enc.embs.size(), std::vector<T>(static_cast<std::size_t>(D), T(0)));
    T inv_n = T(1) / static_cast<T>(enc.embs.size());
    for (auto& de : dembs) detail::add_scaled(de, dmean, inv_n);

    std::vector<T> datt_cat(static_cast<std::size_t>(D), T(0));
    dense2_backward(p.cat_request, enc.r_cat, dr_cat, grads->cat_request,
                    &datt_cat);
    attention_backward(p.attn_cat_W, p.attn_cat_v, enc.embs, enc.att_cat,
                       datt_cat, grads->attn_cat_W, grads->attn_cat_v, dembs);

    std::vector<T> datt_loc(static_cast<std::size_t>(D), T(0));
    dense2_backward(p.loc_request, enc.r_loc, dr_loc, grads->loc_request,
                    &datt_loc);
    attention_backward(p.attn_loc_W, p.attn_loc_v, enc.embs, enc.att_loc,
                       datt_loc, grads->attn_loc_W, grads->attn_loc_v, dembs);

    for (std::size_t k = 0; k < enc.buckets.size(); ++k) {
      for (int j = 0; j < D; ++j) {
        grads->embed.at(enc.buckets[k], j) += dembs[k][j];
      }
    }
  }
  return loss;
}

struct AdamState {
  Params m, v;
  long step = 0;
};

void adam_step(Params& params, const Params& grads, AdamState& state,
               const TrainConfig& config);

Params train(const std::vector<Sample>& train_split,
             const std::vector<Sample>& val_split,
             const ModelConfig& model_config, const TrainConfig& train_config,
             const Stopwords& stopwords, const ModuleMask& mask,
             TrainHistory* history);

}  // namespace srr
