#pragma once

// Templated forward/backward passes for the resolver network. Production
// code instantiates T = float; the gradient-check oracle uses T = double.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "srr/features.hpp"
#include "srr/rng.hpp"
#include "srr/types.hpp"

namespace srr {

struct ModelConfig {
  int embed_dim = 64;
  int hidden_dim = 128;
  // Kept at 16k so the serialized table stays under the 5 MB budget.
  int vocab_buckets = 16384;
  int attention_dim = 64;
  double threshold = 0.7;
};

struct ModuleMask {
  bool cat = true;
  bool loc = true;
  bool text = true;

  bool allows(SupervisionTag tag) const {
    switch (tag) {
      case SupervisionTag::CategoryModule: return cat;
      case SupervisionTag::LocationModule: return loc;
      case SupervisionTag::TextModule: return text;
    }
    return false;
  }
};

struct ModuleWeights {
  double w_cat = 0, w_loc = 0, w_text = 0;
};

struct ModuleScores {
  double s_cat = 0, s_loc = 0, s_text = 0;
};

template <typename T>
struct Tensor {
  std::vector<int> shape;
  std::vector<T> v;

  int rows() const { return shape.empty() ? 0 : shape[0]; }
  int cols() const { return shape.size() < 2 ? 1 : shape[1]; }
  T& at(int i, int j) { return v[static_cast<std::size_t>(i) * cols() + j]; }
  const T& at(int i, int j) const {
    return v[static_cast<std::size_t>(i) * cols() + j];
  }
};

template <typename T>
Tensor<T> make_tensor(std::vector<int> shape) {
  Tensor<T> t;
  t.shape = std::move(shape);
  std::size_t n = 1;
  for (int d : t.shape) n *= static_cast<std::size_t>(d);
  t.v.assign(n, T(0));
  return t;
}

// A two-layer dense stack: y = W2 tanh(W1 x + b1) + b2.
template <typename T>
struct Dense2 {
  Tensor<T> W1, b1, W2, b2;

  void init(int in, int hidden, int out) {
    W1 = make_tensor<T>({hidden, in});
    b1 = make_tensor<T>({hidden});
    W2 = make_tensor<T>({out, hidden});
    b2 = make_tensor<T>({out});
  }
};

template <typename T>
struct ParamsT {
  ModelConfig config;
  Tensor<T> embed;                      // vocab_buckets x embed_dim
  Tensor<T> attn_cat_W, attn_cat_v;     // attention_dim x embed_dim; attention_dim
  Tensor<T> attn_loc_W, attn_loc_v;
  Dense2<T> weight_block;               // embed_dim -> hidden -> 3
  Dense2<T> cat_entity;                 // embed_dim -> hidden -> embed_dim
  Dense2<T> cat_request;
  Dense2<T> loc_feature;                // 30 -> hidden -> embed_dim
  Dense2<T> loc_request;
  Dense2<T> text_mlp;                   // 12 -> hidden -> 1

  void allocate(const ModelConfig& cfg) {
    config = cfg;
    embed = make_tensor<T>({cfg.vocab_buckets, cfg.embed_dim});
    attn_cat_W = make_tensor<T>({cfg.attention_dim, cfg.embed_dim});
    attn_cat_v = make_tensor<T>({cfg.attention_dim});
    attn_loc_W = make_tensor<T>({cfg.attention_dim, cfg.embed_dim});
    attn_loc_v = make_tensor<T>({cfg.attention_dim});
    weight_block.init(cfg.embed_dim, cfg.hidden_dim, 3);
    cat_entity.init(cfg.embed_dim, cfg.hidden_dim, cfg.embed_dim);
    cat_request.init(cfg.embed_dim, cfg.hidden_dim, cfg.embed_dim);
    loc_feature.init(kLocFeatureDim, cfg.hidden_dim, cfg.embed_dim);
    loc_request.init(cfg.embed_dim, cfg.hidden_dim, cfg.embed_dim);
    text_mlp.init(kTextFeatureDim, cfg.hidden_dim, 1);
  }

  template <typename F>
  void visit(F&& f) {
    f("embed", embed);
    f("attn_cat_W", attn_cat_W);
    f("attn_cat_v", attn_cat_v);
    f("attn_loc_W", attn_loc_W);
    f("attn_loc_v", attn_loc_v);
    auto dense = [&](const std::string& name, Dense2<T>& d) {
      f(name + ".W1", d.W1);
      f(name + ".b1", d.b1);
      f(name + ".W2", d.W2);
      f(name + ".b2", d.b2);
    };
    dense("weight_block", weight_block);
    dense("cat_entity", cat_entity);
    dense("cat_request", cat_request);
    dense("loc_feature", loc_feature);
    dense("loc_request", loc_request);
    dense("text_mlp", text_mlp);
  }

  template <typename F>
  void visit(F&& f) const {
    const_cast<ParamsT*>(this)->visit(
        [&](const std::string& name, Tensor<T>& t) {
          f(name, static_cast<const Tensor<T>&>(t));
        });
  }

  void init_random(std::uint64_t seed) {
    Rng rng(seed);
    visit([&](const std::string& name, Tensor<T>& t) {
      double bound;
      if (name == "embed") {
        bound = 0.5 / std::sqrt(static_cast<double>(config.embed_dim));
      } else {
        int fan_in = t.shape.size() == 2 ? t.shape[1] : t.shape[0];
        bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
      }
      for (auto& x : t.v) x = static_cast<T>(rng.real(-bound, bound));
    });
  }
};

inline int token_bucket(const std::string& token, int vocab_buckets) {
  return static_cast<int>(fnv1a(token) %
                          static_cast<std::uint64_t>(vocab_buckets));
}

// ---------------------------------------------------------------------------
// Forward caches

template <typename T>
struct Dense2Cache {
  std::vector<T> x, h, y;  // input, post-tanh hidden, output
};

template <typename T>
Dense2Cache<T> dense2_forward(const Dense2<T>& d, const std::vector<T>& x) {
  Dense2Cache<T> c;
  c.x = x;
  int hidden = d.W1.rows();
  int out = d.W2.rows();
  c.h.resize(hidden);
  for (int i = 0; i < hidden; ++i) {
    T z = d.b1.v[i];
    for (int j = 0; j < d.W1.cols(); ++j) z += d.W1.at(i, j) * x[j];
    c.h[i] = std::tanh(z);
  }
  c.y.resize(out);
  for (int i = 0; i < out; ++i) {
    T z = d.b2.v[i];
    for (int j = 0; j < hidden; ++j) z += d.W2.at(i, j) * c.h[j];
    c.y[i] = z;
  }
  return c;
}

// Accumulates parameter gradients; writes input gradient into dx if given.
template <typename T>
void dense2_backward(const Dense2<T>& d, const Dense2Cache<T>& c,
                     const std::vector<T>& dy, Dense2<T>& grad,
                     std::vector<T>* dx) {
  int hidden = d.W1.rows();
  int out = d.W2.rows();
  std::vector<T> dh(hidden, T(0));
  for (int i = 0; i < out; ++i) {
    grad.b2.v[i] += dy[i];
    for (int j = 0; j < hidden; ++j) {
      grad.W2.at(i, j) += dy[i] * c.h[j];
      dh[j] += d.W2.at(i, j) * dy[i];
    }
  }
  for (int i = 0; i < hidden; ++i) {
    T dz = dh[i] * (T(1) - c.h[i] * c.h[i]);
    grad.b1.v[i] += dz;
    for (int j = 0; j < d.W1.cols(); ++j) {
      grad.W1.at(i, j) += dz * c.x[j];
      if (dx) (*dx)[j] += d.W1.at(i, j) * dz;
    }
  }
}

template <typename T>
struct AttentionCache {
  std::vector<std::vector<T>> t;  // per token, tanh(W h)
  std::vector<T> logits;
  std::vector<T> alpha;
  std::vector<T> out;
};

template <typename T>
std::vector<T> softmax(const std::vector<T>& logits) {
  T mx = logits[0];
  for (T v : logits) mx = std::max(mx, v);
  std::vector<T> out(logits.size());
  T sum = T(0);
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - mx);
    sum += out[i];
  }
  for (auto& v : out) v /= sum;
  return out;
}

template <typename T>
AttentionCache<T> attention_forward(const Tensor<T>& W, const Tensor<T>& v,
                                    const std::vector<std::vector<T>>& embs) {
  AttentionCache<T> c;
  int A = W.rows();
  int D = W.cols();
  for (const auto& h : embs) {
    std::vector<T> t(A);
    T logit = T(0);
    for (int i = 0; i < A; ++i) {
      T z = T(0);
      for (int j = 0; j < D; ++j) z += W.at(i, j) * h[j];
      t[i] = std::tanh(z);
      logit += v.v[i] * t[i];
    }
    c.t.push_back(std::move(t));
    c.logits.push_back(logit);
  }
  c.alpha = softmax(c.logits);
  c.out.assign(D, T(0));
  for (std::size_t k = 0; k < embs.size(); ++k) {
    for (int j = 0; j < D; ++j) c.out[j] += c.alpha[k] * embs[k][j];
  }
  return c;
}

// dout -> gradients of W, v, and the token embeddings (dembs accumulated).
template <typename T>
void attention_backward(const Tensor<T>& W, const Tensor<T>& v,
                        const std::vector<std::vector<T>>& embs,
                        const AttentionCache<T>& c, const std::vector<T>& dout,
                        Tensor<T>& gW, Tensor<T>& gv,
                        std::vector<std::vector<T>>& dembs) {
  int A = W.rows();
  int D = W.cols();
  std::size_t n = embs.size();
  std::vector<T> dalpha(n, T(0));
  for (std::size_t k = 0; k < n; ++k) {
    for (int j = 0; j < D; ++j) {
      dalpha[k] += dout[j] * embs[k][j];
      dembs[k][j] += c.alpha[k] * dout[j];
    }
  }
  T dot = T(0);
  for (std::size_t k = 0; k < n; ++k) dot += c.alpha[k] * dalpha[k];
  for (std::size_t k = 0; k < n; ++k) {
    T dlogit = c.alpha[k] * (dalpha[k] - dot);
    for (int i = 0; i < A; ++i) {
      gv.v[i] += dlogit * c.t[k][i];
      T dt = dlogit * v.v[i];
      T dz = dt * (T(1) - c.t[k][i] * c.t[k][i]);
      for (int j = 0; j < D; ++j) {
        gW.at(i, j) += dz * embs[k][j];
        dembs[k][j] += W.at(i, j) * dz;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Request-side encoding, shared by every candidate of a sample.

template <typename T>
struct RequestEncoding {
  std::vector<int> buckets;
  std::vector<std::vector<T>> embs;
  AttentionCache<T> att_cat, att_loc;
  Dense2Cache<T> wc;         // weight block over mean-pooled embedding
  std::vector<T> weights;    // masked softmax over 3 logits
  Dense2Cache<T> r_cat;      // cat_request over att_cat.out
  Dense2Cache<T> r_loc;      // loc_request over att_loc.out
};

template <typename T>
RequestEncoding<T> encode_request(const std::vector<std::string>& tokens,
                                  const ParamsT<T>& p, const ModuleMask& mask) {
  if (tokens.empty()) throw EmptyRequestError();
  RequestEncoding<T> enc;
  int D = p.config.embed_dim;
  for (const auto& tok : tokens) {
    int b = token_bucket(tok, p.config.vocab_buckets);
    enc.buckets.push_back(b);
    std::vector<T> row(D);
    for (int j = 0; j < D; ++j) row[j] = p.embed.at(b, j);
    enc.embs.push_back(std::move(row));
  }
  enc.att_cat = attention_forward(p.attn_cat_W, p.attn_cat_v, enc.embs);
  enc.att_loc = attention_forward(p.attn_loc_W, p.attn_loc_v, enc.embs);

  std::vector<T> mean(D, T(0));
  for (const auto& h : enc.embs) {
    for (int j = 0; j < D; ++j) mean[j] += h[j];
  }
  for (int j = 0; j < D; ++j) mean[j] /= static_cast<T>(enc.embs.size());
  enc.wc = dense2_forward(p.weight_block, mean);

  // Masked softmax: excluded modules get weight exactly 0.
  const bool allowed[3] = {mask.cat, mask.loc, mask.text};
  T mx = -std::numeric_limits<T>::infinity();
  for (int i = 0; i < 3; ++i) {
    if (allowed[i]) mx = std::max(mx, enc.wc.y[i]);
  }
  enc.weights.assign(3, T(0));
  T sum = T(0);
  for (int i = 0; i < 3; ++i) {
    if (allowed[i]) {
      enc.weights[i] = std::exp(enc.wc.y[i] - mx);
      sum += enc.weights[i];
    }
  }
  for (auto& w : enc.weights) w /= sum;

  enc.r_cat = dense2_forward(p.cat_request, enc.att_cat.out);
  enc.r_loc = dense2_forward(p.loc_request, enc.att_loc.out);
  return enc;
}

template <typename T>
std::vector<T> category_embedding(EntityCategory cat, const ParamsT<T>& p) {
  const auto& words = category_word_tokens(cat);
  int D = p.config.embed_dim;
  std::vector<T> out(D, T(0));
  for (const auto& w : words) {
    int b = token_bucket(w, p.config.vocab_buckets);
    for (int j = 0; j < D; ++j) out[j] += p.embed.at(b, j);
  }
  for (int j = 0; j < D; ++j) out[j] /= static_cast<T>(words.size());
  return out;
}

template <typename T>
struct EntityScoreCache {
  std::vector<T> cat_emb;
  Dense2Cache<T> u;   // cat_entity over cat_emb
  Dense2Cache<T> lf;  // loc_feature over location features
  Dense2Cache<T> tx;  // text_mlp over text features
  T s_cat = 0, s_loc = 0, s_text = 0;
  T logit = 0;
  T p = 0;
};

template <typename T>
T dot(const std::vector<T>& a, const std::vector<T>& b) {
  T s = T(0);
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

template <typename T>
EntityScoreCache<T> score_entity_forward(const Sample& sample,
                                         const Entity& entity,
                                         const RequestEncoding<T>& enc,
                                         const ParamsT<T>& p,
                                         const Stopwords& stopwords,
                                         const ModuleMask& mask) {
  EntityScoreCache<T> c;
  const Screen* scr = sample.screen ? &*sample.screen : nullptr;

  if (mask.cat) {
    c.cat_emb = category_embedding(entity.category, p);
    c.u = dense2_forward(p.cat_entity, c.cat_emb);
    c.s_cat = dot(c.u.y, enc.r_cat.y);
  }
  if (mask.loc) {
    auto loc = location_features(entity, scr);
    std::vector<T> x(loc.begin(), loc.end());
    c.lf = dense2_forward(p.loc_feature, x);
    c.s_loc = dot(c.lf.y, enc.r_loc.y);
  }
  if (mask.text) {
    auto tf = text_match_features(sample.request, entity, scr, stopwords);
    std::vector<T> x(tf.begin(), tf.end());
    c.tx = dense2_forward(p.text_mlp, x);
    c.s_text = c.tx.y[0];
  }
  c.logit = enc.weights[0] * c.s_cat + enc.weights[1] * c.s_loc +
            enc.weights[2] * c.s_text;
  c.p = T(1) / (T(1) + std::exp(-c.logit));
  return c;
}

}  // namespace srr
