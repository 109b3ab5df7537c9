#include "srr/model.hpp"

#include "srr/heuristic.hpp"

#include <cstring>
#include <fstream>

namespace srr {

ModuleMask module_skip(const ModuleWeights& weights, double eps,
                       const ModuleMask& mask) {
  ModuleMask out;
  out.cat = mask.cat && weights.w_cat >= eps;
  out.loc = mask.loc && weights.w_loc >= eps;
  out.text = mask.text && weights.w_text >= eps;
  return out;
}

Prediction resolve(const Sample& sample, const Params& params,
                   const Stopwords& stopwords, double threshold,
                   const ModuleMask& mask, double skip_eps) {
  if (sample.candidates.empty()) throw NoCandidatesError();
  auto enc = encode_request<float>(sample.request.tokens, params, mask);

  Prediction pred;
  pred.weights = {enc.weights[0], enc.weights[1], enc.weights[2]};
  for (float a : enc.att_cat.alpha) pred.attn_cat.push_back(a);
  for (float a : enc.att_loc.alpha) pred.attn_loc.push_back(a);

  ModuleMask run = module_skip(pred.weights, skip_eps, mask);
  for (const Entity& e : sample.candidates) {
    auto c = score_entity_forward(sample, e, enc, params, stopwords, run);
    pred.probabilities.push_back(c.p);
    pred.scores.push_back({c.s_cat, c.s_loc, c.s_text});
    if (c.p > threshold) pred.selected_ids.push_back(e.id);
  }
  int best = 0;
  for (int i = 1; i < static_cast<int>(sample.candidates.size()); ++i) {
    double p = pred.probabilities[i];
    double bp = pred.probabilities[best];
    if (p > bp || (p == bp && sample.candidates[i].id < sample.candidates[best].id)) {
      best = i;
    }
  }
  pred.argmax_id = sample.candidates[best].id;
  return pred;
}

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back((v >> (8 * i)) & 0xff);
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, 4);
  put_u32(out, bits);
}

struct Reader {
  const std::vector<std::uint8_t>& b;
  std::size_t pos = 0;

  std::uint32_t u32(const char* what) {
    if (pos + 4 > b.size()) throw ShapeMismatchError(std::string("truncated reading ") + what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[pos++]) << (8 * i);
    return v;
  }

  float f32(const char* what) {
    std::uint32_t bits = u32(what);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
};

constexpr char kMagic[4] = {'S', 'R', 'R', 'M'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

std::vector<std::uint8_t> serialize(const Params& params) {
  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(params.config.embed_dim));
  put_u32(out, static_cast<std::uint32_t>(params.config.hidden_dim));
  put_u32(out, static_cast<std::uint32_t>(params.config.vocab_buckets));
  put_u32(out, static_cast<std::uint32_t>(params.config.attention_dim));
  put_f32(out, static_cast<float>(params.config.threshold));
  params.visit(
      [&](const std::string&, const Tensor<float>& t) {
        put_u32(out, static_cast<std::uint32_t>(t.shape.size()));
        for (int d : t.shape) put_u32(out, static_cast<std::uint32_t>(d));
        for (float v : t.v) put_f32(out, v);
      });
  return out;
}

Params deserialize(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw BadMagicError();
  }
  Reader r{bytes, 4};
  std::uint32_t version = r.u32("version");
  if (version != kVersion) throw VersionMismatchError(static_cast<int>(version));

  ModelConfig cfg;
  cfg.embed_dim = static_cast<int>(r.u32("embed_dim"));
  cfg.hidden_dim = static_cast<int>(r.u32("hidden_dim"));
  cfg.vocab_buckets = static_cast<int>(r.u32("vocab_buckets"));
  cfg.attention_dim = static_cast<int>(r.u32("attention_dim"));
  cfg.threshold = r.f32("threshold");
  if (cfg.embed_dim < 1 || cfg.hidden_dim < 1 || cfg.vocab_buckets < 1 ||
      cfg.attention_dim < 1 || cfg.threshold <= 0 || cfg.threshold >= 1) {
    throw ShapeMismatchError("invalid config block");
  }

  Params params;
  params.allocate(cfg);
  params.visit([&](const std::string& name, Tensor<float>& t) {
    std::uint32_t ndims = r.u32(name.c_str());
    if (ndims != t.shape.size()) throw ShapeMismatchError(name);
    for (int d : t.shape) {
      if (r.u32(name.c_str()) != static_cast<std::uint32_t>(d)) {
        throw ShapeMismatchError(name);
      }
    }
    for (auto& v : t.v) v = r.f32(name.c_str());
  });
  if (r.pos != bytes.size()) throw ShapeMismatchError("trailing bytes");
  return params;
}

void save_model(const Params& params, const std::string& path) {
  auto bytes = serialize(params);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write model file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
}

Params load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read model file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return deserialize(bytes);
}

}  // namespace srr
