#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>

#include "srr/corpus.hpp"
#include "srr/heuristic.hpp"
#include "srr/model.hpp"

using namespace srr;

namespace {

Sample category_sample(const std::string& raw, std::vector<int> gold) {
  Sample s;
  s.request = {"r", raw, tokenize(raw)};
  s.candidates = dummy_pool();
  s.gold_ids = std::move(gold);
  s.subset = Subset::CategoryLevel;
  return s;
}

ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.embed_dim = 16;
  cfg.hidden_dim = 24;
  cfg.vocab_buckets = 512;
  cfg.attention_dim = 12;
  return cfg;
}

const Stopwords& stop() { return default_stopwords(); }

}  // namespace

TEST_CASE("zero parameters give uniform weights and 0.5 probabilities") {
  Params p;
  p.allocate(tiny_config());
  Sample s = category_sample("call this number", {0});
  Prediction pred = resolve(s, p, stop(), 0.7);
  CHECK(pred.weights.w_cat == doctest::Approx(1.0 / 3));
  CHECK(pred.weights.w_loc == doctest::Approx(1.0 / 3));
  CHECK(pred.weights.w_text == doctest::Approx(1.0 / 3));
  for (double prob : pred.probabilities) CHECK(prob == doctest::Approx(0.5));
  for (const auto& sc : pred.scores) {
    CHECK(sc.s_cat == 0.0);
    CHECK(sc.s_loc == 0.0);
    CHECK(sc.s_text == 0.0);
  }
  CHECK(pred.selected_ids.empty());
  CHECK(pred.argmax_id == 0);  // tie broken to lowest id
}

TEST_CASE("module weights form a simplex on random inputs") {
  Params p;
  p.allocate(tiny_config());
  p.init_random(3);
  Rng rng(17);
  std::vector<std::string> vocab = {"call", "open",  "the",   "second",
                                    "link", "email", "their", "support"};
  for (int it = 0; it < 1000; ++it) {
    std::vector<std::string> tokens;
    int n = 1 + static_cast<int>(rng.uniform(7));
    for (int i = 0; i < n; ++i) tokens.push_back(rng.pick(vocab));
    auto enc = encode_request<float>(tokens, p, ModuleMask{});
    double sum = 0;
    for (float w : enc.weights) {
      CHECK(std::isfinite(w));
      CHECK(w >= 0);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    double asum = 0;
    for (float a : enc.att_cat.alpha) asum += a;
    CHECK(asum == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("attention: singleton and identical-embedding cases") {
  Params p;
  p.allocate(tiny_config());
  p.init_random(9);
  auto one = encode_request<float>({"call"}, p, ModuleMask{});
  REQUIRE(one.att_cat.alpha.size() == 1);
  CHECK(one.att_cat.alpha[0] == doctest::Approx(1.0));
  for (int j = 0; j < 16; ++j) {
    CHECK(one.att_cat.out[j] == doctest::Approx(one.embs[0][j]));
  }

  auto same = encode_request<float>({"call", "call", "call"}, p, ModuleMask{});
  for (float a : same.att_cat.alpha) CHECK(a == doctest::Approx(1.0 / 3));
  CHECK(same.embs[0] == same.embs[1]);
}

TEST_CASE("category score is shared within a category") {
  Params p;
  p.allocate(tiny_config());
  p.init_random(12);
  Screen scr;
  scr.id = "s";
  scr.width = 800;
  scr.height = 800;
  scr.ocr_texts = {{0, "555-0101", {100, 100, 100, 20}},
                   {1, "555-0102", {100, 400, 100, 20}}};
  scr.entities = {
      {0, 0, "555-0101", {100, 100, 100, 20}, EntityCategory::PhoneNumber},
      {1, 1, "555-0102", {100, 400, 100, 20}, EntityCategory::PhoneNumber}};
  Sample s;
  s.request = {"r", "call the top number", tokenize("call the top number")};
  s.screen = scr;
  s.candidates = scr.entities;
  s.gold_ids = {0};
  s.subset = Subset::Descriptive;
  Prediction pred = resolve(s, p, stop(), 0.7);
  CHECK(pred.scores[0].s_cat == doctest::Approx(pred.scores[1].s_cat));
  CHECK(pred.scores[0].s_loc != pred.scores[1].s_loc);
}

TEST_CASE("argmax is invariant under candidate permutation") {
  Params p;
  p.allocate(tiny_config());
  p.init_random(4);
  Sample s = category_sample("open that link for me", {2});
  Prediction a = resolve(s, p, stop(), 0.7);
  std::reverse(s.candidates.begin(), s.candidates.end());
  Prediction b = resolve(s, p, stop(), 0.7);
  CHECK(a.argmax_id == b.argmax_id);
  for (std::size_t i = 0; i < s.candidates.size(); ++i) {
    CHECK(a.probabilities[i] ==
          doctest::Approx(b.probabilities[s.candidates.size() - 1 - i]));
  }
}

TEST_CASE("module_skip") {
  ModuleWeights w{0.98, 0.01, 0.01};
  ModuleMask all = module_skip(w, 0.0);
  CHECK(all.cat);
  CHECK(all.loc);
  CHECK(all.text);
  ModuleMask only_cat = module_skip(w, 0.05);
  CHECK(only_cat.cat);
  CHECK(!only_cat.loc);
  CHECK(!only_cat.text);
}

TEST_CASE("masked softmax zeroes excluded modules") {
  Params p;
  p.allocate(tiny_config());
  p.init_random(8);
  ModuleMask mask;
  mask.loc = false;
  auto enc = encode_request<float>({"call", "support"}, p, mask);
  CHECK(enc.weights[1] == 0.0f);
  CHECK(enc.weights[0] + enc.weights[2] == doctest::Approx(1.0));
}

TEST_CASE("serialization round trip is bit exact") {
  Params p;
  p.allocate(tiny_config());
  p.init_random(33);
  auto bytes = serialize(p);
  Params q = deserialize(bytes);
  CHECK(serialize(q) == bytes);

  Rng rng(55);
  GeneratorConfig gcfg;
  for (int i = 0; i < 20; ++i) {
    auto gs = generate_screen_full(rng, gcfg, kAllCategories[i % 5], 3);
    auto sample = generate_descriptive_sample(rng, gs, RefType::Label, gcfg, "r");
    Prediction a = resolve(sample.sample, p, stop(), 0.7);
    Prediction b = resolve(sample.sample, q, stop(), 0.7);
    for (std::size_t k = 0; k < a.probabilities.size(); ++k) {
      CHECK(a.probabilities[k] == b.probabilities[k]);  // bitwise
    }
  }
}

TEST_CASE("serialization error kinds") {
  Params p;
  p.allocate(tiny_config());
  auto bytes = serialize(p);

  auto bad_magic = bytes;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(deserialize(bad_magic), BadMagicError);

  auto bad_version = bytes;
  bad_version[4] = 99;
  CHECK_THROWS_AS(deserialize(bad_version), VersionMismatchError);

  auto truncated = bytes;
  truncated.resize(truncated.size() / 2);
  CHECK_THROWS_AS(deserialize(truncated), ShapeMismatchError);

  auto trailing = bytes;
  trailing.push_back(0);
  CHECK_THROWS_AS(deserialize(trailing), ShapeMismatchError);
}

TEST_CASE("default config model file is under 5 MB") {
  Params p;
  p.allocate(ModelConfig{});
  auto bytes = serialize(p);
  CHECK(bytes.size() < 5u * 1024 * 1024);
}

TEST_CASE("resolve throws on empty candidates") {
  Params p;
  p.allocate(tiny_config());
  Sample s;
  s.request = {"r", "call this", tokenize("call this")};
  CHECK_THROWS_AS(resolve(s, p, stop(), 0.7), NoCandidatesError);
}
