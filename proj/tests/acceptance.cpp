// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
// the binary exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "srr/corpus.hpp"
#include "srr/eval.hpp"
#include "srr/features.hpp"
#include "srr/heuristic.hpp"
#include "srr/json_io.hpp"
#include "srr/model.hpp"
#include "srr/train.hpp"

using namespace srr;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail = "") {
  std::printf("criterion %2d (%s): %s%s%s\n", criterion, name.c_str(),
              ok ? "PASS" : "FAIL", detail.empty() ? "" : " — ",
              detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

double now_s() {
  using clock = std::chrono::steady_clock;
  static auto start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

template <typename T>
ParamsT<T> convert_params(const Params& p) {
  ParamsT<T> out;
  out.allocate(p.config);
  std::vector<const Tensor<float>*> src;
  p.visit([&](const std::string&, const Tensor<float>& t) { src.push_back(&t); });
  std::size_t idx = 0;
  out.visit([&](const std::string&, Tensor<T>& t) {
    for (std::size_t i = 0; i < t.v.size(); ++i) {
      t.v[i] = static_cast<T>(src[idx]->v[i]);
    }
    ++idx;
  });
  return out;
}

ModelConfig tiny_config() {
  ModelConfig cfg;
  cfg.embed_dim = 8;
  cfg.hidden_dim = 10;
  cfg.vocab_buckets = 256;
  cfg.attention_dim = 6;
  return cfg;
}

std::vector<Sample> mixed_samples(std::uint64_t seed, int n) {
  Rng rng(seed);
  GeneratorConfig gcfg;
  std::vector<Sample> out;
  while (static_cast<int>(out.size()) < n) {
    if (rng.chance(0.5)) {
      out.push_back(
          generate_category_sample(rng, gcfg, "c" + std::to_string(out.size()))
              .sample);
    } else {
      EntityCategory cat = kAllCategories[rng.uniform(kNumCategories)];
      auto gs = generate_screen_full(rng, gcfg, cat,
                                     2 + static_cast<int>(rng.uniform(2)));
      double u = rng.real();
      const RefMix& mix = gcfg.ref_mix;
      RefType rt = u < mix.label                  ? RefType::Label
                   : u < mix.label + mix.full_text ? RefType::FullText
                   : u < mix.label + mix.full_text + mix.ordinal
                       ? RefType::Ordinal
                       : RefType::PartialValue;
      out.push_back(generate_descriptive_sample(rng, gs, rt, gcfg,
                                                "d" + std::to_string(out.size()))
                        .sample);
    }
  }
  return out;
}

// --- criterion 1: gradients vs central finite differences ------------------

bool check_gradients(std::string* detail) {
  double worst = 0;
  Rng rng(501);
  for (int b = 0; b < 10; ++b) {
    Params pf;
    pf.allocate(tiny_config());
    pf.init_random(1000 + b);
    ParamsT<double> p = convert_params<double>(pf);

    auto samples = mixed_samples(2000 + b, 5);
    // Give the aux term coverage: tag a few samples.
    samples[0].supervision_tag = SupervisionTag::CategoryModule;
    samples[1].supervision_tag = SupervisionTag::LocationModule;
    samples[2].supervision_tag = SupervisionTag::TextModule;
    Rng pair_rng(3000 + b);
    std::vector<BatchItem> batch;
    for (const auto& s : samples) batch.push_back({&s, make_pairs(s, pair_rng)});

    ParamsT<double> grads;
    grads.allocate(p.config);
    batch_loss<double>(batch, p, 0.5, default_stopwords(), ModuleMask{}, &grads);

    std::vector<Tensor<double>*> pt, gt;
    p.visit([&](const std::string&, Tensor<double>& t) { pt.push_back(&t); });
    grads.visit([&](const std::string&, Tensor<double>& t) { gt.push_back(&t); });

    const double eps = 1e-4;
    for (int probe = 0; probe < 200; ++probe) {
      std::size_t ti = rng.uniform(pt.size());
      std::size_t ci = rng.uniform(pt[ti]->v.size());
      double saved = pt[ti]->v[ci];
      pt[ti]->v[ci] = saved + eps;
      double up = batch_loss<double>(batch, p, 0.5, default_stopwords(),
                                     ModuleMask{}, nullptr);
      pt[ti]->v[ci] = saved - eps;
      double dn = batch_loss<double>(batch, p, 0.5, default_stopwords(),
                                     ModuleMask{}, nullptr);
      pt[ti]->v[ci] = saved;
      double fd = (up - dn) / (2 * eps);
      double ga = gt[ti]->v[ci];
      double rel =
          std::abs(ga - fd) / std::max({std::abs(ga), std::abs(fd), 1e-6});
      worst = std::max(worst, rel);
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "max rel err %.2e", worst);
  *detail = buf;
  return worst < 1e-4;
}

// --- criterion 2: module-weight simplex ------------------------------------

bool check_simplex(std::string* detail) {
  Params p;
  p.allocate(ModelConfig{});
  p.init_random(7);
  Rng rng(71);
  std::vector<std::string> vocab = {
      "call",  "open", "the",   "second", "link",   "email", "their",
      "support", "number", "navigate", "to", "на", "1234", "x"};
  double worst = 0;
  for (int it = 0; it < 10000; ++it) {
    std::vector<std::string> tokens;
    int n = 1 + static_cast<int>(rng.uniform(9));
    for (int i = 0; i < n; ++i) tokens.push_back(rng.pick(vocab));
    auto enc = encode_request<float>(tokens, p, ModuleMask{});
    double sum = 0;
    for (float w : enc.weights) {
      if (!std::isfinite(w)) return false;
      sum += w;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "worst |sum-1| %.2e over 10000", worst);
  *detail = buf;
  return worst < 1e-6;
}

// --- criterion 3: heuristic cascade vs brute-force re-implementation -------

// Everything below is written from the rule definitions, not from the
// production code: rule 1 keyword filter, rule 2 positional, rule 3 label
// proximity, rule 4 uniform fallback.
namespace brute {

bool word_in(const std::vector<std::string>& toks, const std::string& w) {
  for (const auto& t : toks) {
    if (t == w) return true;
  }
  return false;
}

std::vector<EntityCategory> rule1(const Request& req,
                                  const KeywordLexicon& lex) {
  struct Hit {
    int kind;
    int prio;
    EntityCategory cat;
  };
  std::vector<Hit> hits;
  for (const auto& [cat, kw] : lex.keywords) {
    int kind = -1;
    bool noun = false, verb = false, app = false;
    for (const auto& w : kw.nouns) noun = noun || word_in(req.tokens, w);
    for (const auto& w : kw.verbs) verb = verb || word_in(req.tokens, w);
    for (const auto& w : kw.apps) app = app || word_in(req.tokens, w);
    if (noun) kind = 0;
    else if (verb) kind = 1;
    else if (app) kind = 2;
    if (kind < 0) continue;
    int prio = static_cast<int>(lex.priority.size());
    for (std::size_t i = 0; i < lex.priority.size(); ++i) {
      if (lex.priority[i] == cat) prio = static_cast<int>(i);
    }
    hits.push_back({kind, prio, cat});
  }
  std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.prio < b.prio;
  });
  std::vector<EntityCategory> out;
  for (const auto& h : hits) out.push_back(h.cat);
  return out;
}

std::vector<Entity> by_reading_order(std::vector<Entity> es) {
  std::sort(es.begin(), es.end(), [](const Entity& a, const Entity& b) {
    if (a.bbox.y != b.bbox.y) return a.bbox.y < b.bbox.y;
    if (a.bbox.x != b.bbox.x) return a.bbox.x < b.bbox.x;
    return a.id < b.id;
  });
  return es;
}

std::optional<Entity> rule2(const Request& req,
                            const std::vector<Entity>& cands) {
  static const char* words[] = {"first", "second", "third", "fourth", "fifth",
                                "sixth", "seventh", "eighth", "ninth", "tenth"};
  static const char* digits[] = {"1st", "2nd", "3rd", "4th", "5th",
                                 "6th", "7th", "8th", "9th", "10th"};
  auto sorted = by_reading_order(cands);
  int n = static_cast<int>(sorted.size());
  for (const auto& t : req.tokens) {
    for (int k = 0; k < 10; ++k) {
      if (t == words[k] || t == digits[k]) {
        if (k >= n) return std::nullopt;  // out of range: fall through
        return sorted[k];
      }
    }
    if (t == "top") return sorted.front();
    if (t == "bottom" || t == "last") return sorted.back();
    if (t == "middle") return sorted[n / 2];
  }
  return std::nullopt;
}

double overlap(const std::vector<std::string>& req_toks,
               const std::string& text, const Stopwords& stop) {
  std::vector<std::string> content;
  for (const auto& t : tokenize(text)) {
    if (stop.count(t)) continue;
    if (!word_in(content, t)) content.push_back(t);
  }
  if (content.empty()) return 0.0;
  int hit = 0;
  for (const auto& t : content) {
    if (word_in(req_toks, t)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(content.size());
}

double dist(const BBox& a, const BBox& b) {
  double ax = a.x + a.w / 2, ay = a.y + a.h / 2;
  double bx = b.x + b.w / 2, by = b.y + b.h / 2;
  return std::sqrt((ax - bx) * (ax - bx) + (ay - by) * (ay - by));
}

std::optional<Entity> rule3(const Request& req, const Screen& scr,
                            const std::vector<Entity>& cands,
                            const Stopwords& stop) {
  std::set<int> cand_text;
  for (const auto& e : cands) cand_text.insert(e.ocr_text_id);
  const OcrText* best = nullptr;
  double best_ov = 0;
  int best_hits = 0;
  for (const auto& t : scr.ocr_texts) {
    if (cand_text.count(t.id)) continue;
    double ov = overlap(req.tokens, t.text, stop);
    if (ov <= 0) continue;
    int hits = 0;
    std::vector<std::string> content;
    for (const auto& tok : tokenize(t.text)) {
      if (stop.count(tok) || word_in(content, tok)) continue;
      content.push_back(tok);
      if (word_in(req.tokens, tok)) ++hits;
    }
    bool better = best == nullptr || ov > best_ov ||
                  (ov == best_ov && hits > best_hits) ||
                  (ov == best_ov && hits == best_hits && t.id < best->id);
    if (better) {
      best = &t;
      best_ov = ov;
      best_hits = hits;
    }
  }
  if (best != nullptr) {
    const Entity* nearest = nullptr;
    double nd = std::numeric_limits<double>::infinity();
    for (const auto& e : cands) {
      double d = dist(e.bbox, best->bbox);
      if (nearest == nullptr || d < nd || (d == nd && e.id < nearest->id)) {
        nearest = &e;
        nd = d;
      }
    }
    return *nearest;
  }
  const Entity* bc = nullptr;
  double bov = 0;
  for (const auto& e : cands) {
    double ov = overlap(req.tokens, e.text, stop);
    if (ov > 0 && (bc == nullptr || ov > bov || (ov == bov && e.id < bc->id))) {
      bc = &e;
      bov = ov;
    }
  }
  if (bc != nullptr) return *bc;
  return std::nullopt;
}

int argmax_id(const Sample& s, const KeywordLexicon& lex,
              const Stopwords& stop) {
  auto cats = rule1(s.request, lex);
  std::vector<Entity> filtered;
  for (const auto& e : s.candidates) {
    for (auto c : cats) {
      if (e.category == c) {
        filtered.push_back(e);
        break;
      }
    }
  }
  if (filtered.empty()) filtered = s.candidates;
  if (auto e = rule2(s.request, filtered)) return e->id;
  if (s.screen) {
    if (auto e = rule3(s.request, *s.screen, filtered, stop)) return e->id;
  }
  // Rule 4: uniform over the filtered set; argmax ties go to lowest id.
  int best = filtered.front().id;
  for (const auto& e : filtered) best = std::min(best, e.id);
  return best;
}

}  // namespace brute

bool check_heuristic_equivalence(std::string* detail) {
  auto samples = mixed_samples(910, 1000);
  const KeywordLexicon& lex = default_lexicon();
  const Stopwords& stop = default_stopwords();
  int agree = 0;
  for (const auto& s : samples) {
    auto scores = resolve_heuristic(s, lex, stop);
    int best = 0;
    for (int i = 1; i < static_cast<int>(scores.size()); ++i) {
      if (scores[i] > scores[best] ||
          (scores[i] == scores[best] &&
           s.candidates[i].id < s.candidates[best].id)) {
        best = i;
      }
    }
    if (s.candidates[best].id == brute::argmax_id(s, lex, stop)) ++agree;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%d/1000 argmax agreement", agree);
  *detail = buf;
  return agree == 1000;
}

// --- criteria 4/6: baseline ordering and multilabel threshold --------------

struct TrainedModel {
  Params params;
  TrainHistory history;
};

TrainedModel train_full(const Corpus& corpus, std::uint64_t seed,
                        const ModuleMask& mask = {}) {
  TrainConfig tcfg;
  tcfg.seed = seed;
  TrainedModel out;
  out.params = train(corpus.train, corpus.val, ModelConfig{}, tcfg,
                     default_stopwords(), mask, &out.history);
  return out;
}

bool check_baseline_ordering(const Corpus& corpus, const Params& model,
                             std::string* detail) {
  const Stopwords& stop = default_stopwords();
  auto h = evaluate(make_heuristic_resolver(default_lexicon(), stop),
                    corpus.test, 0.7);
  auto m = evaluate(make_srr_resolver(model, stop), corpus.test, 0.7);
  auto co = evaluate(make_category_oracle_resolver(), corpus.test, 0.7);
  auto nt = evaluate(make_no_text_oracle_resolver(), corpus.test, 0.7);

  bool a = m.category_level.top1_error < h.category_level.top1_error &&
           m.descriptive.top1_error < h.descriptive.top1_error;
  bool b = co.category_level.exact_match == 100.0 &&
           co.category_level.top1_error == 0.0 &&
           co.descriptive.exact_match == 0.0;
  bool c = nt.category_level.exact_match == 100.0 &&
           nt.descriptive.exact_match > 0.0 &&
           nt.descriptive.exact_match < 100.0 &&
           nt.descriptive.top1_error > m.descriptive.top1_error &&
           nt.descriptive.top1_error < co.descriptive.top1_error;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "top1 cat/desc: srr %.1f/%.1f heur %.1f/%.1f no-text -/%.1f "
                "cat-oracle -/%.1f",
                m.category_level.top1_error, m.descriptive.top1_error,
                h.category_level.top1_error, h.descriptive.top1_error,
                nt.descriptive.top1_error, co.descriptive.top1_error);
  *detail = buf;
  return a && b && c;
}

bool check_multilabel(const Corpus& corpus, const Params& model,
                      std::string* detail) {
  const Stopwords& stop = default_stopwords();
  int total = 0, em = 0;
  for (const auto& s : corpus.test) {
    if (s.gold_ids.size() < 2) continue;
    ++total;
    Prediction pred = resolve(s, model, stop, 0.7);
    em += exact_match(pred.selected_ids, s.gold_ids);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "exact match %d/%d multilabel samples", em,
                total);
  *detail = buf;
  return total > 0 && 100.0 * em >= 80.0 * total;
}

// --- criterion 5: module ablation orderings --------------------------------

bool check_ablation(const Corpus& corpus, std::string* detail) {
  const std::vector<ModuleMask> masks = {
      {true, true, true},  {true, false, false}, {false, true, false},
      {false, false, true}, {true, true, false}, {true, false, true},
      {false, true, true}};
  int good_seeds = 0;
  std::string notes;
  for (std::uint64_t seed : {1, 2, 3}) {
    std::map<std::string, double> top1;
    for (const auto& mask : masks) {
      TrainedModel m = train_full(corpus, seed, mask);
      auto r = evaluate(make_srr_resolver(m.params, default_stopwords(), mask),
                        corpus.test, 0.7);
      top1[module_set_name(mask)] = r.descriptive.top1_error;
    }
    bool full_best = true;
    for (const auto& [name, v] : top1) {
      if (name != "cat+loc+text" && v < top1["cat+loc+text"]) full_best = false;
    }
    bool mono = top1["cat"] > top1["cat+loc"] && top1["cat"] > top1["cat+text"] &&
                top1["loc"] > top1["cat+loc"] && top1["loc"] > top1["loc+text"] &&
                top1["text"] > top1["cat+text"] && top1["text"] > top1["loc+text"];
    bool ok = full_best && mono;
    if (ok) ++good_seeds;
    char buf[224];
    std::snprintf(buf, sizeof buf,
                  "[seed %llu %s: full %.1f cat %.1f loc %.1f text %.1f "
                  "cat+loc %.1f cat+text %.1f loc+text %.1f]",
                  static_cast<unsigned long long>(seed), ok ? "ok" : "violated",
                  top1["cat+loc+text"], top1["cat"], top1["loc"], top1["text"],
                  top1["cat+loc"], top1["cat+text"], top1["loc+text"]);
    notes += (notes.empty() ? "" : " ") + std::string(buf);
  }
  *detail = std::to_string(good_seeds) + "/3 seeds ordered " + notes;
  return good_seeds >= 2;
}

// --- criterion 7: corpus statistics bands ----------------------------------

bool check_stats(const CorpusStats& stats, std::string* detail) {
  const SubsetStats& c = stats.category_level;
  const SubsetStats& d = stats.descriptive;
  bool ok = c.tokens_per_request >= 6.5 && c.tokens_per_request <= 9.0 &&
            d.tokens_per_request >= 6.5 && d.tokens_per_request <= 9.0 &&
            c.tokens_per_reference >= 1.5 && c.tokens_per_reference <= 2.6 &&
            d.tokens_per_reference >= 3.5 && d.tokens_per_reference <= 5.0 &&
            d.multilabel_count == 0;
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "tokens/request %.2f|%.2f tokens/reference %.2f|%.2f "
                "desc multilabel %d",
                c.tokens_per_request, d.tokens_per_request,
                c.tokens_per_reference, d.tokens_per_reference,
                d.multilabel_count);
  *detail = buf;
  return ok;
}

// --- criterion 8: determinism and serialization ----------------------------

bool check_determinism(const Corpus& corpus, std::string* detail) {
  GeneratorConfig gcfg;
  Corpus again = generate_corpus(gcfg);
  if (again.stats.corpus_hash != corpus.stats.corpus_hash) {
    *detail = "corpus hash differs between identical runs";
    return false;
  }
  auto dump = [](const std::vector<Sample>& v) {
    std::string out;
    for (const auto& s : v) out += to_json(s).dump() + "\n";
    return out;
  };
  if (dump(again.train) != dump(corpus.train) ||
      dump(again.val) != dump(corpus.val) ||
      dump(again.test) != dump(corpus.test)) {
    *detail = "corpus samples differ between identical runs";
    return false;
  }

  TrainConfig tcfg;
  tcfg.max_epochs = 2;
  tcfg.seed = 11;
  TrainHistory h1, h2;
  Params a = train(corpus.train, corpus.val, ModelConfig{}, tcfg,
                   default_stopwords(), {}, &h1);
  Params b = train(corpus.train, corpus.val, ModelConfig{}, tcfg,
                   default_stopwords(), {}, &h2);
  auto bytes = serialize(a);
  if (bytes != serialize(b)) {
    *detail = "model bytes differ between identical trainings";
    return false;
  }
  for (std::size_t i = 0; i < h1.epochs.size(); ++i) {
    if (h1.epochs[i].train_loss != h2.epochs[i].train_loss ||
        h1.epochs[i].val_top1_error != h2.epochs[i].val_top1_error) {
      *detail = "training trajectories differ between identical runs";
      return false;
    }
  }
  if (bytes.size() >= 5u * 1024 * 1024) {
    *detail = "model file >= 5 MB";
    return false;
  }
  Params c = deserialize(bytes);
  for (const auto& s : corpus.test) {
    Prediction pa = resolve(s, a, default_stopwords(), 0.7);
    Prediction pc = resolve(s, c, default_stopwords(), 0.7);
    if (pa.probabilities != pc.probabilities) {
      *detail = "round-trip probabilities not bit-identical";
      return false;
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof buf,
                "bit-identical corpus, training, round trip; model %.2f MB",
                static_cast<double>(bytes.size()) / (1024.0 * 1024.0));
  *detail = buf;
  return true;
}

// --- criterion 9: split hygiene --------------------------------------------

bool check_split_hygiene(const Corpus& corpus, std::string* detail) {
  std::map<std::string, int> seen;  // screen id -> split index
  int idx = 0;
  int screens = 0;
  for (const auto* split : {&corpus.train, &corpus.val, &corpus.test}) {
    for (const auto& s : *split) {
      if (!s.screen) continue;
      auto [it, inserted] = seen.emplace(s.screen->id, idx);
      if (inserted) ++screens;
      if (it->second != idx) {
        *detail = "screen " + s.screen->id + " appears in two splits";
        return false;
      }
    }
    ++idx;
  }
  *detail = std::to_string(screens) + " screens, each in exactly one split";
  return true;
}

// --- criterion 10: feature invariants --------------------------------------

bool check_feature_invariants(std::string* detail) {
  // Worked example: bbox (40, 360, 400, 30) on a 1000x1000 screen.
  auto f = bbox_features({40, 360, 400, 30}, 1000);
  const double want[5] = {0.04, 0.36, 0.44, 0.39, 0.012};
  for (int i = 0; i < 5; ++i) {
    if (std::abs(f[i] - want[i]) > 1e-6) {
      *detail = "worked example mismatch at component " + std::to_string(i);
      return false;
    }
  }

  // Scale invariance (power-of-two factor keeps the division exact).
  Rng rng(321);
  GeneratorConfig gcfg;
  for (int it = 0; it < 50; ++it) {
    EntityCategory cat = kAllCategories[it % kNumCategories];
    auto gs = generate_screen_full(rng, gcfg, cat, 3);
    Screen scaled = gs.screen;
    const double s = 4.0;
    scaled.width *= s;
    scaled.height *= s;
    for (auto& t : scaled.ocr_texts) {
      t.bbox = {t.bbox.x * s, t.bbox.y * s, t.bbox.w * s, t.bbox.h * s};
    }
    for (auto& e : scaled.entities) {
      e.bbox = {e.bbox.x * s, e.bbox.y * s, e.bbox.w * s, e.bbox.h * s};
    }
    for (std::size_t i = 0; i < gs.screen.entities.size(); ++i) {
      auto orig = location_features(gs.screen.entities[i], &gs.screen);
      auto big = location_features(scaled.entities[i], &scaled);
      if (orig != big) {
        *detail = "location features changed under uniform scaling";
        return false;
      }
    }
  }
  *detail = "worked example and 50-screen scale invariance hold";
  return true;
}

}  // namespace

int main() {
  std::string detail;

  double t0 = now_s();
  bool g = check_gradients(&detail);
  double t1 = now_s();
  report(1, "gradient correctness", g && t1 - t0 < 120.0,
         detail + (t1 - t0 >= 120.0 ? " [over 2 min budget]" : ""));

  report(2, "module weight simplex", check_simplex(&detail), detail);
  report(3, "heuristic equivalence", check_heuristic_equivalence(&detail),
         detail);

  GeneratorConfig gcfg;
  Corpus corpus = generate_corpus(gcfg);
  TrainedModel full = train_full(corpus, 1);

  report(4, "baseline ordering",
         check_baseline_ordering(corpus, full.params, &detail), detail);
  report(5, "module ablation ordering", check_ablation(corpus, &detail),
         detail);
  report(6, "multilabel threshold", check_multilabel(corpus, full.params, &detail),
         detail);
  report(7, "corpus statistics bands", check_stats(corpus.stats, &detail),
         detail);
  report(8, "determinism and serialization", check_determinism(corpus, &detail),
         detail);
  report(9, "split hygiene", check_split_hygiene(corpus, &detail), detail);
  report(10, "feature invariants", check_feature_invariants(&detail), detail);

  std::printf("%s (%d criteria failed, %.0f s)\n",
              g_failures == 0 ? "ALL PASS" : "FAILURES", g_failures, now_s());
  return g_failures == 0 ? 0 : 1;
}
