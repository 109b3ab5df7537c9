#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "srr/corpus.hpp"
#include "srr/detectors.hpp"
#include "srr/eval.hpp"
#include "srr/features.hpp"
#include "srr/heuristic.hpp"
#include "srr/json_io.hpp"
#include "srr/model.hpp"
#include "srr/train.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return nlohmann::json::parse(in);
}

srr::ModelConfig model_config_from_file(const std::string& path) {
  srr::ModelConfig cfg;
  if (path.empty()) return cfg;
  auto j = load_json_file(path);
  cfg.embed_dim = j.value("embed_dim", cfg.embed_dim);
  cfg.hidden_dim = j.value("hidden_dim", cfg.hidden_dim);
  cfg.vocab_buckets = j.value("vocab_buckets", cfg.vocab_buckets);
  cfg.attention_dim = j.value("attention_dim", cfg.attention_dim);
  cfg.threshold = j.value("threshold", cfg.threshold);
  if (cfg.embed_dim < 1 || cfg.hidden_dim < 1 || cfg.vocab_buckets < 1 ||
      cfg.attention_dim < 1 || cfg.threshold <= 0 || cfg.threshold >= 1) {
    throw std::invalid_argument("invalid model config");
  }
  return cfg;
}

srr::TrainConfig train_config_from_file(const std::string& path) {
  srr::TrainConfig cfg;
  if (path.empty()) return cfg;
  auto j = load_json_file(path);
  cfg.learning_rate = j.value("learning_rate", cfg.learning_rate);
  cfg.batch_size = j.value("batch_size", cfg.batch_size);
  cfg.max_epochs = j.value("max_epochs", cfg.max_epochs);
  cfg.patience = j.value("patience", cfg.patience);
  cfg.aux_loss_weight = j.value("aux_loss_weight", cfg.aux_loss_weight);
  cfg.seed = j.value("seed", cfg.seed);
  if (cfg.learning_rate <= 0 || cfg.batch_size < 1) {
    throw std::invalid_argument("invalid train config");
  }
  return cfg;
}

srr::ModuleMask parse_modules(const std::string& spec) {
  srr::ModuleMask m;
  m.cat = m.loc = m.text = false;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ',');) {
    if (part == "cat") m.cat = true;
    else if (part == "loc") m.loc = true;
    else if (part == "text") m.text = true;
    else throw std::invalid_argument("unknown module: " + part);
  }
  if (!m.cat && !m.loc && !m.text) {
    throw std::invalid_argument("module set must be non-empty");
  }
  return m;
}

std::vector<srr::Sample> load_and_validate(const std::string& path) {
  auto samples = srr::read_samples_file(path);
  for (const auto& s : samples) {
    auto issues = srr::validate_sample(s);
    if (!issues.empty()) {
      throw std::invalid_argument("sample " + s.request.id + ": " +
                                  issues.front().code + " " +
                                  issues.front().detail);
    }
  }
  return samples;
}

srr::TrainHistory run_training(const std::string& corpus_dir,
                               const srr::ModelConfig& mcfg,
                               const srr::TrainConfig& tcfg,
                               const srr::ModuleMask& mask,
                               srr::Params* out_params) {
  srr::Corpus corpus = srr::load_corpus(corpus_dir);
  srr::TrainHistory history;
  *out_params = srr::train(corpus.train, corpus.val, mcfg, tcfg,
                           srr::default_stopwords(), mask, &history);
  return history;
}

nlohmann::json history_to_json(const srr::TrainHistory& h) {
  nlohmann::json epochs = nlohmann::json::array();
  for (const auto& e : h.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"train_loss", e.train_loss},
                      {"val_top1_error", e.val_top1_error},
                      {"val_exact_match", e.val_exact_match}});
  }
  return {{"epochs", epochs}, {"selected_epoch", h.selected_epoch}};
}

srr::Resolver build_resolver(const std::string& name,
                             const std::string& model_path, double threshold) {
  if (name == "heuristic") {
    return srr::make_heuristic_resolver(srr::default_lexicon(),
                                        srr::default_stopwords());
  }
  if (name == "cat-oracle") return srr::make_category_oracle_resolver();
  if (name == "no-text-oracle") return srr::make_no_text_oracle_resolver();
  if (name == "srr") {
    if (model_path.empty()) {
      throw std::invalid_argument("--model is required for the srr resolver");
    }
    srr::Params params = srr::load_model(model_path);
    params.config.threshold = threshold;
    return srr::make_srr_resolver(params, srr::default_stopwords());
  }
  throw std::invalid_argument("unknown resolver: " + name);
}

int cmd_generate(const std::string& out_dir, const std::string& config_path,
                 std::uint64_t seed, bool seed_set) {
  srr::GeneratorConfig cfg;
  if (!config_path.empty()) cfg = srr::load_generator_config(config_path);
  if (seed_set) cfg.seed = seed;
  srr::Corpus corpus = srr::generate_corpus(cfg);
  srr::write_corpus(corpus, out_dir);
  std::cout << srr::to_json(corpus.stats).dump(2) << "\n";
  return kExitOk;
}

int cmd_detect(const std::string& in_path, const std::string& out_path,
               const std::string& config_path) {
  srr::DetectorConfig cfg = config_path.empty()
                                ? srr::default_detector_config()
                                : srr::load_detector_config(config_path);
  std::ifstream in(in_path);
  if (!in) throw IoError("cannot open " + in_path);
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write " + out_path);
  std::vector<srr::OcrText> texts;
  for (std::string line; std::getline(in, line);) {
    if (line.empty()) continue;
    texts.push_back(srr::ocr_text_from_json(nlohmann::json::parse(line)));
  }
  for (const auto& e : srr::detect_entities(texts, cfg)) {
    out << srr::to_json(e).dump() << "\n";
  }
  return kExitOk;
}

int cmd_features(const std::string& in_path, const std::string& out_path) {
  auto samples = load_and_validate(in_path);
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write " + out_path);
  const srr::Stopwords& stop = srr::default_stopwords();
  for (const auto& s : samples) {
    const srr::Screen* scr = s.screen ? &*s.screen : nullptr;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : s.candidates) {
      rows.push_back(
          {{"entity_id", e.id},
           {"location", srr::location_features(e, scr)},
           {"text_match", srr::text_match_features(s.request, e, scr, stop)}});
    }
    out << nlohmann::json{{"request_id", s.request.id}, {"candidates", rows}}
               .dump()
        << "\n";
  }
  return kExitOk;
}

int cmd_resolve(const std::string& resolver_name, const std::string& model_path,
                double threshold, const std::string& in_path,
                const std::string& out_path, bool explain) {
  auto samples = load_and_validate(in_path);
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write " + out_path);

  const srr::Stopwords& stop = srr::default_stopwords();
  std::optional<srr::Params> params;
  srr::Resolver resolver;
  if (resolver_name == "srr") {
    if (model_path.empty()) {
      throw std::invalid_argument("--model is required for the srr resolver");
    }
    params = srr::load_model(model_path);
  } else {
    resolver = build_resolver(resolver_name, model_path, threshold);
  }

  for (const auto& s : samples) {
    nlohmann::json rec{{"request_id", s.request.id}};
    try {
      std::vector<double> scores;
      if (params) {
        srr::Prediction pred = srr::resolve(s, *params, stop, threshold);
        scores = pred.probabilities;
        rec["argmax_id"] = pred.argmax_id;
        rec["selected_ids"] = pred.selected_ids;
        if (explain) {
          rec["module_weights"] = {{"cat", pred.weights.w_cat},
                                   {"loc", pred.weights.w_loc},
                                   {"text", pred.weights.w_text}};
          nlohmann::json per_entity = nlohmann::json::array();
          for (std::size_t i = 0; i < s.candidates.size(); ++i) {
            per_entity.push_back({{"entity_id", s.candidates[i].id},
                                  {"s_cat", pred.scores[i].s_cat},
                                  {"s_loc", pred.scores[i].s_loc},
                                  {"s_text", pred.scores[i].s_text}});
          }
          rec["module_scores"] = per_entity;
          nlohmann::json attn = nlohmann::json::array();
          for (std::size_t i = 0; i < s.request.tokens.size(); ++i) {
            attn.push_back({{"token", s.request.tokens[i]},
                            {"cat", pred.attn_cat[i]},
                            {"loc", pred.attn_loc[i]}});
          }
          rec["attention"] = attn;
        }
      } else {
        scores = resolver(s);
        std::vector<std::pair<int, double>> id_scores;
        std::vector<int> selected;
        for (std::size_t i = 0; i < s.candidates.size(); ++i) {
          id_scores.emplace_back(s.candidates[i].id, scores[i]);
          if (scores[i] > threshold) selected.push_back(s.candidates[i].id);
        }
        int best = id_scores[0].first;
        double bv = id_scores[0].second;
        for (const auto& [id, v] : id_scores) {
          if (v > bv || (v == bv && id < best)) {
            best = id;
            bv = v;
          }
        }
        rec["argmax_id"] = best;
        rec["selected_ids"] = selected;
      }
      nlohmann::json sc = nlohmann::json::array();
      for (std::size_t i = 0; i < s.candidates.size(); ++i) {
        sc.push_back({{"entity_id", s.candidates[i].id}, {"score", scores[i]}});
      }
      rec["scores"] = sc;
    } catch (const std::exception& e) {
      rec["error"] = e.what();
    }
    out << rec.dump() << "\n";
  }
  return kExitOk;
}

int cmd_train(const std::string& corpus_dir, const std::string& out_path,
              const std::string& history_path,
              const std::string& model_config_path,
              const std::string& train_config_path, std::uint64_t seed,
              bool seed_set) {
  srr::ModelConfig mcfg = model_config_from_file(model_config_path);
  srr::TrainConfig tcfg = train_config_from_file(train_config_path);
  if (seed_set) tcfg.seed = seed;
  srr::Params params;
  srr::TrainHistory history = run_training(corpus_dir, mcfg, tcfg, {}, &params);
  srr::save_model(params, out_path);
  if (!history_path.empty()) {
    std::ofstream out(history_path);
    if (!out) throw IoError("cannot write " + history_path);
    out << history_to_json(history).dump(2) << "\n";
  }
  for (const auto& e : history.epochs) {
    std::cout << "epoch " << e.epoch << " loss " << e.train_loss
              << " val_top1 " << e.val_top1_error << " val_em "
              << e.val_exact_match << "\n";
  }
  std::cout << "selected epoch " << history.selected_epoch << "\n";
  return kExitOk;
}

int cmd_eval(const std::string& resolvers, const std::string& model_path,
             const std::string& corpus_dir, const std::string& out_path,
             double threshold) {
  srr::Corpus corpus = srr::load_corpus(corpus_dir);
  std::vector<std::pair<std::string, srr::EvalResult>> rows;
  std::stringstream ss(resolvers);
  for (std::string name; std::getline(ss, name, ',');) {
    auto resolver = build_resolver(name, model_path, threshold);
    rows.emplace_back(name,
                      srr::evaluate(resolver, corpus.test, threshold));
  }
  std::cout << srr::render_table(rows);
  if (!out_path.empty()) {
    nlohmann::json j;
    for (const auto& [name, result] : rows) j[name] = srr::to_json(result);
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write " + out_path);
    out << j.dump(2) << "\n";
  }
  return kExitOk;
}

int cmd_ablate(const std::string& corpus_dir, const std::string& modules,
               const std::string& model_config_path,
               const std::string& train_config_path, const std::string& out_path,
               std::uint64_t seed, bool seed_set) {
  srr::ModelConfig mcfg = model_config_from_file(model_config_path);
  srr::TrainConfig tcfg = train_config_from_file(train_config_path);
  if (seed_set) tcfg.seed = seed;

  std::vector<srr::ModuleMask> masks;
  if (modules == "all") {
    for (int bits = 1; bits < 8; ++bits) {
      masks.push_back({(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0});
    }
  } else {
    masks.push_back(parse_modules(modules));
  }

  std::vector<srr::AblationRow> rows;
  for (const auto& mask : masks) {
    srr::Params params;
    run_training(corpus_dir, mcfg, tcfg, mask, &params);
    srr::Corpus corpus = srr::load_corpus(corpus_dir);
    auto resolver = srr::make_srr_resolver(params, srr::default_stopwords(), mask);
    rows.push_back(
        {mask, srr::evaluate(resolver, corpus.test, mcfg.threshold)});
    std::cerr << srr::module_set_name(mask) << " done\n";
  }
  std::string report = srr::report_ablation(rows);
  std::cout << report;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw IoError("cannot write " + out_path);
    out << report;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"screen reference resolver"};
  app.require_subcommand(1);

  std::string out_dir = "corpus", config_path, in_path, out_path;
  std::string model_path, history_path, model_config_path, train_config_path;
  std::string resolver = "srr", resolvers = "heuristic,srr";
  std::string modules = "all";
  double threshold = 0.7;
  bool explain = false;
  std::uint64_t seed = 0;

  auto* gen = app.add_subcommand("generate", "generate a synthetic corpus");
  gen->add_option("--out,--out-dir", out_dir, "output directory")->required();
  gen->add_option("--config", config_path, "generator config json");
  auto* gen_seed = gen->add_option("--seed", seed, "generator seed");

  auto* det = app.add_subcommand("detect", "run data detectors over ocr texts");
  det->add_option("--in", in_path, "ndjson of ocr texts")->required();
  det->add_option("--out", out_path, "ndjson of entities")->required();
  det->add_option("--config", config_path, "detector config json");

  auto* feat = app.add_subcommand("features", "extract features per candidate");
  feat->add_option("--in", in_path, "ndjson of samples")->required();
  feat->add_option("--out", out_path, "ndjson of feature rows")->required();

  auto* tr = app.add_subcommand("train", "train the resolver network");
  tr->add_option("--corpus", out_dir, "corpus directory")->required();
  tr->add_option("--out", out_path, "model file")->required();
  tr->add_option("--history", history_path, "history json");
  tr->add_option("--model-config", model_config_path, "model config json");
  tr->add_option("--train-config", train_config_path, "train config json");
  auto* tr_seed = tr->add_option("--seed", seed, "training seed");

  auto* res = app.add_subcommand("resolve", "score samples with a resolver");
  res->add_option("--resolver", resolver,
                  "srr | heuristic | cat-oracle | no-text-oracle");
  res->add_option("--model", model_path, "model file (srr resolver)");
  res->add_option("--threshold", threshold, "selection threshold");
  res->add_option("--in", in_path, "ndjson of samples")->required();
  res->add_option("--out", out_path, "ndjson of predictions")->required();
  res->add_flag("--explain", explain,
                "include module weights, scores, and attention");

  auto* ev = app.add_subcommand("eval", "evaluate resolvers on the test split");
  ev->add_option("--resolvers", resolvers, "comma-separated resolver names");
  ev->add_option("--model", model_path, "model file (srr resolver)");
  ev->add_option("--corpus", out_dir, "corpus directory")->required();
  ev->add_option("--out", out_path, "report json");
  ev->add_option("--threshold", threshold, "selection threshold");

  auto* ab = app.add_subcommand("ablate", "train and evaluate module subsets");
  ab->add_option("--corpus", out_dir, "corpus directory")->required();
  ab->add_option("--modules", modules, "all or comma list, e.g. cat,loc");
  ab->add_option("--model-config", model_config_path, "model config json");
  ab->add_option("--train-config", train_config_path, "train config json");
  ab->add_option("--out", out_path, "report file");
  auto* ab_seed = ab->add_option("--seed", seed, "training seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      return cmd_generate(out_dir, config_path, seed, gen_seed->count() > 0);
    }
    if (det->parsed()) return cmd_detect(in_path, out_path, config_path);
    if (feat->parsed()) return cmd_features(in_path, out_path);
    if (tr->parsed()) {
      return cmd_train(out_dir, out_path, history_path, model_config_path,
                       train_config_path, seed, tr_seed->count() > 0);
    }
    if (res->parsed()) {
      return cmd_resolve(resolver, model_path, threshold, in_path, out_path,
                         explain);
    }
    if (ev->parsed()) {
      return cmd_eval(resolvers, model_path, out_dir, out_path, threshold);
    }
    if (ab->parsed()) {
      return cmd_ablate(out_dir, modules, model_config_path, train_config_path,
                        out_path, seed, ab_seed->count() > 0);
    }
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::runtime_error& e) {
    // Library file errors read "cannot open/read/write ...".
    if (std::string_view(e.what()).substr(0, 7) == "cannot ") {
      std::cerr << "io error: " << e.what() << "\n";
      return kExitIo;
    }
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitOk;
}
