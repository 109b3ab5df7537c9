#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "srr/rng.hpp"
#include "srr/types.hpp"

namespace srr {

class LayoutOverflowError : public std::runtime_error {
 public:
  LayoutOverflowError() : std::runtime_error("layout too small for entities") {}
};

class ExhaustedTemplatesError : public std::runtime_error {
 public:
  ExhaustedTemplatesError()
      : std::runtime_error("template bank too small for unique requests") {}
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct LayoutSpec {
  int screen_width = 800;
  int screen_height = 1600;
  int rows = 8;  // bottom row reserved for banner texts
  int cols = 2;
};

// Reference-type mix for descriptive requests.
struct RefMix {
  double label = 0.40;
  double full_text = 0.20;
  double ordinal = 0.30;
  double partial_value = 0.10;
};

struct CategoryAction {
  std::string phrase;
  std::vector<EntityCategory> categories;
};

// Template and vocabulary banks shared by the generator and, via the
// lexicon, the heuristic baseline.
struct TemplateBanks {
  // Category-level composition: prefix + action + reference + tail.
  std::map<EntityCategory, std::vector<std::string>> single_actions;
  // Phrases without lexicon keywords; category comes from the collection
  // sheet, not the words.
  std::map<EntityCategory, std::vector<std::string>> oblique_actions;
  std::vector<CategoryAction> multilabel_actions;
  std::map<EntityCategory, std::vector<std::string>> specific_refs;
  std::vector<std::string> generic_refs;
  std::vector<std::string> prefixes;
  std::vector<std::string> tails;

  // Descriptive shells.
  std::map<EntityCategory, std::vector<std::string>> desc_verbs;
  std::map<EntityCategory, std::vector<std::string>> desc_nouns;

  // Screen vocabulary.
  std::map<EntityCategory, std::vector<std::string>> label_words;
  std::vector<std::string> label_suffixes;
  std::vector<std::string> distractors;

  // Value grammars.
  std::vector<std::string> email_names;
  std::vector<std::string> domains;
  std::vector<std::string> tlds;
  std::vector<std::string> url_paths;
  std::vector<std::string> streets;
  std::vector<std::string> street_suffixes;
  std::vector<std::string> weekdays;
  std::vector<std::string> months;
};

TemplateBanks default_template_banks();

struct GeneratorConfig {
  std::uint64_t seed = 2024;
  int n_category_samples = 4600;
  int n_descriptive_screens = 600;
  int requests_per_screen = 3;
  double multilabel_fraction = 0.22;
  int supervision_count = 500;  // per module
  // Fraction of screens that carry a far-away banner repeating the
  // target's label word.
  double conflict_fraction = 0.35;
  RefMix ref_mix;
  LayoutSpec layout;
  TemplateBanks banks = default_template_banks();
};

GeneratorConfig load_generator_config(const std::string& path);

// A generated entity value plus the word a partial-value reference uses.
struct GeneratedValue {
  std::string text;
  std::string partial_word;
};

// Screen plus the generation metadata needed to phrase requests.
struct GeneratedScreen {
  Screen screen;
  std::map<int, std::vector<std::string>> entity_labels;  // id -> label words
  EntityCategory target_category = EntityCategory::PhoneNumber;
  int target_entity_id = -1;
  int conflict_entity_id = -1;  // == target when the banner is planted
  std::map<int, std::string> partial_words;  // id -> distinguishing word
};

GeneratedScreen generate_screen_full(Rng& rng, const GeneratorConfig& config,
                                     EntityCategory target_category,
                                     int n_same_category);

Screen generate_screen(Rng& rng, const GeneratorConfig& config,
                       EntityCategory target_category, int n_same_category);

struct GeneratedSample {
  Sample sample;
  int ref_tokens = 0;
};

GeneratedSample generate_descriptive_sample(Rng& rng,
                                            const GeneratedScreen& screen,
                                            RefType ref_type,
                                            const GeneratorConfig& config,
                                            const std::string& request_id);

GeneratedSample generate_category_sample(Rng& rng,
                                         const GeneratorConfig& config,
                                         const std::string& request_id);

struct SubsetStats {
  int total_requests = 0;
  int unique_requests = 0;
  int multilabel_count = 0;
  int screen_count = 0;
  double tokens_per_request = 0.0;
  double tokens_per_reference = 0.0;
};

struct CorpusStats {
  SubsetStats category_level;
  SubsetStats descriptive;
  std::string corpus_hash;
};

nlohmann::json to_json(const SubsetStats& s);
nlohmann::json to_json(const CorpusStats& s);

struct Corpus {
  std::vector<Sample> train;
  std::vector<Sample> val;
  std::vector<Sample> test;
  CorpusStats stats;
};

Corpus generate_corpus(const GeneratorConfig& config);

void write_corpus(const Corpus& corpus, const std::string& dir);
Corpus load_corpus(const std::string& dir);  // stats left default

// Canonical dummy pool for category-level samples, ids 0..4 in category
// order.
std::vector<Entity> dummy_pool();

}  // namespace srr
