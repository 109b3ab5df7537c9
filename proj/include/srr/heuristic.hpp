#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srr/features.hpp"
#include "srr/types.hpp"

namespace srr {

struct CategoryKeywords {
  std::vector<std::string> nouns;
  std::vector<std::string> verbs;
  std::vector<std::string> apps;
};

struct KeywordLexicon {
  std::map<EntityCategory, CategoryKeywords> keywords;
  // Priority order for tie-breaking multi-hit requests.
  std::vector<EntityCategory> priority{kAllCategories.begin(),
                                       kAllCategories.end()};
};

// Built from the synthetic template vocabulary; deliberately does not
// cover every verb the generator can emit.
KeywordLexicon default_lexicon();
KeywordLexicon load_lexicon(const std::string& path);

struct PositionalSpec {
  enum class Kind { Ordinal, Top, Bottom, Middle, Last };
  Kind kind = Kind::Ordinal;
  int k = 1;  // 1-based, Ordinal only
};

// Rule 1: categories whose lexicon entries appear as request tokens,
// noun hits before verb hits before app hits, ties by lexicon priority.
std::vector<EntityCategory> match_category_keywords(const Request& request,
                                                    const KeywordLexicon& lexicon);

// Rule 2 parse: first..tenth, 1st..10th, top, bottom, middle, last;
// first occurrence wins.
std::optional<PositionalSpec> parse_positional(const Request& request);

// Rule 2 apply over reading order; nullopt when an ordinal is out of
// range (the resolver then falls through to rule 3).
std::optional<Entity> apply_positional(const PositionalSpec& spec,
                                       const std::vector<Entity>& candidates);

// Rule 3: best word-overlap non-candidate text, then the candidate
// nearest to it. Falls back to scoring the candidate texts themselves
// when no other text overlaps.
std::optional<Entity> label_match(const Request& request, const Screen& screen,
                                  const std::vector<Entity>& candidates,
                                  const Stopwords& stopwords);

class NoCandidatesError : public std::runtime_error {
 public:
  NoCandidatesError() : std::runtime_error("sample has no candidates") {}
};

// Full rule cascade; scores aligned with sample.candidates.
std::vector<double> resolve_heuristic(const Sample& sample,
                                      const KeywordLexicon& lexicon,
                                      const Stopwords& stopwords);

// Evaluation-only reference resolvers (Table-2-style oracles).
std::vector<double> category_oracle(const Sample& sample);

class UnsupportedSampleError : public std::runtime_error {
 public:
  UnsupportedSampleError()
      : std::runtime_error("sample lacks generation metadata") {}
};

std::vector<double> no_text_oracle(const Sample& sample);

}  // namespace srr
