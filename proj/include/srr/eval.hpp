#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

#include "srr/heuristic.hpp"
#include "srr/model.hpp"
#include "srr/types.hpp"

namespace srr {

int exact_match(std::vector<int> selected_ids, std::vector<int> gold_ids);

// Scores as (entity id, score); argmax ties break to the lowest id.
int top1_error(const std::vector<std::pair<int, double>>& scores,
               const std::vector<int>& gold_ids);

// A resolver returns one score per candidate, parallel to
// sample.candidates. Selection applies the shared threshold.
using Resolver = std::function<std::vector<double>(const Sample&)>;

Resolver make_heuristic_resolver(const KeywordLexicon& lexicon,
                                 const Stopwords& stopwords);
Resolver make_category_oracle_resolver();
Resolver make_no_text_oracle_resolver();
Resolver make_srr_resolver(const Params& params, const Stopwords& stopwords,
                           const ModuleMask& mask = {}, double skip_eps = 0.0);

struct SubsetMetrics {
  int count = 0;
  int failures = 0;  // resolver exceptions, scored as both metrics failing
  double top1_error = 0;           // percent
  double exact_match = 0;          // percent
  double empty_selection_rate = 0; // percent of samples selecting nothing
  double wall_ms_per_sample = 0;
};

struct EvalResult {
  SubsetMetrics category_level;
  SubsetMetrics descriptive;
};

EvalResult evaluate(const Resolver& resolver,
                    const std::vector<Sample>& samples, double threshold);

nlohmann::json to_json(const SubsetMetrics& m);
nlohmann::json to_json(const EvalResult& r);

// Fixed-width comparison table, one row per resolver, 1-decimal rounding.
std::string render_table(
    const std::vector<std::pair<std::string, EvalResult>>& rows);

struct AblationRow {
  ModuleMask mask;
  EvalResult result;
};

std::string module_set_name(const ModuleMask& mask);

// Rows sorted by descriptive top-1 error ascending; monotonicity
// violations (a single-module model not worse than a containing pair)
// listed in a footer.
std::string report_ablation(std::vector<AblationRow> rows);

}  // namespace srr
