#include "srr/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <sstream>

namespace srr {

int exact_match(std::vector<int> selected_ids, std::vector<int> gold_ids) {
  std::sort(selected_ids.begin(), selected_ids.end());
  selected_ids.erase(std::unique(selected_ids.begin(), selected_ids.end()),
                     selected_ids.end());
  std::sort(gold_ids.begin(), gold_ids.end());
  gold_ids.erase(std::unique(gold_ids.begin(), gold_ids.end()),
                 gold_ids.end());
  return selected_ids == gold_ids ? 1 : 0;
}

int top1_error(const std::vector<std::pair<int, double>>& scores,
               const std::vector<int>& gold_ids) {
  const std::pair<int, double>* best = &scores.front();
  for (const auto& s : scores) {
    if (s.second > best->second ||
        (s.second == best->second && s.first < best->first)) {
      best = &s;
    }
  }
  bool hit = std::find(gold_ids.begin(), gold_ids.end(), best->first) !=
             gold_ids.end();
  return hit ? 0 : 1;
}

Resolver make_heuristic_resolver(const KeywordLexicon& lexicon,
                                 const Stopwords& stopwords) {
  return [lexicon, stopwords](const Sample& s) {
    return resolve_heuristic(s, lexicon, stopwords);
  };
}

Resolver make_category_oracle_resolver() {
  return [](const Sample& s) { return category_oracle(s); };
}

Resolver make_no_text_oracle_resolver() {
  return [](const Sample& s) { return no_text_oracle(s); };
}

Resolver make_srr_resolver(const Params& params, const Stopwords& stopwords,
                           const ModuleMask& mask, double skip_eps) {
  auto shared = std::make_shared<Params>(params);
  return [shared, stopwords, mask, skip_eps](const Sample& s) {
    Prediction pred = resolve(s, *shared, stopwords,
                              shared->config.threshold, mask, skip_eps);
    return pred.probabilities;
  };
}

EvalResult evaluate(const Resolver& resolver,
                    const std::vector<Sample>& samples, double threshold) {
  struct Acc {
    int n = 0, failures = 0, err = 0, em = 0, empty = 0;
    double ms = 0;
  } cat, desc;

  for (const Sample& s : samples) {
    Acc& a = s.subset == Subset::CategoryLevel ? cat : desc;
    ++a.n;
    auto t0 = std::chrono::steady_clock::now();
    std::vector<double> scores;
    try {
      scores = resolver(s);
    } catch (const std::exception&) {
      ++a.failures;
      ++a.err;
      ++a.empty;
      continue;
    }
    auto t1 = std::chrono::steady_clock::now();
    a.ms += std::chrono::duration<double, std::milli>(t1 - t0).count();

    std::vector<std::pair<int, double>> id_scores;
    std::vector<int> selected;
    for (std::size_t i = 0; i < s.candidates.size(); ++i) {
      id_scores.emplace_back(s.candidates[i].id, scores[i]);
      if (scores[i] > threshold) selected.push_back(s.candidates[i].id);
    }
    a.err += top1_error(id_scores, s.gold_ids);
    a.em += exact_match(selected, s.gold_ids);
    if (selected.empty()) ++a.empty;
  }

  auto finish = [](const Acc& a) {
    SubsetMetrics m;
    m.count = a.n;
    m.failures = a.failures;
    if (a.n > 0) {
      m.top1_error = 100.0 * a.err / a.n;
      m.exact_match = 100.0 * a.em / a.n;
      m.empty_selection_rate = 100.0 * a.empty / a.n;
      m.wall_ms_per_sample = a.ms / a.n;
    }
    return m;
  };
  return {finish(cat), finish(desc)};
}

nlohmann::json to_json(const SubsetMetrics& m) {
  return nlohmann::json{{"count", m.count},
                        {"failures", m.failures},
                        {"top1_error", m.top1_error},
                        {"exact_match", m.exact_match},
                        {"empty_selection_rate", m.empty_selection_rate},
                        {"wall_ms_per_sample", m.wall_ms_per_sample}};
}

nlohmann::json to_json(const EvalResult& r) {
  return nlohmann::json{{"category_level", to_json(r.category_level)},
                        {"descriptive", to_json(r.descriptive)}};
}

namespace {

std::string fmt1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v);
  return buf;
}

void append_row(std::ostringstream& out, const std::string& name,
                const EvalResult& r) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %10s %10s %10s %10s %10s\n",
                name.c_str(), fmt1(r.category_level.top1_error).c_str(),
                fmt1(r.category_level.exact_match).c_str(),
                fmt1(r.descriptive.top1_error).c_str(),
                fmt1(r.descriptive.exact_match).c_str(),
                fmt1(r.descriptive.empty_selection_rate).c_str());
  out << buf;
}

}  // namespace

std::string render_table(
    const std::vector<std::pair<std::string, EvalResult>>& rows) {
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %10s %10s %10s %10s %10s\n", "",
                "cat top1", "cat em", "desc top1", "desc em", "desc empty");
  out << buf;
  for (const auto& [name, result] : rows) append_row(out, name, result);
  return out.str();
}

std::string module_set_name(const ModuleMask& mask) {
  std::string out;
  if (mask.cat) out += "cat";
  if (mask.loc) out += out.empty() ? "loc" : "+loc";
  if (mask.text) out += out.empty() ? "text" : "+text";
  return out.empty() ? "none" : out;
}

std::string report_ablation(std::vector<AblationRow> rows) {
  auto size_of = [](const ModuleMask& m) {
    return (m.cat ? 1 : 0) + (m.loc ? 1 : 0) + (m.text ? 1 : 0);
  };
  std::sort(rows.begin(), rows.end(), [&](const AblationRow& a,
                                          const AblationRow& b) {
    if (a.result.descriptive.top1_error != b.result.descriptive.top1_error) {
      return a.result.descriptive.top1_error < b.result.descriptive.top1_error;
    }
    return size_of(a.mask) > size_of(b.mask);  // ties favor more modules
  });
  std::ostringstream out;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%-16s %10s %10s\n", "modules", "desc top1",
                "desc em");
  out << buf;
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%-16s %10s %10s\n",
                  module_set_name(row.mask).c_str(),
                  fmt1(row.result.descriptive.top1_error).c_str(),
                  fmt1(row.result.descriptive.exact_match).c_str());
    out << buf;
  }

  auto count_modules = [](const ModuleMask& m) {
    return (m.cat ? 1 : 0) + (m.loc ? 1 : 0) + (m.text ? 1 : 0);
  };
  auto contains = [](const ModuleMask& pair, const ModuleMask& single) {
    return (!single.cat || pair.cat) && (!single.loc || pair.loc) &&
           (!single.text || pair.text);
  };
  std::vector<std::string> violations;
  bool has_full = std::any_of(rows.begin(), rows.end(), [&](const AblationRow& r) {
    return count_modules(r.mask) == 3;
  });
  if (has_full && count_modules(rows.front().mask) != 3) {
    violations.push_back("full model is not ranked first");
  }
  for (const auto& pair : rows) {
    if (count_modules(pair.mask) != 2) continue;
    for (const auto& single : rows) {
      if (count_modules(single.mask) != 1) continue;
      if (!contains(pair.mask, single.mask)) continue;
      if (single.result.descriptive.top1_error <=
          pair.result.descriptive.top1_error) {
        violations.push_back(module_set_name(single.mask) + " not worse than " +
                             module_set_name(pair.mask));
      }
    }
  }
  if (violations.empty()) {
    out << "no ordering violations\n";
  } else {
    for (const auto& v : violations) out << "violation: " << v << "\n";
  }
  return out.str();
}

}  // namespace srr
