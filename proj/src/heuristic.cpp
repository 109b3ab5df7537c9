#include "srr/heuristic.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>

#include <json.hpp>

namespace srr {

KeywordLexicon default_lexicon() {
  KeywordLexicon lex;
  lex.keywords[EntityCategory::PhoneNumber] = {
      {"number", "phone", "contact", "line", "hotline"},
      {"call", "dial", "ring", "redial"},
      {"facetime"}};
  lex.keywords[EntityCategory::EmailAddress] = {
      {"email", "mail", "inbox"},
      {"email", "mail"},
      {"gmail", "outlook"}};
  lex.keywords[EntityCategory::Url] = {
      {"url", "link", "website", "site", "page"},
      {"open", "visit", "browse", "bookmark"},
      {"safari", "chrome", "browser"}};
  lex.keywords[EntityCategory::Address] = {
      {"address", "location", "directions", "street"},
      {"navigate", "drive"},
      {"maps", "waze"}};
  lex.keywords[EntityCategory::DateTime] = {
      {"date", "time", "appointment", "event", "meeting"},
      {"schedule", "reschedule"},
      {"calendar"}};
  return lex;
}

KeywordLexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open lexicon: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  KeywordLexicon lex;
  lex.priority.clear();
  for (const auto& [name, entry] : j.at("categories").items()) {
    auto cat = category_from_name(name);
    if (!cat) throw std::runtime_error("unknown category in lexicon: " + name);
    CategoryKeywords kw;
    kw.nouns = entry.at("nouns").get<std::vector<std::string>>();
    kw.verbs = entry.at("verbs").get<std::vector<std::string>>();
    if (entry.contains("apps")) {
      kw.apps = entry.at("apps").get<std::vector<std::string>>();
    }
    if (kw.nouns.empty() || kw.verbs.empty()) {
      throw std::runtime_error("lexicon category needs nouns and verbs: " + name);
    }
    lex.keywords[*cat] = std::move(kw);
  }
  if (j.contains("priority")) {
    for (const auto& name : j.at("priority")) {
      auto cat = category_from_name(name.get<std::string>());
      if (!cat) throw std::runtime_error("unknown category in priority");
      lex.priority.push_back(*cat);
    }
  } else {
    lex.priority.assign(kAllCategories.begin(), kAllCategories.end());
  }
  return lex;
}

namespace {

bool has_token(const std::vector<std::string>& tokens, const std::string& word) {
  return std::find(tokens.begin(), tokens.end(), word) != tokens.end();
}

bool any_token(const std::vector<std::string>& tokens,
               const std::vector<std::string>& words) {
  return std::any_of(words.begin(), words.end(),
                     [&](const std::string& w) { return has_token(tokens, w); });
}

int priority_rank(const KeywordLexicon& lex, EntityCategory c) {
  auto it = std::find(lex.priority.begin(), lex.priority.end(), c);
  return it == lex.priority.end()
             ? static_cast<int>(lex.priority.size())
             : static_cast<int>(it - lex.priority.begin());
}

}  // namespace

std::vector<EntityCategory> match_category_keywords(const Request& request,
                                                    const KeywordLexicon& lexicon) {
  // hit kind: 0 = noun, 1 = verb, 2 = app
  std::vector<std::pair<int, EntityCategory>> hits;
  for (const auto& [cat, kw] : lexicon.keywords) {
    if (any_token(request.tokens, kw.nouns)) {
      hits.emplace_back(0, cat);
    } else if (any_token(request.tokens, kw.verbs)) {
      hits.emplace_back(1, cat);
    } else if (any_token(request.tokens, kw.apps)) {
      hits.emplace_back(2, cat);
    }
  }
  std::stable_sort(hits.begin(), hits.end(),
                   [&](const auto& a, const auto& b) {
                     if (a.first != b.first) return a.first < b.first;
                     return priority_rank(lexicon, a.second) <
                            priority_rank(lexicon, b.second);
                   });
  std::vector<EntityCategory> out;
  for (const auto& [kind, cat] : hits) out.push_back(cat);
  return out;
}

std::optional<PositionalSpec> parse_positional(const Request& request) {
  static const std::vector<std::pair<std::string, int>> ordinals = {
      {"first", 1},  {"second", 2}, {"third", 3}, {"fourth", 4}, {"fifth", 5},
      {"sixth", 6},  {"seventh", 7}, {"eighth", 8}, {"ninth", 9}, {"tenth", 10},
      {"1st", 1},    {"2nd", 2},    {"3rd", 3},   {"4th", 4},   {"5th", 5},
      {"6th", 6},    {"7th", 7},    {"8th", 8},   {"9th", 9},   {"10th", 10}};
  for (const auto& tok : request.tokens) {
    for (const auto& [word, k] : ordinals) {
      if (tok == word) return PositionalSpec{PositionalSpec::Kind::Ordinal, k};
    }
    if (tok == "top") return PositionalSpec{PositionalSpec::Kind::Top, 0};
    if (tok == "bottom") return PositionalSpec{PositionalSpec::Kind::Bottom, 0};
    if (tok == "middle") return PositionalSpec{PositionalSpec::Kind::Middle, 0};
    if (tok == "last") return PositionalSpec{PositionalSpec::Kind::Last, 0};
  }
  return std::nullopt;
}

std::optional<Entity> apply_positional(const PositionalSpec& spec,
                                       const std::vector<Entity>& candidates) {
  if (candidates.empty()) return std::nullopt;
  std::vector<Entity> sorted = reading_order(candidates);
  int n = static_cast<int>(sorted.size());
  switch (spec.kind) {
    case PositionalSpec::Kind::Ordinal:
      if (spec.k < 1 || spec.k > n) return std::nullopt;
      return sorted[spec.k - 1];
    case PositionalSpec::Kind::Top:
      return sorted.front();
    case PositionalSpec::Kind::Bottom:
    case PositionalSpec::Kind::Last:
      return sorted.back();
    case PositionalSpec::Kind::Middle:
      return sorted[n / 2];
  }
  return std::nullopt;
}

std::optional<Entity> label_match(const Request& request, const Screen& screen,
                                  const std::vector<Entity>& candidates,
                                  const Stopwords& stopwords) {
  if (candidates.empty()) return std::nullopt;
  std::set<int> candidate_text_ids;
  for (const auto& e : candidates) candidate_text_ids.insert(e.ocr_text_id);

  const OcrText* best = nullptr;
  double best_overlap = 0.0;
  int best_hits = 0;
  for (const auto& t : screen.ocr_texts) {
    if (candidate_text_ids.count(t.id)) continue;
    double overlap = word_overlap(request.tokens, t.text, stopwords);
    if (overlap <= 0.0) continue;
    // Hit count re-derived from the fraction's construction is fragile;
    // count matching content words directly.
    int hits = 0;
    std::vector<std::string> seen;
    for (const auto& tok : tokenize(t.text)) {
      if (stopwords.count(tok) ||
          std::find(seen.begin(), seen.end(), tok) != seen.end())
        continue;
      seen.push_back(tok);
      if (has_token(request.tokens, tok)) ++hits;
    }
    if (best == nullptr || overlap > best_overlap ||
        (overlap == best_overlap && hits > best_hits) ||
        (overlap == best_overlap && hits == best_hits && t.id < best->id)) {
      best = &t;
      best_overlap = overlap;
      best_hits = hits;
    }
  }
  if (best != nullptr) {
    const Entity* nearest = nullptr;
    double nearest_d = std::numeric_limits<double>::infinity();
    for (const auto& e : candidates) {
      double d = center_distance(e.bbox, best->bbox);
      if (nearest == nullptr || d < nearest_d ||
          (d == nearest_d && e.id < nearest->id)) {
        nearest = &e;
        nearest_d = d;
      }
    }
    return *nearest;
  }
  // No non-candidate text overlaps; let a candidate's own text match the
  // request (covers full-text and partial-value references).
  const Entity* best_cand = nullptr;
  double best_cand_overlap = 0.0;
  for (const auto& e : candidates) {
    double overlap = word_overlap(request.tokens, e.text, stopwords);
    if (overlap > 0.0 &&
        (best_cand == nullptr || overlap > best_cand_overlap ||
         (overlap == best_cand_overlap && e.id < best_cand->id))) {
      best_cand = &e;
      best_cand_overlap = overlap;
    }
  }
  if (best_cand != nullptr) return *best_cand;
  return std::nullopt;
}

std::vector<double> resolve_heuristic(const Sample& sample,
                                      const KeywordLexicon& lexicon,
                                      const Stopwords& stopwords) {
  if (sample.candidates.empty()) throw NoCandidatesError();
  std::vector<double> scores(sample.candidates.size(), 0.0);

  // Rule 1: phrase match filters candidates to the matched categories.
  std::vector<EntityCategory> matched =
      match_category_keywords(sample.request, lexicon);
  std::vector<Entity> filtered;
  for (const auto& e : sample.candidates) {
    if (std::find(matched.begin(), matched.end(), e.category) != matched.end()) {
      filtered.push_back(e);
    }
  }
  if (filtered.empty()) filtered = sample.candidates;

  auto score_one = [&](int entity_id) {
    for (std::size_t i = 0; i < sample.candidates.size(); ++i) {
      if (sample.candidates[i].id == entity_id) scores[i] = 1.0;
    }
  };

  // Rule 2: location match.
  if (auto spec = parse_positional(sample.request)) {
    if (auto picked = apply_positional(*spec, filtered)) {
      score_one(picked->id);
      return scores;
    }
  }
  // Rule 3: label match.
  if (sample.screen) {
    if (auto picked =
            label_match(sample.request, *sample.screen, filtered, stopwords)) {
      score_one(picked->id);
      return scores;
    }
  }
  // Rule 4: uniform over the filtered set.
  double p = 1.0 / static_cast<double>(filtered.size());
  for (std::size_t i = 0; i < sample.candidates.size(); ++i) {
    for (const auto& e : filtered) {
      if (e.id == sample.candidates[i].id) scores[i] = p;
    }
  }
  return scores;
}

std::vector<double> category_oracle(const Sample& sample) {
  std::set<EntityCategory> gold_cats;
  for (int g : sample.gold_ids) {
    for (const auto& e : sample.candidates) {
      if (e.id == g) gold_cats.insert(e.category);
    }
  }
  std::vector<double> scores(sample.candidates.size(), 0.0);
  for (std::size_t i = 0; i < sample.candidates.size(); ++i) {
    if (gold_cats.count(sample.candidates[i].category)) scores[i] = 1.0;
  }
  return scores;
}

std::vector<double> no_text_oracle(const Sample& sample) {
  if (!sample.ref_type) throw UnsupportedSampleError();
  RefType rt = *sample.ref_type;
  if (rt == RefType::Simple || rt == RefType::Ordinal) {
    std::vector<double> scores(sample.candidates.size(), 0.0);
    for (std::size_t i = 0; i < sample.candidates.size(); ++i) {
      if (sample.is_gold(sample.candidates[i].id)) scores[i] = 1.0;
    }
    return scores;
  }
  return category_oracle(sample);
}

}  // namespace srr
