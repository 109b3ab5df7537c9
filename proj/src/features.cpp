#include "srr/features.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <stdexcept>

namespace srr {

const Stopwords& default_stopwords() {
  static const Stopwords words = {
      "a",    "an",   "and",  "are",  "as",   "at",    "be",   "but",
      "by",   "for",  "from", "has",  "have", "he",    "her",  "his",
      "i",    "in",   "is",   "it",   "its",  "me",    "my",   "of",
      "on",   "or",   "our",  "she",  "so",   "that",  "the",  "their",
      "them", "then", "there","these","they", "this",  "to",   "up",
      "us",   "was",  "we",   "were", "what", "which", "will", "with",
      "would","you"};
  return words;
}

Stopwords load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open stopword list: " + path);
  Stopwords words;
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.pop_back();
    }
    if (!line.empty()) words.insert(line);
  }
  return words;
}

std::array<double, 5> bbox_features(const BBox& b, double k) {
  return {b.x / k, b.y / k, (b.x + b.w) / k, (b.y + b.h) / k,
          b.w * b.h / (k * k)};
}

namespace {

bool is_zero(const BBox& b) { return b.w == 0 && b.h == 0; }

std::vector<std::string> safe_tokens(const std::string& text) {
  try {
    return tokenize(text);
  } catch (const EmptyRequestError&) {
    return {};
  }
}

bool is_digit_run(const std::string& tok) {
  return !tok.empty() && std::all_of(tok.begin(), tok.end(), [](unsigned char c) {
           return std::isdigit(c);
         });
}

}  // namespace

std::vector<double> location_features(const Entity& entity, const Screen* screen) {
  std::vector<double> feats(kLocFeatureDim, 0.0);
  if (screen == nullptr || is_zero(entity.bbox)) return feats;
  double k = static_cast<double>(std::max(screen->width, screen->height));
  auto self = bbox_features(entity.bbox, k);
  std::copy(self.begin(), self.end(), feats.begin());

  std::vector<const Entity*> context;
  for (const auto& e : screen->entities) {
    if (e.id != entity.id && e.category == entity.category) context.push_back(&e);
  }
  std::stable_sort(context.begin(), context.end(),
                   [&](const Entity* a, const Entity* b) {
                     double da = center_distance(a->bbox, entity.bbox);
                     double db = center_distance(b->bbox, entity.bbox);
                     if (da != db) return da < db;
                     return a->id < b->id;
                   });
  int n = std::min<int>(kContextEntities, static_cast<int>(context.size()));
  for (int i = 0; i < n; ++i) {
    auto ctx = bbox_features(context[i]->bbox, k);
    std::copy(ctx.begin(), ctx.end(), feats.begin() + 5 * (i + 1));
  }
  return feats;
}

double word_overlap(const std::vector<std::string>& request_tokens,
                    const std::string& text, const Stopwords& stopwords) {
  std::vector<std::string> content;
  for (auto& tok : safe_tokens(text)) {
    if (stopwords.count(tok) == 0 &&
        std::find(content.begin(), content.end(), tok) == content.end()) {
      content.push_back(tok);
    }
  }
  if (content.empty()) return 0.0;
  int hits = 0;
  for (const auto& tok : content) {
    if (std::find(request_tokens.begin(), request_tokens.end(), tok) !=
        request_tokens.end()) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(content.size());
}

double digit_overlap(const std::vector<std::string>& request_tokens,
                     const std::string& text) {
  std::vector<std::string> runs;
  for (auto& tok : safe_tokens(text)) {
    if (is_digit_run(tok) &&
        std::find(runs.begin(), runs.end(), tok) == runs.end()) {
      runs.push_back(tok);
    }
  }
  if (runs.empty()) return 0.0;
  int hits = 0;
  for (const auto& run : runs) {
    if (std::find(request_tokens.begin(), request_tokens.end(), run) !=
        request_tokens.end()) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(runs.size());
}

namespace {

// Lowercase, collapse every run of non-alphanumeric chars to one space.
std::string normalize_for_containment(const std::string& s) {
  std::string out;
  bool pending_space = false;
  for (char ch : s) {
    unsigned char u = static_cast<unsigned char>(ch);
    if (std::isalnum(u)) {
      if (pending_space && !out.empty()) out.push_back(' ');
      pending_space = false;
      out.push_back(static_cast<char>(std::tolower(u)));
    } else {
      pending_space = true;
    }
  }
  return out;
}

}  // namespace

int containment(const std::string& request_raw, const std::string& text) {
  std::string t = normalize_for_containment(text);
  if (t.empty()) return 0;
  std::string r = normalize_for_containment(request_raw);
  return r.find(t) != std::string::npos ? 1 : 0;
}

std::vector<double> text_match_features(const Request& request,
                                        const Entity& entity,
                                        const Screen* screen,
                                        const Stopwords& stopwords) {
  std::vector<double> feats(kTextFeatureDim, 0.0);
  feats[0] = containment(request.raw, entity.text);
  feats[1] = word_overlap(request.tokens, entity.text, stopwords);
  feats[2] = digit_overlap(request.tokens, entity.text);
  if (screen == nullptr) return feats;

  std::vector<const OcrText*> neighbors;
  for (const auto& t : screen->ocr_texts) {
    if (t.id != entity.ocr_text_id) neighbors.push_back(&t);
  }
  std::stable_sort(neighbors.begin(), neighbors.end(),
                   [&](const OcrText* a, const OcrText* b) {
                     double da = center_distance(a->bbox, entity.bbox);
                     double db = center_distance(b->bbox, entity.bbox);
                     if (da != db) return da < db;
                     return a->id < b->id;
                   });
  int n = std::min<int>(kNeighborTexts, static_cast<int>(neighbors.size()));
  for (int i = 0; i < n; ++i) {
    const OcrText& t = *neighbors[i];
    feats[3 * (i + 1) + 0] = containment(request.raw, t.text);
    feats[3 * (i + 1) + 1] = word_overlap(request.tokens, t.text, stopwords);
    feats[3 * (i + 1) + 2] = digit_overlap(request.tokens, t.text);
  }
  return feats;
}

}  // namespace srr
