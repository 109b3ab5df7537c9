#include "srr/detectors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace srr {

DetectorConfig default_detector_config() {
  DetectorConfig cfg;
  cfg.street_suffixes = {"st",  "street", "ave", "avenue", "rd",    "road",
                         "blvd","boulevard", "ln", "lane", "dr",    "drive",
                         "way", "ct", "court", "terrace", "plaza"};
  cfg.city_names = {"springfield", "portland", "riverton", "fairview",
                    "greenville", "bristol",   "clayton",  "madison",
                    "ashland",    "dayton",    "auburn",   "milton"};
  cfg.region_tokens = {"ca", "ny", "tx", "wa", "or", "usa",
                       "california", "oregon", "texas"};
  cfg.enabled_categories = {EntityCategory::PhoneNumber,
                            EntityCategory::EmailAddress, EntityCategory::Url,
                            EntityCategory::Address, EntityCategory::DateTime};
  return cfg;
}

DetectorConfig load_detector_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open detector config: " + path);
  nlohmann::json j = nlohmann::json::parse(in);
  DetectorConfig cfg;
  cfg.street_suffixes = j.at("street_suffixes").get<std::vector<std::string>>();
  cfg.city_names = j.at("city_names").get<std::vector<std::string>>();
  cfg.region_tokens = j.at("region_tokens").get<std::vector<std::string>>();
  if (j.contains("enabled_categories")) {
    for (const auto& name : j.at("enabled_categories")) {
      auto c = category_from_name(name.get<std::string>());
      if (!c) throw std::runtime_error("unknown category in detector config");
      cfg.enabled_categories.insert(*c);
    }
  } else {
    for (EntityCategory c : kAllCategories) cfg.enabled_categories.insert(c);
  }
  if (cfg.enabled_categories.count(EntityCategory::Address) &&
      (cfg.street_suffixes.empty() || cfg.city_names.empty())) {
    throw std::runtime_error("address detection enabled with empty gazetteer");
  }
  return cfg;
}

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

std::string join_alternatives(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out.push_back('|');
    out += w;
  }
  return out;
}

struct RawMatch {
  std::size_t begin = 0;
  std::size_t end = 0;
};

class Detector {
 public:
  explicit Detector(const DetectorConfig& config) : config_(config) {
    auto icase = std::regex::ECMAScript | std::regex::icase;
    url_ = std::regex(
        R"((https?://[^\s]+)|(www\.[^\s]+)|([a-z0-9-]+\.(?:com|org|net|io|gov|edu|co)(?:/[^\s]*)?))",
        icase);
    email_ = std::regex(R"([a-z0-9._%+-]+@[a-z0-9-]+(?:\.[a-z0-9-]+)*\.[a-z]{2,})",
                        icase);
    phone_ = std::regex(
        R"((\+?\d{1,3}[ -])?(\(\d{3}\)[ -]?|\d{3}[-. ])\d{3}[-. ]\d{4})"
        R"(|\+\d{1,3} ?\d{6,12})"
        R"(|\d{3}[-. ]\d{4})",
        icase);
    datetime_ = std::regex(
        R"((?:monday|tuesday|wednesday|thursday|friday|saturday|sunday|tomorrow|today|tonight)(?: at)?(?: \d{1,2}(?::\d{2})? ?(?:am|pm)?)?)"
        R"(|(?:january|february|march|april|may|june|july|august|september|october|november|december) \d{1,2}(?:st|nd|rd|th)?)"
        R"(|\d{1,2}/\d{1,2}/\d{2,4})"
        R"(|\d{1,2}:\d{2} ?(?:am|pm)?)"
        R"(|\d{1,2} ?(?:am|pm))",
        icase);
    if (!config.street_suffixes.empty()) {
      address_ = std::regex(
          R"(\d{1,5} (?:[A-Za-z]+ ){1,2}(?:)" +
              join_alternatives(config.street_suffixes) + R"()\.?)",
          icase);
    }
  }

  std::vector<DetectedSpan> spans(const std::string& text) const {
    std::vector<DetectedSpan> claimed;
    // Precedence order: Url > Email > Phone > DateTime > Address.
    if (enabled(EntityCategory::Url)) {
      for (auto& m : find_all(text, url_)) {
        if (url_guard(text, m)) claim(claimed, m, EntityCategory::Url);
      }
    }
    if (enabled(EntityCategory::EmailAddress)) {
      for (auto& m : find_all(text, email_)) {
        claim(claimed, m, EntityCategory::EmailAddress);
      }
    }
    if (enabled(EntityCategory::PhoneNumber)) {
      for (auto& m : find_all(text, phone_)) {
        claim(claimed, m, EntityCategory::PhoneNumber);
      }
    }
    if (enabled(EntityCategory::DateTime)) {
      for (auto& m : find_all(text, datetime_)) {
        claim(claimed, m, EntityCategory::DateTime);
      }
    }
    if (enabled(EntityCategory::Address) && !config_.street_suffixes.empty()) {
      for (auto& m : find_all(text, address_)) {
        extend_with_gazetteer(text, m);
        claim(claimed, m, EntityCategory::Address);
      }
    }
    std::sort(claimed.begin(), claimed.end(),
              [](const DetectedSpan& a, const DetectedSpan& b) {
                return a.begin < b.begin;
              });
    return claimed;
  }

 private:
  bool enabled(EntityCategory c) const {
    return config_.enabled_categories.count(c) > 0;
  }

  static std::vector<RawMatch> find_all(const std::string& text,
                                        const std::regex& re) {
    std::vector<RawMatch> out;
    auto begin = std::sregex_iterator(text.begin(), text.end(), re);
    for (auto it = begin; it != std::sregex_iterator(); ++it) {
      std::size_t pos = static_cast<std::size_t>(it->position());
      RawMatch m{pos, pos + it->length()};
      if (edge_guard(text, m)) out.push_back(m);
    }
    return out;
  }

  // Reject matches glued to surrounding alphanumerics ("x555-0100y").
  static bool edge_guard(const std::string& text, const RawMatch& m) {
    if (m.begin > 0 && is_word_char(text[m.begin - 1])) return false;
    if (m.end < text.size() && is_word_char(text[m.end])) return false;
    return true;
  }

  // The bare-domain URL alternative must not fire on the domain part of
  // an email address.
  static bool url_guard(const std::string& text, const RawMatch& m) {
    if (m.begin > 0) {
      char prev = text[m.begin - 1];
      if (prev == '@' || prev == '.') return false;
    }
    return true;
  }

  void extend_with_gazetteer(const std::string& text, RawMatch& m) const {
    for (;;) {
      std::size_t pos = m.end;
      while (pos < text.size() && (text[pos] == ' ' || text[pos] == ','))
        ++pos;
      std::size_t word_end = pos;
      while (word_end < text.size() &&
             std::isalpha(static_cast<unsigned char>(text[word_end])))
        ++word_end;
      if (word_end == pos) return;
      std::string word = text.substr(pos, word_end - pos);
      std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
      });
      bool known =
          std::find(config_.city_names.begin(), config_.city_names.end(),
                    word) != config_.city_names.end() ||
          std::find(config_.region_tokens.begin(), config_.region_tokens.end(),
                    word) != config_.region_tokens.end();
      if (!known) return;
      m.end = word_end;
    }
  }

  static void claim(std::vector<DetectedSpan>& claimed, const RawMatch& m,
                    EntityCategory cat) {
    for (const auto& c : claimed) {
      if (m.begin < c.end && c.begin < m.end) return;  // overlap, earlier wins
    }
    claimed.push_back({m.begin, m.end, cat});
  }

  DetectorConfig config_;
  std::regex url_, email_, phone_, datetime_, address_;
};

}  // namespace

std::vector<DetectedSpan> detect_spans(const std::string& text,
                                       const DetectorConfig& config) {
  return Detector(config).spans(text);
}

std::vector<Entity> detect_entities(const std::vector<OcrText>& ocr_texts,
                                    const DetectorConfig& config,
                                    int first_entity_id) {
  Detector detector(config);
  std::vector<Entity> entities;
  int next_id = first_entity_id;
  for (const auto& line : ocr_texts) {
    for (const auto& span : detector.spans(line.text)) {
      double n = static_cast<double>(line.text.size());
      Entity e;
      e.id = next_id++;
      e.ocr_text_id = line.id;
      e.text = line.text.substr(span.begin, span.end - span.begin);
      e.bbox.x = line.bbox.x + line.bbox.w * static_cast<double>(span.begin) / n;
      e.bbox.y = line.bbox.y;
      e.bbox.w = line.bbox.w * static_cast<double>(span.end - span.begin) / n;
      e.bbox.h = line.bbox.h;
      e.category = span.category;
      entities.push_back(std::move(e));
    }
  }
  return entities;
}

std::optional<EntityCategory> detect_category(const std::string& text,
                                              const DetectorConfig& config) {
  auto spans = detect_spans(text, config);
  if (spans.empty()) return std::nullopt;
  // Highest-precedence category present, earliest occurrence on ties.
  auto rank = [](EntityCategory c) {
    switch (c) {
      case EntityCategory::Url: return 0;
      case EntityCategory::EmailAddress: return 1;
      case EntityCategory::PhoneNumber: return 2;
      case EntityCategory::DateTime: return 3;
      case EntityCategory::Address: return 4;
    }
    return 5;
  };
  const DetectedSpan* best = &spans.front();
  for (const auto& s : spans) {
    if (rank(s.category) < rank(best->category)) best = &s;
  }
  return best->category;
}

}  // namespace srr
