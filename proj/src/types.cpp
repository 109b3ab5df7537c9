#include "srr/types.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <unordered_set>

namespace srr {

const char* category_name(EntityCategory c) {
  switch (c) {
    case EntityCategory::PhoneNumber: return "phone_number";
    case EntityCategory::EmailAddress: return "email_address";
    case EntityCategory::Url: return "url";
    case EntityCategory::Address: return "address";
    case EntityCategory::DateTime: return "date_time";
  }
  return "unknown";
}

std::optional<EntityCategory> category_from_name(std::string_view name) {
  for (EntityCategory c : kAllCategories) {
    if (name == category_name(c)) return c;
  }
  return std::nullopt;
}

const std::vector<std::string>& category_word_tokens(EntityCategory c) {
  static const std::vector<std::string> phone = {"phone", "number"};
  static const std::vector<std::string> email = {"email", "address"};
  static const std::vector<std::string> url = {"url"};
  static const std::vector<std::string> address = {"address"};
  static const std::vector<std::string> date_time = {"date", "time"};
  switch (c) {
    case EntityCategory::PhoneNumber: return phone;
    case EntityCategory::EmailAddress: return email;
    case EntityCategory::Url: return url;
    case EntityCategory::Address: return address;
    case EntityCategory::DateTime: return date_time;
  }
  return phone;
}

double center_distance(const BBox& a, const BBox& b) {
  double dx = a.cx() - b.cx();
  double dy = a.cy() - b.cy();
  return std::sqrt(dx * dx + dy * dy);
}

const OcrText* Screen::find_ocr_text(int id) const {
  for (const auto& t : ocr_texts) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

const Entity* Screen::find_entity(int id) const {
  for (const auto& e : entities) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

bool Sample::is_gold(int entity_id) const {
  return std::find(gold_ids.begin(), gold_ids.end(), entity_id) !=
         gold_ids.end();
}

const char* supervision_tag_name(SupervisionTag t) {
  switch (t) {
    case SupervisionTag::CategoryModule: return "category_module";
    case SupervisionTag::LocationModule: return "location_module";
    case SupervisionTag::TextModule: return "text_module";
  }
  return "unknown";
}

std::optional<SupervisionTag> supervision_tag_from_name(std::string_view name) {
  if (name == "category_module") return SupervisionTag::CategoryModule;
  if (name == "location_module") return SupervisionTag::LocationModule;
  if (name == "text_module") return SupervisionTag::TextModule;
  return std::nullopt;
}

const char* subset_name(Subset s) {
  return s == Subset::CategoryLevel ? "category_level" : "descriptive";
}

std::optional<Subset> subset_from_name(std::string_view name) {
  if (name == "category_level") return Subset::CategoryLevel;
  if (name == "descriptive") return Subset::Descriptive;
  return std::nullopt;
}

const char* ref_type_name(RefType r) {
  switch (r) {
    case RefType::Simple: return "simple";
    case RefType::Label: return "label";
    case RefType::FullText: return "full_text";
    case RefType::Ordinal: return "ordinal";
    case RefType::PartialValue: return "partial_value";
  }
  return "unknown";
}

std::optional<RefType> ref_type_from_name(std::string_view name) {
  if (name == "simple") return RefType::Simple;
  if (name == "label") return RefType::Label;
  if (name == "full_text") return RefType::FullText;
  if (name == "ordinal") return RefType::Ordinal;
  if (name == "partial_value") return RefType::PartialValue;
  return std::nullopt;
}

std::vector<std::string> tokenize(std::string_view raw) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char ch : raw) {
    unsigned char u = static_cast<unsigned char>(ch);
    if (std::isalnum(u)) {
      cur.push_back(static_cast<char>(std::tolower(u)));
    } else if (!cur.empty()) {
      tokens.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  if (tokens.empty()) throw EmptyRequestError();
  return tokens;
}

namespace {

bool bbox_in_screen(const BBox& b, int width, int height) {
  return b.x >= 0 && b.y >= 0 && b.x + b.w <= width && b.y + b.h <= height;
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isspace(c);
  });
}

}  // namespace

std::vector<ValidationIssue> validate_screen(const Screen& screen) {
  std::vector<ValidationIssue> issues;
  auto add = [&](const char* code, std::string detail) {
    issues.push_back({code, std::move(detail)});
  };
  if (screen.width <= 0 || screen.height <= 0) {
    add("bad_dimensions", "screen " + screen.id);
  }
  std::unordered_set<int> text_ids;
  for (const auto& t : screen.ocr_texts) {
    if (!text_ids.insert(t.id).second) {
      add("duplicate_id", "ocr_text " + std::to_string(t.id));
    }
    if (t.text.empty() || is_blank(t.text)) {
      add("empty_text", "ocr_text " + std::to_string(t.id));
    }
    if (t.bbox.w <= 0 || t.bbox.h <= 0) {
      add("degenerate_bbox", "ocr_text " + std::to_string(t.id));
    }
    if (!bbox_in_screen(t.bbox, screen.width, screen.height)) {
      add("out_of_bounds", "ocr_text " + std::to_string(t.id));
    }
  }
  std::unordered_set<int> entity_ids;
  for (const auto& e : screen.entities) {
    if (!entity_ids.insert(e.id).second) {
      add("duplicate_id", "entity " + std::to_string(e.id));
    }
    if (e.text.empty() || is_blank(e.text)) {
      add("empty_text", "entity " + std::to_string(e.id));
    }
    if (!bbox_in_screen(e.bbox, screen.width, screen.height)) {
      add("out_of_bounds", "entity " + std::to_string(e.id));
    }
    if (text_ids.count(e.ocr_text_id) == 0) {
      add("missing_ocr_text", "entity " + std::to_string(e.id));
    }
  }
  return issues;
}

std::vector<ValidationIssue> validate_sample(const Sample& sample) {
  std::vector<ValidationIssue> issues;
  auto add = [&](const char* code, std::string detail) {
    issues.push_back({code, std::move(detail)});
  };
  if (sample.request.tokens.empty()) {
    add("empty_request", sample.request.id);
  } else {
    std::vector<std::string> retok = tokenize(sample.request.raw);
    if (retok != sample.request.tokens) {
      add("token_mismatch", sample.request.id);
    }
  }
  if (sample.gold_ids.empty()) add("empty_gold", sample.request.id);
  std::set<int> cand_ids;
  for (const auto& e : sample.candidates) cand_ids.insert(e.id);
  if (cand_ids.size() != sample.candidates.size()) {
    add("duplicate_id", "candidates of " + sample.request.id);
  }
  for (int g : sample.gold_ids) {
    if (cand_ids.count(g) == 0) {
      add("gold_not_candidate", std::to_string(g));
    }
  }
  if (sample.subset == Subset::Descriptive) {
    if (!sample.screen) add("missing_screen", sample.request.id);
    if (sample.gold_ids.size() != 1) add("multilabel_descriptive", sample.request.id);
    if (sample.screen) {
      auto screen_issues = validate_screen(*sample.screen);
      issues.insert(issues.end(), screen_issues.begin(), screen_issues.end());
      for (const auto& e : sample.candidates) {
        const Entity* on_screen = sample.screen->find_entity(e.id);
        if (on_screen == nullptr || !(*on_screen == e)) {
          add("candidate_not_on_screen", std::to_string(e.id));
        }
      }
    }
  } else {
    if (sample.screen) add("unexpected_screen", sample.request.id);
    if (sample.candidates.size() != kNumCategories) {
      add("bad_dummy_pool", sample.request.id);
    } else {
      for (int i = 0; i < kNumCategories; ++i) {
        if (sample.candidates[i].category != kAllCategories[i]) {
          add("bad_dummy_pool", sample.request.id);
          break;
        }
      }
    }
  }
  return issues;
}

std::vector<Entity> reading_order(std::vector<Entity> entities) {
  std::stable_sort(entities.begin(), entities.end(),
                   [](const Entity& a, const Entity& b) {
                     if (a.bbox.y != b.bbox.y) return a.bbox.y < b.bbox.y;
                     if (a.bbox.x != b.bbox.x) return a.bbox.x < b.bbox.x;
                     return a.id < b.id;
                   });
  return entities;
}

}  // namespace srr
