#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace srr {

// ---------------------------------------------------------------------------
// Categories

enum class EntityCategory {
  PhoneNumber = 0,
  EmailAddress = 1,
  Url = 2,
  Address = 3,
  DateTime = 4,
};

constexpr int kNumCategories = 5;

constexpr std::array<EntityCategory, kNumCategories> kAllCategories = {
    EntityCategory::PhoneNumber, EntityCategory::EmailAddress,
    EntityCategory::Url, EntityCategory::Address, EntityCategory::DateTime};

// Wire name, e.g. "phone_number".
const char* category_name(EntityCategory c);
std::optional<EntityCategory> category_from_name(std::string_view name);

// Natural-language name tokens, e.g. {"phone", "number"}. Used for the
// category embedding.
const std::vector<std::string>& category_word_tokens(EntityCategory c);

// ---------------------------------------------------------------------------
// Geometry

struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double cx() const { return x + w / 2.0; }
  double cy() const { return y + h / 2.0; }

  bool operator==(const BBox&) const = default;
};

// Euclidean distance between bbox centers.
double center_distance(const BBox& a, const BBox& b);

// ---------------------------------------------------------------------------
// Screen data

struct OcrText {
  int id = 0;
  std::string text;
  BBox bbox;

  bool operator==(const OcrText&) const = default;
};

struct Entity {
  int id = 0;
  int ocr_text_id = -1;  // -1 for dummy pool entities (no screen)
  std::string text;
  BBox bbox;
  EntityCategory category = EntityCategory::PhoneNumber;

  bool operator==(const Entity&) const = default;
};

struct Screen {
  std::string id;
  int width = 0;
  int height = 0;
  std::vector<OcrText> ocr_texts;
  std::vector<Entity> entities;

  const OcrText* find_ocr_text(int id) const;
  const Entity* find_entity(int id) const;

  bool operator==(const Screen&) const = default;
};

// ---------------------------------------------------------------------------
// Requests and samples

struct Request {
  std::string id;
  std::string raw;
  std::vector<std::string> tokens;

  bool operator==(const Request&) const = default;
};

enum class SupervisionTag { CategoryModule, LocationModule, TextModule };
enum class Subset { CategoryLevel, Descriptive };

// Generation metadata kept on synthetic samples; Simple covers the
// category-level protocol.
enum class RefType { Simple, Label, FullText, Ordinal, PartialValue };

const char* supervision_tag_name(SupervisionTag t);
std::optional<SupervisionTag> supervision_tag_from_name(std::string_view name);
const char* subset_name(Subset s);
std::optional<Subset> subset_from_name(std::string_view name);
const char* ref_type_name(RefType r);
std::optional<RefType> ref_type_from_name(std::string_view name);

struct Sample {
  Request request;
  std::optional<Screen> screen;
  std::vector<Entity> candidates;
  std::vector<int> gold_ids;  // sorted, unique, non-empty
  std::optional<SupervisionTag> supervision_tag;
  Subset subset = Subset::CategoryLevel;
  std::optional<RefType> ref_type;

  bool is_gold(int entity_id) const;
};

// ---------------------------------------------------------------------------
// Tokenizer

class EmptyRequestError : public std::runtime_error {
 public:
  EmptyRequestError() : std::runtime_error("empty request") {}
};

// Lowercase tokens: maximal alphanumeric runs, so punctuation and
// whitespace split while digit runs like "866" stay whole.
std::vector<std::string> tokenize(std::string_view raw);

// ---------------------------------------------------------------------------
// Validation

struct ValidationIssue {
  std::string code;    // "out_of_bounds", "duplicate_id", "empty_text", ...
  std::string detail;
};

std::vector<ValidationIssue> validate_screen(const Screen& screen);
std::vector<ValidationIssue> validate_sample(const Sample& sample);

// Entities sorted in reading order: ascending y, then x of the bbox
// top-left, then id as a final deterministic tie-break.
std::vector<Entity> reading_order(std::vector<Entity> entities);

}  // namespace srr
