#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "srr/types.hpp"

namespace srr {

struct DetectorConfig {
  std::vector<std::string> street_suffixes;   // "st", "street", "ave", ...
  std::vector<std::string> city_names;        // lowercase
  std::vector<std::string> region_tokens;     // states/countries, lowercase
  std::set<EntityCategory> enabled_categories;
};

// Built-in US-style config matching the synthetic value grammars.
DetectorConfig default_detector_config();
DetectorConfig load_detector_config(const std::string& path);

// A detected span within an OCR line, before it becomes an Entity.
struct DetectedSpan {
  std::size_t begin = 0;  // char offsets into the line
  std::size_t end = 0;
  EntityCategory category = EntityCategory::PhoneNumber;
};

// All non-overlapping spans in a single line, precedence
// Url > EmailAddress > PhoneNumber > DateTime > Address.
std::vector<DetectedSpan> detect_spans(const std::string& text,
                                       const DetectorConfig& config);

// Each span becomes one Entity; the bbox is the proportional horizontal
// slice of the line bbox by character offset. Entity ids are assigned
// sequentially from first_entity_id in input order.
std::vector<Entity> detect_entities(const std::vector<OcrText>& ocr_texts,
                                    const DetectorConfig& config,
                                    int first_entity_id = 0);

// Category of the first detected span under the precedence order.
std::optional<EntityCategory> detect_category(const std::string& text,
                                              const DetectorConfig& config);

}  // namespace srr
