#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "srr/types.hpp"

namespace srr {

// Wire format: snake_case field names, bbox as [x, y, w, h].

nlohmann::json to_json(const BBox& b);
nlohmann::json to_json(const OcrText& t);
nlohmann::json to_json(const Entity& e);
nlohmann::json to_json(const Screen& s);
nlohmann::json to_json(const Request& r);
nlohmann::json to_json(const Sample& s);

BBox bbox_from_json(const nlohmann::json& j);
OcrText ocr_text_from_json(const nlohmann::json& j);
Entity entity_from_json(const nlohmann::json& j);
Screen screen_from_json(const nlohmann::json& j);
Request request_from_json(const nlohmann::json& j);
Sample sample_from_json(const nlohmann::json& j);

// Newline-delimited JSON, one sample per line.
void write_samples_ndjson(std::ostream& out, const std::vector<Sample>& samples);
std::vector<Sample> read_samples_ndjson(std::istream& in);
void write_samples_file(const std::string& path, const std::vector<Sample>& samples);
std::vector<Sample> read_samples_file(const std::string& path);

void write_screens_ndjson(std::ostream& out, const std::vector<Screen>& screens);
std::vector<Screen> read_screens_ndjson(std::istream& in);

}  // namespace srr
