#include "srr/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace srr {

using nlohmann::json;

json to_json(const BBox& b) { return json::array({b.x, b.y, b.w, b.h}); }

json to_json(const OcrText& t) {
  return json{{"id", t.id}, {"text", t.text}, {"bbox", to_json(t.bbox)}};
}

json to_json(const Entity& e) {
  return json{{"id", e.id},
              {"ocr_text_id", e.ocr_text_id},
              {"text", e.text},
              {"bbox", to_json(e.bbox)},
              {"category", category_name(e.category)}};
}

json to_json(const Screen& s) {
  json texts = json::array();
  for (const auto& t : s.ocr_texts) texts.push_back(to_json(t));
  json entities = json::array();
  for (const auto& e : s.entities) entities.push_back(to_json(e));
  return json{{"id", s.id},
              {"width", s.width},
              {"height", s.height},
              {"ocr_texts", std::move(texts)},
              {"entities", std::move(entities)}};
}

json to_json(const Request& r) {
  return json{{"id", r.id}, {"raw", r.raw}, {"tokens", r.tokens}};
}

json to_json(const Sample& s) {
  json j{{"request", to_json(s.request)},
         {"subset", subset_name(s.subset)},
         {"gold_ids", s.gold_ids}};
  j["screen"] = s.screen ? to_json(*s.screen) : json(nullptr);
  json cands = json::array();
  for (const auto& e : s.candidates) cands.push_back(to_json(e));
  j["candidates"] = std::move(cands);
  if (s.supervision_tag) {
    j["supervision_tag"] = supervision_tag_name(*s.supervision_tag);
  }
  if (s.ref_type) j["ref_type"] = ref_type_name(*s.ref_type);
  return j;
}

BBox bbox_from_json(const json& j) {
  if (!j.is_array() || j.size() != 4) {
    throw std::runtime_error("bbox must be a 4-element array");
  }
  return BBox{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
              j[3].get<double>()};
}

OcrText ocr_text_from_json(const json& j) {
  return OcrText{j.at("id").get<int>(), j.at("text").get<std::string>(),
                 bbox_from_json(j.at("bbox"))};
}

Entity entity_from_json(const json& j) {
  auto cat = category_from_name(j.at("category").get<std::string>());
  if (!cat) throw std::runtime_error("unknown category");
  Entity e;
  e.id = j.at("id").get<int>();
  e.ocr_text_id = j.at("ocr_text_id").get<int>();
  e.text = j.at("text").get<std::string>();
  e.bbox = bbox_from_json(j.at("bbox"));
  e.category = *cat;
  return e;
}

Screen screen_from_json(const json& j) {
  Screen s;
  s.id = j.at("id").get<std::string>();
  s.width = j.at("width").get<int>();
  s.height = j.at("height").get<int>();
  for (const auto& t : j.at("ocr_texts")) s.ocr_texts.push_back(ocr_text_from_json(t));
  for (const auto& e : j.at("entities")) s.entities.push_back(entity_from_json(e));
  return s;
}

Request request_from_json(const json& j) {
  return Request{j.at("id").get<std::string>(), j.at("raw").get<std::string>(),
                 j.at("tokens").get<std::vector<std::string>>()};
}

Sample sample_from_json(const json& j) {
  Sample s;
  s.request = request_from_json(j.at("request"));
  auto subset = subset_from_name(j.at("subset").get<std::string>());
  if (!subset) throw std::runtime_error("unknown subset");
  s.subset = *subset;
  if (j.contains("screen") && !j.at("screen").is_null()) {
    s.screen = screen_from_json(j.at("screen"));
  }
  for (const auto& c : j.at("candidates")) s.candidates.push_back(entity_from_json(c));
  s.gold_ids = j.at("gold_ids").get<std::vector<int>>();
  if (j.contains("supervision_tag")) {
    auto tag = supervision_tag_from_name(j.at("supervision_tag").get<std::string>());
    if (!tag) throw std::runtime_error("unknown supervision_tag");
    s.supervision_tag = *tag;
  }
  if (j.contains("ref_type")) {
    auto rt = ref_type_from_name(j.at("ref_type").get<std::string>());
    if (!rt) throw std::runtime_error("unknown ref_type");
    s.ref_type = *rt;
  }
  return s;
}

void write_samples_ndjson(std::ostream& out, const std::vector<Sample>& samples) {
  for (const auto& s : samples) out << to_json(s).dump() << "\n";
}

std::vector<Sample> read_samples_ndjson(std::istream& in) {
  std::vector<Sample> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    samples.push_back(sample_from_json(json::parse(line)));
  }
  return samples;
}

void write_samples_file(const std::string& path, const std::vector<Sample>& samples) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  write_samples_ndjson(out, samples);
}

std::vector<Sample> read_samples_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for read: " + path);
  return read_samples_ndjson(in);
}

void write_screens_ndjson(std::ostream& out, const std::vector<Screen>& screens) {
  for (const auto& s : screens) out << to_json(s).dump() << "\n";
}

std::vector<Screen> read_screens_ndjson(std::istream& in) {
  std::vector<Screen> screens;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    screens.push_back(screen_from_json(json::parse(line)));
  }
  return screens;
}

}  // namespace srr
