#pragma once

#include <array>
#include <string>
#include <unordered_set>
#include <vector>

#include "srr/types.hpp"

namespace srr {

using Stopwords = std::unordered_set<std::string>;

// Fixed English function-word list shipped with the artifact.
const Stopwords& default_stopwords();
Stopwords load_stopwords(const std::string& path);

// Feature dimensionality constants. C context entities and N neighbor
// texts are fixed at build time; the model's input dims depend on them.
constexpr int kContextEntities = 5;
constexpr int kNeighborTexts = 3;
constexpr int kLocFeatureDim = 5 * (1 + kContextEntities);   // 30
constexpr int kTextFeatureDim = 3 * (1 + kNeighborTexts);    // 12

// [x/K, y/K, (x+w)/K, (y+h)/K, w*h/K^2] with K = max(width, height).
std::array<double, 5> bbox_features(const BBox& b, double k);

// Self block plus up to kContextEntities same-category context entities
// ordered by center distance, zero-padded. Null screen (dummy pool) or a
// zero bbox yields all zeros.
std::vector<double> location_features(const Entity& entity, const Screen* screen);

// |contentwords(text) ∩ request_tokens| / |contentwords(text)|, set
// semantics over the text side; 0 when the text has no content words.
double word_overlap(const std::vector<std::string>& request_tokens,
                    const std::string& text, const Stopwords& stopwords);

// Fraction of the text's digit-run tokens present in the request.
double digit_overlap(const std::vector<std::string>& request_tokens,
                     const std::string& text);

// 1 iff the normalized text (lowercased, separator runs collapsed to one
// space) is a substring of the normalized request.
int containment(const std::string& request_raw, const std::string& text);

// Self triple [contained, word_overlap, digit_overlap] plus the same
// triple for the kNeighborTexts nearest non-self OCR texts in distance
// order, zero-padded.
std::vector<double> text_match_features(const Request& request,
                                        const Entity& entity,
                                        const Screen* screen,
                                        const Stopwords& stopwords);

}  // namespace srr
