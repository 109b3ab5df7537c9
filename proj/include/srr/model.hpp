#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "srr/model_math.hpp"

namespace srr {

using Params = ParamsT<float>;

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};
class BadMagicError : public ModelFormatError {
 public:
  BadMagicError() : ModelFormatError("not a model file (bad magic)") {}
};
class VersionMismatchError : public ModelFormatError {
 public:
  explicit VersionMismatchError(int got)
      : ModelFormatError("unsupported model format version " +
                         std::to_string(got)) {}
};
class ShapeMismatchError : public ModelFormatError {
 public:
  explicit ShapeMismatchError(const std::string& detail)
      : ModelFormatError("tensor shape mismatch: " + detail) {}
};

struct Prediction {
  std::vector<double> probabilities;  // parallel to sample.candidates
  int argmax_id = -1;                 // lowest entity id on ties
  std::vector<int> selected_ids;      // strictly above threshold
  ModuleWeights weights;
  std::vector<ModuleScores> scores;   // parallel to candidates
  std::vector<double> attn_cat;       // per request token
  std::vector<double> attn_loc;
};

// Modules whose weight is below eps are skipped; their score enters the
// fusion as 0.
ModuleMask module_skip(const ModuleWeights& weights, double eps,
                       const ModuleMask& mask = {});

Prediction resolve(const Sample& sample, const Params& params,
                   const Stopwords& stopwords, double threshold,
                   const ModuleMask& mask = {}, double skip_eps = 0.0);

std::vector<std::uint8_t> serialize(const Params& params);
Params deserialize(const std::vector<std::uint8_t>& bytes);
void save_model(const Params& params, const std::string& path);
Params load_model(const std::string& path);

}  // namespace srr
