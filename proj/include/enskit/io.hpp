#pragma once

#include <filesystem>
#include <string>

#include "enskit/prediction_matrix.hpp"

namespace enskit {

enum class PredictionFormat { Csv, Json };

// Parses a format name ("csv" or "json"); throws ParseError otherwise.
PredictionFormat parse_prediction_format(const std::string& name);

// Loads a prediction matrix from disk.
//
// CSV layout:
//   # K=<int> m=<int> M=<int>
//   labels,<y_1>,...,<y_m>
//   h1,<p_1>,...,<p_m>
//   ...
//   hM,<p_1>,...,<p_m>
//   weights,<w_1>,...,<w_M>      (optional)
//
// JSON layout: {"num_classes": K, "labels": [...], "predictions": [[...],...],
// "weights": [...]}. JSON labels/predictions may be strings; distinct strings
// are sorted and mapped to dense integer classes.
//
// Throws ParseError on malformed input; LabelRangeError / WeightError
// propagate from PredictionMatrix validation.
PredictionMatrix load_predictions(const std::filesystem::path& path,
                                  PredictionFormat format);

// Serializes a prediction matrix. Doubles are written in shortest
// round-trip form, so load(save(pm)) == pm exactly.
void save_predictions(const PredictionMatrix& pm,
                      const std::filesystem::path& path,
                      PredictionFormat format);

std::string predictions_to_csv(const PredictionMatrix& pm);
std::string predictions_to_json(const PredictionMatrix& pm);

}  // namespace enskit
