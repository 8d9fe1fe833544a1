#include "enskit/io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "enskit/errors.hpp"
#include "enskit/numeric.hpp"

namespace enskit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

int parse_int(std::string_view cell, const char* what) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(cell.begin(), cell.end(), value);
  if (ec != std::errc{} || ptr != cell.end()) {
    throw ParseError(std::string("expected integer ") + what + ", got '" +
                     std::string(cell) + "'");
  }
  return value;
}

double parse_double(std::string_view cell, const char* what) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.begin(), cell.end(), value);
  if (ec != std::errc{} || ptr != cell.end()) {
    throw ParseError(std::string("expected number ") + what + ", got '" +
                     std::string(cell) + "'");
  }
  return value;
}

// Header line: `# K=<int> m=<int> M=<int>`.
void parse_csv_header(std::string_view line, int& num_classes,
                      std::size_t& num_examples, std::size_t& num_classifiers) {
  std::istringstream fields{std::string(trim(line))};
  std::string hash, k_field, m_field, big_m_field;
  fields >> hash >> k_field >> m_field >> big_m_field;
  if (hash != "#" || !k_field.starts_with("K=") || !m_field.starts_with("m=") ||
      !big_m_field.starts_with("M=") || !fields.eof()) {
    throw ParseError("malformed header, expected '# K=<int> m=<int> M=<int>'");
  }
  num_classes = parse_int(std::string_view(k_field).substr(2), "for K");
  const int m = parse_int(std::string_view(m_field).substr(2), "for m");
  const int big_m = parse_int(std::string_view(big_m_field).substr(2), "for M");
  if (m < 1 || big_m < 1) throw ParseError("header requires m >= 1 and M >= 1");
  num_examples = static_cast<std::size_t>(m);
  num_classifiers = static_cast<std::size_t>(big_m);
}

PredictionMatrix load_csv(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ParseError("cannot open " + path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(file, line);) {
    if (trim(line).empty()) continue;
    lines.push_back(std::move(line));
  }
  if (lines.size() < 3) throw ParseError("prediction CSV truncated");

  int num_classes = 0;
  std::size_t m = 0, big_m = 0;
  parse_csv_header(lines[0], num_classes, m, big_m);

  auto parse_int_row = [&](std::string_view line, std::string_view head,
                           std::vector<int>& out) {
    const auto cells = split_csv(line);
    if (cells.empty() || cells[0] != head) {
      throw ParseError("expected row '" + std::string(head) + "', got '" +
                       std::string(cells.empty() ? "" : cells[0]) + "'");
    }
    if (cells.size() != m + 1) {
      throw ParseError("row '" + std::string(head) + "' has " +
                       std::to_string(cells.size() - 1) + " entries, expected " +
                       std::to_string(m));
    }
    for (std::size_t c = 1; c < cells.size(); ++c) {
      out.push_back(parse_int(cells[c], "in prediction row"));
    }
  };

  std::vector<int> labels;
  parse_int_row(lines[1], "labels", labels);

  if (lines.size() < 2 + big_m) throw ParseError("fewer classifier rows than M");
  std::vector<int> preds;
  preds.reserve(big_m * m);
  for (std::size_t i = 0; i < big_m; ++i) {
    parse_int_row(lines[2 + i], "h" + std::to_string(i + 1), preds);
  }

  std::vector<double> weights;
  std::size_t next = 2 + big_m;
  if (next < lines.size()) {
    const auto cells = split_csv(lines[next]);
    if (cells.empty() || cells[0] != "weights") {
      throw ParseError("unexpected trailing row '" +
                       std::string(cells.empty() ? "" : cells[0]) + "'");
    }
    if (cells.size() != big_m + 1) {
      throw ParseError("weights row has " + std::to_string(cells.size() - 1) +
                       " entries, expected " + std::to_string(big_m));
    }
    for (std::size_t c = 1; c < cells.size(); ++c) {
      weights.push_back(parse_double(cells[c], "in weights row"));
    }
    ++next;
  }
  if (next < lines.size()) throw ParseError("unexpected data after last row");

  return PredictionMatrix(std::move(preds), big_m, std::move(labels),
                          num_classes, std::move(weights));
}

// Reads a label that is either an integer class index or a string looked up
// in `dictionary` (built lazily; resolved after the full file is scanned).
struct LabelReader {
  std::map<std::string, int> dictionary;
  bool saw_string = false;
  bool saw_int = false;

  int read(const nlohmann::json& value) {
    if (value.is_number_integer()) {
      saw_int = true;
      return value.get<int>();
    }
    if (value.is_string()) {
      saw_string = true;
      // Placeholder index; remapped once all distinct strings are known.
      return dictionary.emplace(value.get<std::string>(), 0).first->second;
    }
    throw ParseError("labels and predictions must be integers or strings");
  }
};

PredictionMatrix load_json(const std::filesystem::path& path) {
  std::ifstream file(path);
  if (!file) throw ParseError("cannot open " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(file);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid JSON in " + path.string() + ": " + e.what());
  }
  if (!doc.is_object() || !doc.contains("num_classes") ||
      !doc.contains("labels") || !doc.contains("predictions")) {
    throw ParseError("prediction JSON needs num_classes, labels, predictions");
  }
  if (!doc["num_classes"].is_number_integer()) {
    throw ParseError("num_classes must be an integer");
  }
  const int num_classes = doc["num_classes"].get<int>();
  if (!doc["labels"].is_array() || !doc["predictions"].is_array()) {
    throw ParseError("labels and predictions must be arrays");
  }

  LabelReader reader;
  std::vector<int> labels;
  for (const auto& value : doc["labels"]) labels.push_back(reader.read(value));
  const std::size_t m = labels.size();

  std::vector<int> preds;
  std::size_t big_m = 0;
  for (const auto& row : doc["predictions"]) {
    if (!row.is_array() || row.size() != m) {
      throw ParseError("each prediction row must match the label count");
    }
    for (const auto& value : row) preds.push_back(reader.read(value));
    ++big_m;
  }

  if (reader.saw_string) {
    if (reader.saw_int) {
      throw ParseError("cannot mix integer and string class labels");
    }
    // Dense indices in lexicographic order of the distinct strings.
    int next_index = 0;
    for (auto& [text, index] : reader.dictionary) index = next_index++;
    labels.clear();
    preds.clear();
    for (const auto& value : doc["labels"]) {
      labels.push_back(reader.dictionary.at(value.get<std::string>()));
    }
    for (const auto& row : doc["predictions"]) {
      for (const auto& value : row) {
        preds.push_back(reader.dictionary.at(value.get<std::string>()));
      }
    }
  }

  std::vector<double> weights;
  if (doc.contains("weights")) {
    if (!doc["weights"].is_array()) throw ParseError("weights must be an array");
    for (const auto& value : doc["weights"]) {
      if (!value.is_number()) throw ParseError("weights must be numbers");
      weights.push_back(value.get<double>());
    }
  }

  return PredictionMatrix(std::move(preds), big_m, std::move(labels),
                          num_classes, std::move(weights));
}

}  // namespace

PredictionFormat parse_prediction_format(const std::string& name) {
  if (name == "csv") return PredictionFormat::Csv;
  if (name == "json") return PredictionFormat::Json;
  throw ParseError("unknown prediction format '" + name + "'");
}

PredictionMatrix load_predictions(const std::filesystem::path& path,
                                  PredictionFormat format) {
  return format == PredictionFormat::Csv ? load_csv(path) : load_json(path);
}

std::string predictions_to_csv(const PredictionMatrix& pm) {
  std::string out;
  out += "# K=" + std::to_string(pm.num_classes()) +
         " m=" + std::to_string(pm.num_examples()) +
         " M=" + std::to_string(pm.num_classifiers()) + "\n";
  out += "labels";
  for (int y : pm.labels()) out += "," + std::to_string(y);
  out += "\n";
  for (std::size_t i = 0; i < pm.num_classifiers(); ++i) {
    out += "h" + std::to_string(i + 1);
    for (int p : pm.row(i)) out += "," + std::to_string(p);
    out += "\n";
  }
  out += "weights";
  for (double w : pm.weights()) out += "," + format_double(w);
  out += "\n";
  return out;
}

std::string predictions_to_json(const PredictionMatrix& pm) {
  nlohmann::json doc;
  doc["num_classes"] = pm.num_classes();
  doc["labels"] = pm.labels();
  auto& rows = doc["predictions"] = nlohmann::json::array();
  for (std::size_t i = 0; i < pm.num_classifiers(); ++i) {
    const auto row = pm.row(i);
    rows.push_back(std::vector<int>(row.begin(), row.end()));
  }
  doc["weights"] = pm.weights();
  return doc.dump(2) + "\n";
}

void save_predictions(const PredictionMatrix& pm,
                      const std::filesystem::path& path,
                      PredictionFormat format) {
  std::ofstream file(path);
  if (!file) throw ParseError("cannot write " + path.string());
  file << (format == PredictionFormat::Csv ? predictions_to_csv(pm)
                                           : predictions_to_json(pm));
}

}  // namespace enskit
