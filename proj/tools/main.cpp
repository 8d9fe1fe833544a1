// enskit — ensemble diagnostics from prediction matrices, plus a small
// training lab for interpolation-threshold sweeps.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "enskit/bagging.hpp"
#include "enskit/bounds.hpp"
#include "enskit/competence.hpp"
#include "enskit/dataset.hpp"
#include "enskit/errors.hpp"
#include "enskit/io.hpp"
#include "enskit/metrics.hpp"
#include "enskit/numeric.hpp"
#include "enskit/pathology.hpp"
#include "enskit/prediction_matrix.hpp"
#include "enskit/rng.hpp"
#include "enskit/svg.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitParse = 1;       // malformed input data
constexpr int kExitConfig = 2;      // invalid flags/parameters/config file
constexpr int kExitStrict = 3;      // --strict and an applicable bound failed

struct GlobalOpts {
  std::string out = ".";
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string tie_rule = "lowest-index";
  double slack = 0.0;
  bool strict = false;
  std::string format = "both";
  bool svg = false;

  bool want_json() const { return format != "csv"; }
  bool want_csv() const { return format != "json"; }
  fs::path out_path(const std::string& name) const {
    return fs::path(out) / name;
  }
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path);
  if (!file) throw enskit::ConfigError("cannot write " + path.string());
  file << content;
}

enskit::PredictionFormat infer_format(const std::string& path,
                                      const std::string& flag) {
  if (flag != "auto") return enskit::parse_prediction_format(flag);
  return fs::path(path).extension() == ".json"
             ? enskit::PredictionFormat::Json
             : enskit::PredictionFormat::Csv;
}

ordered_json competence_json(const enskit::CompetenceVerdict& verdict) {
  ordered_json doc;
  doc["competent"] = verdict.competent;
  doc["max_violation"] = verdict.max_violation;
  if (verdict.violation_t) doc["violation_t"] = *verdict.violation_t;
  else doc["violation_t"] = nullptr;
  return doc;
}

std::string competence_svg(const enskit::CompetenceCurve& curve) {
  std::vector<enskit::SvgSeries> series(2);
  series[0] = {"P(W in [t,1/2))", "#1f77b4", curve.t, curve.lhs};
  series[1] = {"P(W in [1/2,1-t])", "#d62728", curve.t, curve.rhs};
  return enskit::line_chart_svg("competence check", "t", "probability",
                                series);
}

int cmd_analyze(const GlobalOpts& g, const std::string& input,
                const std::string& format_flag) {
  const enskit::PredictionMatrix pm =
      enskit::load_predictions(input, infer_format(input, format_flag));
  const enskit::TieRule rule = enskit::parse_tie_rule(g.tie_rule);
  const enskit::BoundVerification v =
      enskit::verify_bounds(pm, rule, g.slack);

  if (g.want_json()) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["input"] = input;
    const ordered_json diag =
        ordered_json::parse(enskit::diagnostics_to_json(v.report));
    for (const auto& [key, value] : diag.items()) doc[key] = value;
    doc["competence"] = competence_json(v.verdict);
    doc["bounds"] =
        ordered_json::parse(enskit::bound_table_to_json(v.table));
    write_file(g.out_path("report.json"), doc.dump(2) + "\n");
  }
  if (g.want_csv()) {
    write_file(g.out_path("bounds.csv"), enskit::bound_checks_to_csv(v));
    write_file(g.out_path("competence.csv"),
               enskit::competence_verdict_to_csv(v.verdict));
  }
  if (g.svg) {
    write_file(g.out_path("competence.svg"),
               competence_svg(enskit::competence_curve(
                   enskit::error_profile(pm), 201)));
  }

  std::cout << "avg_error " << enskit::format_double(v.report.avg_error)
            << "  mv_error " << enskit::format_double(v.report.mv_error)
            << "  eir "
            << (v.report.eir ? enskit::format_double(*v.report.eir) : "n/a")
            << "  der "
            << (v.report.der ? enskit::format_double(*v.report.der) : "n/a")
            << "\ncompetent " << (v.verdict.competent ? "yes" : "no")
            << " (max violation "
            << enskit::format_double(v.verdict.max_violation) << ")\n";

  if (g.strict) {
    bool violated = false;
    for (const enskit::BoundCheck& check : v.checks) {
      if (check.checked && !check.pass) {
        std::cerr << "strict: bound " << check.bound << " violated by "
                  << enskit::format_double(-check.slack) << "\n";
        violated = true;
      }
    }
    if (violated) return kExitStrict;
  }
  return kExitOk;
}

int cmd_competence(const GlobalOpts& g, const std::string& input,
                   const std::string& format_flag, int points) {
  const enskit::PredictionMatrix pm =
      enskit::load_predictions(input, infer_format(input, format_flag));
  const enskit::ErrorProfile profile = enskit::error_profile(pm);
  const enskit::CompetenceVerdict verdict =
      enskit::competence_check(profile, {}, g.slack);
  const enskit::CompetenceCurve curve =
      enskit::competence_curve(profile, points);

  if (g.want_csv()) {
    write_file(g.out_path("competence.csv"),
               enskit::competence_curve_to_csv(curve));
  }
  if (g.want_json()) {
    write_file(g.out_path("competence.json"),
               enskit::competence_verdict_to_json(verdict) + "\n");
  }
  if (g.svg) write_file(g.out_path("competence.svg"), competence_svg(curve));
  std::cout << enskit::competence_verdict_to_json(verdict) << "\n";
  return kExitOk;
}

int cmd_bounds(const GlobalOpts& g, const std::vector<std::string>& inputs,
               const std::string& format_flag) {
  const enskit::TieRule rule = enskit::parse_tie_rule(g.tie_rule);
  std::vector<enskit::PredictionMatrix> matrices;
  matrices.reserve(inputs.size());
  for (const std::string& input : inputs) {
    matrices.push_back(
        enskit::load_predictions(input, infer_format(input, format_flag)));
  }

  std::string checks_csv = "ensemble_id,bound,value,applicable,checked,pass,slack\n";
  ordered_json tables = ordered_json::array();
  bool violated = false;
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    const enskit::BoundVerification v =
        enskit::verify_bounds(matrices[i], rule, g.slack);
    for (const enskit::BoundCheck& check : v.checks) {
      checks_csv += std::to_string(i) + "," + check.bound + "," +
                    enskit::format_double(check.value) + "," +
                    (check.applicable ? "true" : "false") + "," +
                    (check.checked ? "true" : "false") + "," +
                    (check.pass ? "true" : "false") + "," +
                    enskit::format_double(check.slack) + "\n";
      if (check.checked && !check.pass) {
        violated = true;
        if (g.strict) {
          std::cerr << "strict: ensemble " << i << " bound " << check.bound
                    << " violated\n";
        }
      }
    }
    ordered_json entry;
    entry["ensemble_id"] = i;
    entry["input"] = inputs[i];
    entry["all_pass"] = v.all_pass;
    entry["bounds"] = ordered_json::parse(enskit::bound_table_to_json(v.table));
    tables.push_back(std::move(entry));
  }
  const std::vector<enskit::BoundComparisonRow> comparison =
      enskit::bound_comparison(matrices, rule);

  if (g.want_csv()) {
    write_file(g.out_path("bounds.csv"), checks_csv);
    write_file(g.out_path("comparison.csv"),
               enskit::bound_comparison_to_csv(comparison));
  }
  if (g.want_json()) {
    ordered_json doc;
    doc["schema_version"] = 1;
    doc["ensembles"] = std::move(tables);
    write_file(g.out_path("bounds.json"), doc.dump(2) + "\n");
  }
  std::cout << "checked " << matrices.size() << " ensemble(s); "
            << (violated ? "violations found" : "all applicable bounds hold")
            << "\n";
  return g.strict && violated ? kExitStrict : kExitOk;
}

int cmd_pathological(const GlobalOpts& g, const std::string& kind,
                     double epsilon, std::optional<double> delta,
                     std::size_t m) {
  enskit::PathologySpec spec;
  spec.kind = enskit::parse_pathology_kind(kind);
  spec.epsilon = epsilon;
  spec.m = m;
  if (spec.kind == enskit::PathologyKind::Example2) {
    if (!delta) throw enskit::ConfigError("example2 needs --delta");
    spec.delta = *delta;
  }
  const enskit::PredictionMatrix pm = enskit::make_pathology(spec);
  enskit::save_predictions(pm, g.out_path("pathology.csv"),
                           enskit::PredictionFormat::Csv);
  const enskit::PathologyAudit audit = enskit::pathology_audit(spec);
  const std::string audit_json = enskit::pathology_audit_to_json(audit);
  if (g.want_json()) {
    write_file(g.out_path("audit.json"), audit_json + "\n");
  }
  std::cout << audit_json << "\n";
  return kExitOk;
}

// Sweep configs are JSON:
//   {
//     "family": "random_features" | "cart",
//     "grid": [10, 25, 50],
//     "members": 15,                    // alias "M"
//     "seed": 7,                        // optional; --seed wins if given
//     "dataset": {"path": "data.csv", "test_fraction": 0.25}
//        or      {"n": 400, "d": 10, "k": 2,
//                 "class_sep": 3.0, "label_noise": 0.1},
//     "l2_strength": 1e-6, "max_iters": 500, "tol": 1e-8,   // optional
//     "feature_subset": "sqrt" | "all"                      // optional
//   }
int cmd_train_sweep(const GlobalOpts& g, const std::string& config_path) {
  ordered_json config;
  {
    std::ifstream file(config_path);
    if (!file) {
      throw enskit::ConfigError("cannot open sweep config " + config_path);
    }
    try {
      config = ordered_json::parse(file);
    } catch (const nlohmann::json::exception& e) {
      throw enskit::ConfigError(std::string("invalid sweep config JSON: ") +
                                e.what());
    }
  }

  try {
    enskit::ModelFamily family;
    family.kind =
        enskit::parse_model_family(config.at("family").get<std::string>());
    if (config.contains("l2_strength")) {
      family.logistic.l2_strength = config["l2_strength"].get<double>();
    }
    if (config.contains("max_iters")) {
      family.logistic.max_iters = config["max_iters"].get<std::size_t>();
    }
    if (config.contains("tol")) {
      family.logistic.tol = config["tol"].get<double>();
    }
    if (config.contains("feature_subset")) {
      family.cart_features = enskit::parse_feature_subset(
          config["feature_subset"].get<std::string>());
    }

    std::vector<std::size_t> grid;
    for (const auto& value : config.at("grid")) {
      grid.push_back(value.get<std::size_t>());
    }
    const std::size_t members = config.contains("members")
                                    ? config["members"].get<std::size_t>()
                                    : config.at("M").get<std::size_t>();
    std::uint64_t seed = g.seed;
    if (!g.seed_given && config.contains("seed")) {
      seed = config["seed"].get<std::uint64_t>();
    }

    const ordered_json& ds_cfg = config.at("dataset");
    enskit::Dataset dataset;
    if (ds_cfg.contains("path")) {
      const double test_fraction = ds_cfg.contains("test_fraction")
                                       ? ds_cfg["test_fraction"].get<double>()
                                       : 0.25;
      dataset = enskit::load_dataset_csv(ds_cfg["path"].get<std::string>(),
                                         test_fraction,
                                         enskit::derive_seed(seed, 1));
    } else {
      dataset = enskit::make_blobs(
          ds_cfg.at("n").get<std::size_t>(), ds_cfg.at("d").get<std::size_t>(),
          ds_cfg.at("k").get<int>(),
          ds_cfg.contains("class_sep") ? ds_cfg["class_sep"].get<double>() : 3.0,
          ds_cfg.contains("label_noise") ? ds_cfg["label_noise"].get<double>()
                                         : 0.0,
          enskit::derive_seed(seed, 2));
    }

    const enskit::SweepResult result =
        enskit::capacity_sweep(dataset, family, grid, members, seed);

    if (g.want_csv()) {
      write_file(g.out_path("sweep.csv"), enskit::sweep_to_csv(result));
    }
    if (g.want_json()) {
      write_file(g.out_path("sweep.json"),
                 enskit::sweep_to_json(result) + "\n");
    }
    if (g.svg) {
      enskit::SvgSeries eir{"eir", "#1f77b4", {}, {}};
      enskit::SvgSeries der{"der", "#d62728", {}, {}};
      for (const enskit::SweepRow& row : result.rows) {
        if (row.eir) {
          eir.x.push_back(static_cast<double>(row.capacity));
          eir.y.push_back(*row.eir);
        }
        if (row.der) {
          der.x.push_back(static_cast<double>(row.capacity));
          der.y.push_back(*row.der);
        }
      }
      const std::vector<enskit::SvgSeries> series{eir, der};
      std::optional<double> vline;
      if (result.interpolation_threshold) {
        vline = static_cast<double>(*result.interpolation_threshold);
      }
      write_file(g.out_path("sweep.svg"),
                 enskit::line_chart_svg("capacity sweep", "capacity", "rate",
                                        series, vline, /*log_x=*/true));
    }

    std::cout << "swept " << result.rows.size() << " capacities; threshold ";
    if (result.interpolation_threshold) {
      std::cout << *result.interpolation_threshold << "\n";
    } else {
      std::cout << "not reached\n";
    }
    return kExitOk;
  } catch (const nlohmann::json::exception& e) {
    throw enskit::ConfigError(std::string("sweep config: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ensemble diagnostics: error rates, competence, bounds, and "
               "interpolation-threshold sweeps\n"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--out", g.out, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", g.seed, "master random seed")
                       ->capture_default_str();
  app.add_option("--tie-rule", g.tie_rule, "lowest-index or pessimistic")
      ->check(CLI::IsMember({"lowest-index", "pessimistic"}))
      ->capture_default_str();
  app.add_option("--slack", g.slack, "competence slack (>= 0)")
      ->capture_default_str();
  app.add_flag("--strict", g.strict,
               "exit 3 when an applicable bound is violated");
  app.add_option("--format", g.format, "which outputs to write")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();
  app.add_flag("--svg", g.svg, "also emit SVG charts");

  std::string input, input_format = "auto", points_help;
  std::vector<std::string> inputs;
  std::string kind;
  double epsilon = 0.0;
  std::optional<double> delta;
  std::size_t m = 0;
  int points = 201;
  std::string config_path;

  CLI::App* analyze =
      app.add_subcommand("analyze", "diagnostics + bounds + competence");
  analyze->add_option("input", input, "prediction matrix file")->required();
  analyze->add_option("--input-format", input_format, "csv, json, or auto")
      ->check(CLI::IsMember({"csv", "json", "auto"}));

  CLI::App* competence =
      app.add_subcommand("competence", "competence curve and verdict");
  competence->add_option("input", input, "prediction matrix file")->required();
  competence->add_option("--input-format", input_format, "csv, json, or auto")
      ->check(CLI::IsMember({"csv", "json", "auto"}));
  competence->add_option("--points", points, "curve resolution")
      ->capture_default_str();

  CLI::App* bounds =
      app.add_subcommand("bounds", "bound tables and C-bound comparison");
  bounds->add_option("inputs", inputs, "prediction matrix file(s)")
      ->required();
  bounds->add_option("--input-format", input_format, "csv, json, or auto")
      ->check(CLI::IsMember({"csv", "json", "auto"}));

  CLI::App* pathological = app.add_subcommand(
      "pathological", "generate an adversarial ensemble and audit it");
  pathological->add_option("kind", kind, "example1 or example2")->required();
  pathological->add_option("--epsilon", epsilon, "vote-mass tilt in (0, 1/2)")
      ->required();
  pathological->add_option("--delta", delta,
                           "error-region half-fraction (example2)");
  pathological->add_option("--m", m, "number of examples")->required();

  CLI::App* sweep = app.add_subcommand(
      "train-sweep", "train bagged ensembles over a capacity grid");
  sweep->add_option("config", config_path, "sweep config JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }
  g.seed_given = seed_opt->count() > 0;

  try {
    fs::create_directories(g.out);
    if (analyze->parsed()) return cmd_analyze(g, input, input_format);
    if (competence->parsed()) {
      return cmd_competence(g, input, input_format, points);
    }
    if (bounds->parsed()) return cmd_bounds(g, inputs, input_format);
    if (pathological->parsed()) {
      return cmd_pathological(g, kind, epsilon, delta, m);
    }
    if (sweep->parsed()) return cmd_train_sweep(g, config_path);
    std::cerr << "no subcommand\n";
    return kExitConfig;
  } catch (const enskit::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const enskit::LabelRangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const enskit::WeightError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const enskit::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const enskit::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const enskit::SpecError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const enskit::NonFiniteError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
