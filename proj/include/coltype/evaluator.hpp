#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "coltype/annotator.hpp"
#include "coltype/domain.hpp"
#include "coltype/tables_io.hpp"

namespace coltype {

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;

  bool operator==(const ClassScores& other) const = default;
};

struct ConfusionEntry {
  std::string gold;
  std::string predicted;
  std::size_t count = 0;

  bool operator==(const ConfusionEntry& other) const = default;
};

struct EvaluationReport {
  double micro_f1 = 0.0;
  std::size_t total_columns = 0;
  std::size_t correct_columns = 0;
  std::map<std::string, ClassScores> per_class;
  std::vector<ConfusionEntry> confusion;  // sorted by count descending
};

// Micro-averaged F1 over columns. Every column gets exactly one prediction
// and one gold label, so micro precision == micro recall == accuracy.
double micro_f1(const std::vector<std::string>& predictions,
                const std::vector<std::string>& gold);

std::map<std::string, ClassScores> per_class_f1(const std::vector<std::string>& predictions,
                                                const std::vector<std::string>& gold);

EvaluationReport evaluate_predictions(const std::vector<std::string>& predictions,
                                      const std::vector<std::string>& gold);

// Joins annotations with the tables' gold labels by table id and scores the
// pooled columns.
EvaluationReport evaluate_annotations(const std::vector<TableAnnotation>& annotations,
                                      const std::vector<InputTable>& tables);

nlohmann::ordered_json report_to_json(const EvaluationReport& report);
std::string report_summary(const EvaluationReport& report);

// How the prediction class set relates to the learning class set.
enum class Scenario { InDomain, CrossDomain, CrossOntology };

Scenario parse_scenario(std::string_view token);
std::string to_token(Scenario scenario);

struct ScenarioConfig {
  Scenario scenario = Scenario::InDomain;
  ClassSet learn_classes;
  ClassSet pred_classes;
  std::vector<InputTable> tables;  // must carry gold labels
  const LlmBackend* backend = nullptr;
  PromptDesign design;
  RenderOptions render;
  // Prompts normally carry the prediction classes; LearnClasses gives the
  // remap-only ablation.
  enum class PromptWith { PredClasses, LearnClasses };
  PromptWith prompt_with = PromptWith::PredClasses;
  ExecMode mode = ExecMode::Parallel;
};

// Annotates the corpus and scores it against gold. Fails fast when the
// scenario's class-set relation does not hold or a gold label is outside the
// prediction classes.
EvaluationReport run_scenario(const ScenarioConfig& config);

// kgCO2e = average power draw (kW) x wall-clock hours x grid intensity
// (kgCO2e/kWh).
double estimate_co2(double avg_power_kw, double hours, double intensity_kg_per_kwh);

}  // namespace coltype
