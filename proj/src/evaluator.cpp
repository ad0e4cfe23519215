#include "coltype/evaluator.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "coltype/errors.hpp"

namespace coltype {

namespace {

void check_lengths(const std::vector<std::string>& predictions,
                   const std::vector<std::string>& gold) {
  if (predictions.size() != gold.size())
    throw EvaluationInputError("predictions and gold differ in length: " +
                               std::to_string(predictions.size()) + " vs " +
                               std::to_string(gold.size()));
  if (predictions.empty()) throw EvaluationInputError("nothing to evaluate");
}

}  // namespace

double micro_f1(const std::vector<std::string>& predictions,
                const std::vector<std::string>& gold) {
  check_lengths(predictions, gold);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i)
    if (predictions[i] == gold[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

std::map<std::string, ClassScores> per_class_f1(const std::vector<std::string>& predictions,
                                                const std::vector<std::string>& gold) {
  check_lengths(predictions, gold);

  struct Tally {
    std::size_t tp = 0, fp = 0, fn = 0, support = 0;
  };
  std::map<std::string, Tally> tallies;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    ++tallies[gold[i]].support;
    if (predictions[i] == gold[i]) {
      ++tallies[gold[i]].tp;
    } else {
      ++tallies[predictions[i]].fp;
      ++tallies[gold[i]].fn;
    }
  }

  std::map<std::string, ClassScores> scores;
  for (const auto& [name, tally] : tallies) {
    ClassScores entry;
    entry.support = tally.support;
    const std::size_t predicted = tally.tp + tally.fp;
    const std::size_t actual = tally.tp + tally.fn;
    entry.precision = predicted ? static_cast<double>(tally.tp) / predicted : 0.0;
    entry.recall = actual ? static_cast<double>(tally.tp) / actual : 0.0;
    entry.f1 = (entry.precision + entry.recall) > 0.0
                   ? 2.0 * entry.precision * entry.recall / (entry.precision + entry.recall)
                   : 0.0;
    scores.emplace(name, entry);
  }
  return scores;
}

EvaluationReport evaluate_predictions(const std::vector<std::string>& predictions,
                                      const std::vector<std::string>& gold) {
  EvaluationReport report;
  report.micro_f1 = micro_f1(predictions, gold);
  report.total_columns = predictions.size();
  for (std::size_t i = 0; i < predictions.size(); ++i)
    if (predictions[i] == gold[i]) ++report.correct_columns;
  report.per_class = per_class_f1(predictions, gold);

  std::map<std::pair<std::string, std::string>, std::size_t> counts;
  for (std::size_t i = 0; i < predictions.size(); ++i) ++counts[{gold[i], predictions[i]}];
  for (const auto& [pair, count] : counts)
    report.confusion.push_back({pair.first, pair.second, count});
  std::stable_sort(report.confusion.begin(), report.confusion.end(),
                   [](const ConfusionEntry& a, const ConfusionEntry& b) {
                     return a.count > b.count;
                   });
  return report;
}

EvaluationReport evaluate_annotations(const std::vector<TableAnnotation>& annotations,
                                      const std::vector<InputTable>& tables) {
  std::unordered_map<std::string, const InputTable*> by_id;
  for (const auto& table : tables) by_id.emplace(table.id, &table);

  std::vector<std::string> predictions;
  std::vector<std::string> gold;
  for (const auto& annotation : annotations) {
    auto it = by_id.find(annotation.table_ref);
    if (it == by_id.end())
      throw EvaluationInputError("no table with id \"" + annotation.table_ref + "\"");
    const InputTable& table = *it->second;
    if (!table.has_gold)
      throw EvaluationInputError("table \"" + table.id + "\" has no gold labels");
    if (table.gold.size() != annotation.predictions.size())
      throw EvaluationInputError("table \"" + table.id + "\" has " +
                                 std::to_string(table.gold.size()) + " gold labels but " +
                                 std::to_string(annotation.predictions.size()) + " predictions");
    for (std::size_t i = 0; i < annotation.predictions.size(); ++i) {
      predictions.push_back(annotation.predictions[i].mapped_class);
      gold.push_back(table.gold[i]);
    }
  }
  return evaluate_predictions(predictions, gold);
}

nlohmann::ordered_json report_to_json(const EvaluationReport& report) {
  nlohmann::ordered_json doc;
  doc["micro_f1"] = report.micro_f1;
  doc["total"] = report.total_columns;
  doc["correct"] = report.correct_columns;
  auto& per_class = doc["per_class"] = nlohmann::ordered_json::object();
  for (const auto& [name, scores] : report.per_class) {
    per_class[name] = {{"precision", scores.precision},
                       {"recall", scores.recall},
                       {"f1", scores.f1},
                       {"support", scores.support}};
  }
  auto& confusion = doc["confusion"] = nlohmann::ordered_json::array();
  for (const auto& entry : report.confusion)
    confusion.push_back({entry.gold, entry.predicted, entry.count});
  return doc;
}

std::string report_summary(const EvaluationReport& report) {
  std::ostringstream out;
  out << "micro-F1 " << report.micro_f1 << " (" << report.correct_columns << "/"
      << report.total_columns << " columns)\n";
  for (const auto& [name, scores] : report.per_class)
    out << "  " << name << ": P " << scores.precision << "  R " << scores.recall << "  F1 "
        << scores.f1 << "  support " << scores.support << '\n';
  return out.str();
}

Scenario parse_scenario(std::string_view token) {
  if (token == "in-domain") return Scenario::InDomain;
  if (token == "cross-domain") return Scenario::CrossDomain;
  if (token == "cross-ontology") return Scenario::CrossOntology;
  throw ConfigError("unknown scenario: \"" + std::string(token) + "\"");
}

std::string to_token(Scenario scenario) {
  switch (scenario) {
    case Scenario::InDomain: return "in-domain";
    case Scenario::CrossDomain: return "cross-domain";
    case Scenario::CrossOntology: return "cross-ontology";
  }
  return "unknown";
}

EvaluationReport run_scenario(const ScenarioConfig& config) {
  if (!config.backend) throw ScenarioConfigError("no backend configured");

  const std::unordered_set<std::string> learn(config.learn_classes.names().begin(),
                                              config.learn_classes.names().end());
  const std::unordered_set<std::string> pred(config.pred_classes.names().begin(),
                                             config.pred_classes.names().end());
  if (config.scenario == Scenario::InDomain && learn != pred)
    throw ScenarioConfigError("in-domain requires the prediction classes to equal the learning "
                              "classes");
  if (config.scenario == Scenario::CrossDomain) {
    for (const auto& name : pred)
      if (!learn.count(name))
        throw ScenarioConfigError("cross-domain prediction class \"" + name +
                                  "\" is not a learning class");
    if (pred.size() >= learn.size())
      throw ScenarioConfigError("cross-domain requires a strict subset of the learning classes");
  }

  for (const auto& table : config.tables) {
    if (!table.has_gold)
      throw EvaluationInputError("table \"" + table.id + "\" has no gold labels");
    for (const auto& label : table.gold)
      if (!pred.count(label)) throw GoldOutsideDomainError(label);
  }

  AnnotateOptions options;
  options.design = config.design;
  options.render = config.render;
  options.mode = config.mode;
  if (config.prompt_with == ScenarioConfig::PromptWith::LearnClasses)
    options.prompt_classes = &config.learn_classes;

  const CorpusResult corpus =
      annotate_corpus(config.tables, config.pred_classes, *config.backend, options);
  return evaluate_annotations(corpus.annotations, config.tables);
}

double estimate_co2(double avg_power_kw, double hours, double intensity_kg_per_kwh) {
  if (avg_power_kw < 0.0 || hours < 0.0 || intensity_kg_per_kwh < 0.0)
    throw DomainError("power, time and intensity must be non-negative");
  return avg_power_kw * hours * intensity_kg_per_kwh;
}

}  // namespace coltype
