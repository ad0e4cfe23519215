#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <map>
#include <random>

#include "coltype/errors.hpp"
#include "coltype/evaluator.hpp"
#include "coltype/mock_backend.hpp"

using namespace coltype;

// Independent micro aggregation from pooled per-class TP/FP/FN counts.
namespace f1_oracle {

double micro(const std::vector<std::string>& predictions, const std::vector<std::string>& gold) {
  std::map<std::string, std::array<std::size_t, 3>> counts;  // tp, fp, fn
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (predictions[i] == gold[i]) {
      ++counts[gold[i]][0];
    } else {
      ++counts[predictions[i]][1];
      ++counts[gold[i]][2];
    }
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& [name, c] : counts) {
    tp += c[0];
    fp += c[1];
    fn += c[2];
  }
  const double precision = tp + fp ? static_cast<double>(tp) / (tp + fp) : 0.0;
  const double recall = tp + fn ? static_cast<double>(tp) / (tp + fn) : 0.0;
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

}  // namespace f1_oracle

TEST_CASE("micro F1 equals accuracy under forced single-label choice") {
  CHECK(micro_f1({"A", "B", "C", "A", "B"}, {"A", "B", "C", "A", "B"}) == 1.0);
  CHECK(micro_f1({"A", "B", "C", "C"}, {"A", "B", "C", "A"}) == 0.75);
  CHECK(micro_f1({"B", "A", "A", "C"}, {"A", "B", "C", "A"}) == 0.0);

  CHECK_THROWS_AS(micro_f1({"A"}, {"A", "B"}), EvaluationInputError);
  CHECK_THROWS_AS(micro_f1({}, {}), EvaluationInputError);
}

TEST_CASE("micro F1 agrees with the pooled TP/FP/FN aggregation") {
  std::mt19937 gen(555);
  const std::vector<std::string> labels{"A", "B", "C", "D", "E"};
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t columns = 1 + gen() % 40;
    std::vector<std::string> predictions, gold;
    for (std::size_t i = 0; i < columns; ++i) {
      gold.push_back(labels[gen() % labels.size()]);
      predictions.push_back(gen() % 3 == 0 ? labels[gen() % labels.size()] : gold.back());
    }
    const double direct = micro_f1(predictions, gold);
    const double pooled = f1_oracle::micro(predictions, gold);
    CHECK(direct == doctest::Approx(pooled).epsilon(1e-12));
  }
}

TEST_CASE("per-class scores on the three-item example") {
  const auto scores = per_class_f1({"A", "B", "B"}, {"A", "A", "B"});
  REQUIRE(scores.size() == 2);
  CHECK(scores.at("A").precision == doctest::Approx(1.0));
  CHECK(scores.at("A").recall == doctest::Approx(0.5));
  CHECK(scores.at("A").f1 == doctest::Approx(2.0 / 3.0));
  CHECK(scores.at("A").support == 2);
  CHECK(scores.at("B").precision == doctest::Approx(0.5));
  CHECK(scores.at("B").recall == doctest::Approx(1.0));
  CHECK(scores.at("B").f1 == doctest::Approx(2.0 / 3.0));
  CHECK(scores.at("B").support == 1);
}

TEST_CASE("classes absent from both sides are omitted; perfect classes score 1") {
  const auto scores = per_class_f1({"A", "B"}, {"A", "B"});
  CHECK(scores.count("C") == 0);
  for (const auto& [name, entry] : scores) {
    CHECK(entry.f1 == 1.0);
    CHECK(entry.precision == 1.0);
    CHECK(entry.recall == 1.0);
  }
}

TEST_CASE("report invariants hold") {
  const EvaluationReport report =
      evaluate_predictions({"A", "B", "B", "C"}, {"A", "B", "C", "C"});
  CHECK(report.total_columns == 4);
  CHECK(report.correct_columns == 3);
  CHECK(report.micro_f1 ==
        static_cast<double>(report.correct_columns) / report.total_columns);

  std::size_t support = 0;
  for (const auto& [name, scores] : report.per_class) support += scores.support;
  CHECK(support == report.total_columns);

  std::size_t confusion_total = 0;
  for (std::size_t i = 1; i < report.confusion.size(); ++i)
    CHECK(report.confusion[i - 1].count >= report.confusion[i].count);
  for (const auto& entry : report.confusion) confusion_total += entry.count;
  CHECK(confusion_total == report.total_columns);

  const nlohmann::ordered_json doc = report_to_json(report);
  CHECK(doc.at("micro_f1") == report.micro_f1);
  CHECK(doc.at("total") == 4);
  CHECK(doc.at("correct") == 3);
  CHECK(doc.at("per_class").contains("B"));
  CHECK(doc.at("confusion").is_array());
}

TEST_CASE("evaluate_annotations joins by table id") {
  std::vector<InputTable> tables;
  tables.push_back({"t0", {{"x", "y", "z"}, {"q", "r", "s"}}, {"A", "B"}, true});
  tables.push_back({"t1", {{"x", "y", "z"}}, {"B"}, true});

  std::vector<TableAnnotation> annotations(2);
  annotations[0].table_ref = "t0";
  annotations[0].predictions = {{0, "A", "A", MappingKind::ExactMatch, 1.0},
                                {1, "A", "A", MappingKind::ExactMatch, 1.0}};
  annotations[1].table_ref = "t1";
  annotations[1].predictions = {{0, "B", "B", MappingKind::ExactMatch, 1.0}};

  const EvaluationReport report = evaluate_annotations(annotations, tables);
  CHECK(report.total_columns == 3);
  CHECK(report.correct_columns == 2);

  annotations[1].table_ref = "missing";
  CHECK_THROWS_AS(evaluate_annotations(annotations, tables), EvaluationInputError);

  annotations[1].table_ref = "t1";
  annotations[1].predictions.push_back({1, "B", "B", MappingKind::ExactMatch, 1.0});
  CHECK_THROWS_AS(evaluate_annotations(annotations, tables), EvaluationInputError);

  tables[0].has_gold = false;
  annotations[1].predictions.pop_back();
  CHECK_THROWS_AS(evaluate_annotations(annotations, tables), EvaluationInputError);
}

namespace {

ScenarioConfig oracle_scenario(MockBackend& mock, std::vector<InputTable>& tables) {
  // learning domain {Country, City, River}; prediction domain {Country, City}
  mock.set_value_class("Canada", "Country");
  mock.set_value_class("Paris", "City");
  tables.clear();
  tables.push_back({"t0", {{"Canada", "UK", "France"}}, {"Country"}, true});
  tables.push_back({"t1", {{"Paris", "Rome", "Oslo"}}, {"City"}, true});

  ScenarioConfig config;
  config.scenario = Scenario::CrossDomain;
  config.learn_classes = ClassSet::from_names({"Country", "City", "River"});
  config.pred_classes = ClassSet::from_names({"Country", "City"});
  config.tables = tables;
  config.backend = &mock;
  return config;
}

}  // namespace

TEST_CASE("scenario invariants are enforced") {
  MockBackend mock;
  std::vector<InputTable> tables;
  ScenarioConfig config = oracle_scenario(mock, tables);

  config.scenario = Scenario::InDomain;  // pred != learn
  CHECK_THROWS_AS(run_scenario(config), ScenarioConfigError);

  config.scenario = Scenario::CrossDomain;
  config.pred_classes = config.learn_classes;  // not a strict subset
  CHECK_THROWS_AS(run_scenario(config), ScenarioConfigError);

  config.pred_classes = ClassSet::from_names({"Country", "Planet"});
  CHECK_THROWS_AS(run_scenario(config), ScenarioConfigError);

  config = oracle_scenario(mock, tables);
  config.tables[0].gold = {"River"};  // outside pred classes
  CHECK_THROWS_AS(run_scenario(config), GoldOutsideDomainError);

  config = oracle_scenario(mock, tables);
  config.backend = nullptr;
  CHECK_THROWS_AS(run_scenario(config), ScenarioConfigError);
}

TEST_CASE("cross-domain oracle scenario scores a perfect micro F1") {
  MockBackend mock;
  std::vector<InputTable> tables;
  const ScenarioConfig config = oracle_scenario(mock, tables);
  const EvaluationReport report = run_scenario(config);
  CHECK(report.micro_f1 == 1.0);
  CHECK(report.total_columns == 2);
}

TEST_CASE("run_scenario equals scoring annotate_corpus directly") {
  MockBackend mock;
  std::vector<InputTable> tables;
  const ScenarioConfig config = oracle_scenario(mock, tables);
  const EvaluationReport via_scenario = run_scenario(config);

  const CorpusResult corpus = annotate_corpus(config.tables, config.pred_classes, mock);
  const EvaluationReport direct = evaluate_annotations(corpus.annotations, config.tables);
  CHECK(via_scenario.micro_f1 == direct.micro_f1);
  CHECK(via_scenario.total_columns == direct.total_columns);
  CHECK(via_scenario.correct_columns == direct.correct_columns);
  CHECK(via_scenario.per_class == direct.per_class);
  CHECK(via_scenario.confusion == direct.confusion);
}

TEST_CASE("cross-ontology with Noisy(0.8) over 1000 columns lands in the binomial band") {
  // learning and prediction ontologies are fully disjoint
  std::vector<std::string> learn_names, pred_names;
  for (int i = 0; i < 10; ++i) {
    learn_names.push_back("Learn" + std::to_string(i));
    pred_names.push_back("Pred" + std::to_string(i));
  }

  MockOptions options;
  options.policy = MockPolicy::Noisy;
  options.noise_p = 0.8;
  options.noise_seed = 2468;
  MockBackend mock(options);

  ScenarioConfig config;
  config.scenario = Scenario::CrossOntology;
  config.learn_classes = ClassSet::from_names(learn_names);
  config.pred_classes = ClassSet::from_names(pred_names);
  config.backend = &mock;

  for (int table_index = 0; table_index < 250; ++table_index) {
    InputTable table;
    table.id = "t" + std::to_string(table_index);
    for (int column = 0; column < 4; ++column) {
      const std::string pred_class = pred_names[(table_index + column) % pred_names.size()];
      std::vector<std::string> cells;
      for (int row = 0; row < 3; ++row) {
        cells.push_back("v" + std::to_string(table_index) + "_" + std::to_string(column) + "_" +
                        std::to_string(row));
      }
      mock.set_value_class(cells.front(), pred_class);
      table.columns.push_back(std::move(cells));
      table.gold.push_back(pred_class);
    }
    table.has_gold = true;
    config.tables.push_back(std::move(table));
  }

  const EvaluationReport report = run_scenario(config);
  CHECK(report.total_columns == 1000);
  CHECK(report.micro_f1 > 0.76);
  CHECK(report.micro_f1 < 0.84);
  // deterministic given the seed
  CHECK(run_scenario(config).micro_f1 == report.micro_f1);
}

TEST_CASE("co2 estimate is the plain product of its factors") {
  CHECK(estimate_co2(0.5, 7.0, 0.4) == 0.5 * 7.0 * 0.4);
  CHECK(estimate_co2(0.5, 7.0, 0.4) == doctest::Approx(1.4).epsilon(1e-12));
  CHECK(estimate_co2(123.0, 0.0, 9.9) == 0.0);
  CHECK(estimate_co2(1.0, 1.0, 1.0) == 1.0);
  CHECK_THROWS_AS(estimate_co2(-0.1, 1.0, 1.0), DomainError);
  CHECK_THROWS_AS(estimate_co2(1.0, -2.0, 1.0), DomainError);
  CHECK_THROWS_AS(estimate_co2(1.0, 1.0, -0.5), DomainError);
}

TEST_CASE("scenario tokens round-trip") {
  for (const char* token : {"in-domain", "cross-domain", "cross-ontology"})
    CHECK(to_token(parse_scenario(token)) == token);
  CHECK_THROWS_AS(parse_scenario("sideways"), ConfigError);
}
