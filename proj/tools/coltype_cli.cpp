#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "coltype/annotator.hpp"
#include "coltype/backend.hpp"
#include "coltype/domain.hpp"
#include "coltype/errors.hpp"
#include "coltype/evaluator.hpp"
#include "coltype/finetune.hpp"
#include "coltype/prototype.hpp"
#include "coltype/pseudotable.hpp"
#include "coltype/tables_io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace coltype;

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  return out;
}

ClassSet load_classes(const std::string& path) {
  auto in = open_input(path);
  return load_class_list(in);
}

ClassPrototypeStore load_prototypes(const std::string& path) {
  auto in = open_input(path);
  return load_store(in);
}

DomainConfig load_augmented_domain(const std::string& classes_path,
                                   const std::string& schemas_path) {
  DomainConfig config;
  config.learn_classes = load_classes(classes_path);
  auto schemas_in = open_input(schemas_path);
  config.schemas = load_schema_collection(schemas_in, config.learn_classes);
  const ClassSet missing = compute_missing_classes(config.learn_classes, config.schemas);
  config.schemas = augment_schemas(config.schemas, missing);
  return config;
}

int run_gen_prototypes(const std::string& classes_path, std::size_t e,
                       const std::string& backend_path, const std::string& out_path,
                       bool serial) {
  const ClassSet classes = load_classes(classes_path);
  const auto backend = make_backend(BackendConfig::from_file(backend_path));
  const ClassPrototypeStore store = generate_all_prototypes(
      classes, e, *backend, serial ? ExecMode::Serial : ExecMode::Parallel);
  auto out = open_output(out_path);
  save_store(store, out);
  std::cerr << "wrote " << store.size() << " prototypes to " << out_path << '\n';
  return 0;
}

int run_export(const std::string& variant, const std::string& classes_path,
               const std::string& schemas_path, const std::string& prototypes_path, double r,
               std::size_t k, std::size_t epochs, std::uint64_t seed, const std::string& design,
               const std::string& format, const std::string& out_dir, std::size_t cell_limit,
               bool serial) {
  const DomainConfig config = load_augmented_domain(classes_path, schemas_path);
  const ClassPrototypeStore store = load_prototypes(prototypes_path);

  ExportParams params;
  params.variant = parse_export_variant(variant);
  params.r = r;
  params.k = k;
  params.epochs = epochs;
  params.base_seed = seed;
  params.design = PromptDesign::parse(design);
  params.format = parse_export_format(format);
  params.render.max_cell_chars = cell_limit;
  params.mode = serial ? ExecMode::Serial : ExecMode::Parallel;

  const ExportManifest manifest = export_dataset(config, store, params, out_dir);
  std::cerr << "exported " << manifest.total_samples << " samples over " << manifest.epochs
            << " epoch(s) to " << out_dir << '\n';
  return 0;
}

int run_dump_tables(const std::string& classes_path, const std::string& schemas_path,
                    const std::string& prototypes_path, std::size_t k, double r,
                    std::uint64_t seed, std::uint64_t epoch, const std::string& out_path) {
  const DomainConfig config = load_augmented_domain(classes_path, schemas_path);
  const ClassPrototypeStore store = load_prototypes(prototypes_path);

  const SamplerSeed sampler{seed, epoch};
  const auto indices = sample_schema_indices(config.schemas.size(), r, sampler);

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file = open_output(out_path);
    out = &file;
  }
  for (std::size_t position = 0; position < indices.size(); ++position) {
    const PseudoTable table = generate_pseudo_table(config.schemas.schemas[indices[position]],
                                                    store, k, sampler, position);
    nlohmann::ordered_json doc;
    doc["headers"] = table.headers;
    doc["columns"] = table.columns;
    *out << doc.dump() << '\n';
  }
  return 0;
}

int run_annotate(const std::string& tables_path, const std::string& classes_path,
                 const std::string& backend_path, const std::string& design,
                 const std::string& out_path, const std::string& prompt_classes_path,
                 std::size_t cell_limit, bool serial) {
  auto tables_in = open_input(tables_path);
  const auto tables = load_tables(tables_in);
  const ClassSet pred_classes = load_classes(classes_path);
  const auto backend = make_backend(BackendConfig::from_file(backend_path));

  AnnotateOptions options;
  options.design = PromptDesign::parse(design);
  options.render.max_cell_chars = cell_limit;
  options.mode = serial ? ExecMode::Serial : ExecMode::Parallel;
  ClassSet prompt_classes;
  if (!prompt_classes_path.empty()) {
    prompt_classes = load_classes(prompt_classes_path);
    options.prompt_classes = &prompt_classes;
  }

  const CorpusResult result = annotate_corpus(tables, pred_classes, *backend, options);
  auto out = open_output(out_path);
  write_annotations(result.annotations, out);

  double total_ms = 0.0;
  for (double ms : result.latencies_ms) total_ms += ms;
  std::size_t empty_outputs = 0;
  for (const auto& annotation : result.annotations)
    for (const auto& prediction : annotation.predictions)
      if (prediction.kind == MappingKind::EmptyOutput) ++empty_outputs;

  std::cerr << "annotated " << result.annotations.size() << "/" << tables.size() << " tables";
  if (!result.latencies_ms.empty())
    std::cerr << " (avg " << total_ms / static_cast<double>(result.latencies_ms.size())
              << " ms/table)";
  std::cerr << '\n';
  if (empty_outputs > 0)
    std::cerr << "warning: " << empty_outputs
              << " column(s) had empty model output and fell back to the first candidate\n";
  for (const auto& failure : result.failures)
    std::cerr << "failed: " << failure.table_ref << ": " << failure.message << '\n';
  return result.failures.empty() ? 0 : 1;
}

int run_evaluate(const std::string& annotations_path, const std::string& tables_path,
                 const std::string& out_path) {
  auto annotations_in = open_input(annotations_path);
  const auto annotations = load_annotations(annotations_in);
  auto tables_in = open_input(tables_path);
  const auto tables = load_tables(tables_in);

  const EvaluationReport report = evaluate_annotations(annotations, tables);
  if (out_path.empty()) {
    std::cout << report_to_json(report).dump(2) << '\n';
  } else {
    auto out = open_output(out_path);
    out << report_to_json(report).dump(2) << '\n';
  }
  std::cerr << report_summary(report);
  return 0;
}

int run_scenario_file(const std::string& config_path, const std::string& out_path) {
  auto in = open_input(config_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("scenario config is not valid JSON: ") + e.what());
  }
  const fs::path base = fs::path(config_path).parent_path();
  const auto resolve = [&](const std::string& path) {
    const fs::path p(path);
    return p.is_absolute() ? p.string() : (base / p).string();
  };

  ScenarioConfig config;
  config.scenario = parse_scenario(doc.at("scenario").get<std::string>());
  config.learn_classes = load_classes(resolve(doc.at("learn_classes").get<std::string>()));
  config.pred_classes = load_classes(resolve(doc.at("pred_classes").get<std::string>()));
  auto tables_in = open_input(resolve(doc.at("tables").get<std::string>()));
  config.tables = load_tables(tables_in);
  const auto backend =
      make_backend(BackendConfig::from_file(resolve(doc.at("backend").get<std::string>())));
  config.backend = backend.get();
  config.design = PromptDesign::parse(doc.value("design", "col-target"));
  config.render.max_cell_chars = doc.value("cell_limit", config.render.max_cell_chars);
  const std::string prompt_with = doc.value("prompt_with", "pred");
  if (prompt_with == "learn") {
    config.prompt_with = ScenarioConfig::PromptWith::LearnClasses;
  } else if (prompt_with != "pred") {
    throw ConfigError("prompt_with must be \"pred\" or \"learn\"");
  }
  config.mode = doc.value("serial", false) ? ExecMode::Serial : ExecMode::Parallel;

  const EvaluationReport report = run_scenario(config);
  if (out_path.empty()) {
    std::cout << report_to_json(report).dump(2) << '\n';
  } else {
    auto out = open_output(out_path);
    out << report_to_json(report).dump(2) << '\n';
  }
  std::cerr << report_summary(report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Schema-driven column type annotation pipeline"};
  app.require_subcommand(1);

  // gen-prototypes
  std::string gp_classes, gp_backend, gp_out;
  std::size_t gp_e = 500;
  bool gp_serial = false;
  auto* gen = app.add_subcommand("gen-prototypes", "Generate class prototypes via a backend");
  gen->add_option("--classes", gp_classes, "Class list file")->required();
  gen->add_option("--e", gp_e, "Prototype size e");
  gen->add_option("--backend", gp_backend, "Backend config JSON")->required();
  gen->add_option("--out", gp_out, "Output prototype store")->required();
  gen->add_flag("--serial", gp_serial, "Disable parallel generation");

  // export-finetune
  std::string ef_variant, ef_classes, ef_schemas, ef_prototypes, ef_out;
  std::string ef_design = "col-target", ef_format = "chat";
  double ef_r = 1.0;
  std::size_t ef_k = 3, ef_epochs = 20, ef_cell = 60;
  std::uint64_t ef_seed = 0;
  bool ef_serial = false;
  auto* exp = app.add_subcommand("export-finetune", "Export fine-tuning dataset(s)");
  exp->add_option("--variant", ef_variant, "privacy | performance")->required();
  exp->add_option("--classes", ef_classes, "Class list file")->required();
  exp->add_option("--schemas", ef_schemas, "Schema collection file")->required();
  exp->add_option("--prototypes", ef_prototypes, "Prototype store file")->required();
  exp->add_option("--r", ef_r, "Schema sampling ratio in (0,1]");
  exp->add_option("--k", ef_k, "Pseudo-table row size");
  exp->add_option("--epochs", ef_epochs, "Number of epochs");
  exp->add_option("--seed", ef_seed, "Base seed");
  exp->add_option("--design", ef_design, "col-target | col-all | row-target | row-all");
  exp->add_option("--format", ef_format, "chat | prompt");
  exp->add_option("--out", ef_out, "Output directory")->required();
  exp->add_option("--cell-limit", ef_cell, "Max cell length in prompts");
  exp->add_flag("--serial", ef_serial, "Disable parallel epoch builds");

  // dump-tables
  std::string dt_classes, dt_schemas, dt_prototypes, dt_out;
  double dt_r = 1.0;
  std::size_t dt_k = 3;
  std::uint64_t dt_seed = 0, dt_epoch = 0;
  auto* dump = app.add_subcommand("dump-tables", "Dump generated pseudo-tables as JSON lines");
  dump->add_option("--classes", dt_classes, "Class list file")->required();
  dump->add_option("--schemas", dt_schemas, "Schema collection file")->required();
  dump->add_option("--prototypes", dt_prototypes, "Prototype store file")->required();
  dump->add_option("--k", dt_k, "Row size");
  dump->add_option("--r", dt_r, "Schema sampling ratio");
  dump->add_option("--seed", dt_seed, "Base seed");
  dump->add_option("--epoch", dt_epoch, "Epoch index");
  dump->add_option("--out", dt_out, "Output file (default stdout)");

  // annotate
  std::string an_tables, an_classes, an_backend, an_out, an_prompt_classes;
  std::string an_design = "col-target";
  std::size_t an_cell = 60;
  bool an_serial = false;
  auto* ann = app.add_subcommand("annotate", "Annotate tables with a backend");
  ann->add_option("--tables", an_tables, "Tables file (JSON lines)")->required();
  ann->add_option("--classes", an_classes, "Prediction class list")->required();
  ann->add_option("--backend", an_backend, "Backend config JSON")->required();
  ann->add_option("--design", an_design, "Prompt design");
  ann->add_option("--out", an_out, "Output annotations file")->required();
  ann->add_option("--prompt-classes", an_prompt_classes,
                  "Class list injected into prompts (default: prediction classes)");
  ann->add_option("--cell-limit", an_cell, "Max cell length in prompts");
  ann->add_flag("--serial", an_serial, "Disable parallel annotation");

  // evaluate
  std::string ev_annotations, ev_tables, ev_out;
  auto* eva = app.add_subcommand("evaluate", "Score annotations against gold labels");
  eva->add_option("--annotations", ev_annotations, "Annotations file")->required();
  eva->add_option("--tables", ev_tables, "Tables file with gold labels")->required();
  eva->add_option("--out", ev_out, "Report JSON output (default stdout)");

  // run-scenario
  std::string rs_config, rs_out;
  auto* rs = app.add_subcommand("run-scenario", "Annotate and score one scenario config");
  rs->add_option("--config", rs_config, "Scenario config JSON")->required();
  rs->add_option("--out", rs_out, "Report JSON output (default stdout)");

  // co2
  double co2_power = 0.0, co2_hours = 0.0, co2_intensity = 0.0;
  auto* co2 = app.add_subcommand("co2", "Estimate fine-tuning CO2e (kg)");
  co2->add_option("--power-kw", co2_power, "Average total power draw in kW")->required();
  co2->add_option("--hours", co2_hours, "Wall-clock time in hours")->required();
  co2->add_option("--intensity", co2_intensity, "Grid intensity in kgCO2e/kWh")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return run_gen_prototypes(gp_classes, gp_e, gp_backend, gp_out, gp_serial);
    if (exp->parsed())
      return run_export(ef_variant, ef_classes, ef_schemas, ef_prototypes, ef_r, ef_k, ef_epochs,
                        ef_seed, ef_design, ef_format, ef_out, ef_cell, ef_serial);
    if (dump->parsed())
      return run_dump_tables(dt_classes, dt_schemas, dt_prototypes, dt_k, dt_r, dt_seed, dt_epoch,
                             dt_out);
    if (ann->parsed())
      return run_annotate(an_tables, an_classes, an_backend, an_design, an_out, an_prompt_classes,
                          an_cell, an_serial);
    if (eva->parsed()) return run_evaluate(ev_annotations, ev_tables, ev_out);
    if (rs->parsed()) return run_scenario_file(rs_config, rs_out);
    if (co2->parsed()) {
      std::cout << estimate_co2(co2_power, co2_hours, co2_intensity) << '\n';
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 1;
  }
  return 0;
}
