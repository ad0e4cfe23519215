#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "coltype/errors.hpp"
#include "coltype/finetune.hpp"
#include "coltype/mock_backend.hpp"
#include "coltype/pseudotable.hpp"

using namespace coltype;
namespace fs = std::filesystem;

namespace {

DomainConfig four_schema_config() {
  DomainConfig config;
  config.learn_classes = ClassSet::from_names({"Country", "City", "River", "Peak"});
  config.schemas.schemas = {
      TableSchema{{"Country", "City"}},
      TableSchema{{"Country", "City", "River"}},
      TableSchema{{"Peak"}},
      TableSchema{{"River", "Peak"}},
  };
  return config;
}

ClassPrototypeStore mock_store(const ClassSet& classes, std::size_t e) {
  const MockBackend mock;
  return generate_all_prototypes(classes, e, mock);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing " << path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_CASE("target-column sample count is the sum of selected schema widths") {
  const DomainConfig config = four_schema_config();
  const ClassPrototypeStore store = mock_store(config.learn_classes, 10);

  const auto samples =
      build_epoch_dataset(config, store, 1.0, 3, SamplerSeed{1, 0}, PromptDesign{});
  CHECK(samples.size() == 8);  // widths 2+3+1+2

  const auto all_columns = build_epoch_dataset(
      config, store, 1.0, 3, SamplerSeed{1, 0},
      PromptDesign{Presentation::ColumnByColumn, Prediction::AllColumns});
  CHECK(all_columns.size() == 4);
}

TEST_CASE("r=0.25 of four schemas selects one schema worth of samples") {
  const DomainConfig config = four_schema_config();
  const ClassPrototypeStore store = mock_store(config.learn_classes, 10);
  const SamplerSeed seed{9, 0};

  const auto selected = sample_schema_indices(config.schemas.size(), 0.25, seed);
  REQUIRE(selected.size() == 1);
  const std::size_t width = config.schemas.schemas[selected[0]].width();

  const auto samples = build_epoch_dataset(config, store, 0.25, 3, seed, PromptDesign{});
  CHECK(samples.size() == width);
  for (const auto& sample : samples) CHECK(sample.schema_index == selected[0]);
}

TEST_CASE("completions are the gold headers, in schema order") {
  const DomainConfig config = four_schema_config();
  const ClassPrototypeStore store = mock_store(config.learn_classes, 10);

  const auto samples =
      build_epoch_dataset(config, store, 1.0, 3, SamplerSeed{4, 0}, PromptDesign{});
  for (const auto& sample : samples) {
    CHECK(config.learn_classes.contains(sample.completion));
    const TableSchema& schema = config.schemas.schemas[sample.schema_index];
    CHECK(schema.headers[sample.column_index] == sample.completion);
    // prompts carry the learning classes
    CHECK(sample.prompt_text.find("following list: Country, City, River, Peak.") !=
          std::string::npos);
  }

  const auto joined = build_epoch_dataset(
      config, store, 1.0, 3, SamplerSeed{4, 0},
      PromptDesign{Presentation::ColumnByColumn, Prediction::AllColumns});
  for (const auto& sample : joined) {
    const TableSchema& schema = config.schemas.schemas[sample.schema_index];
    std::string expected;
    for (std::size_t i = 0; i < schema.headers.size(); ++i) {
      if (i > 0) expected += ", ";
      expected += schema.headers[i];
    }
    CHECK(sample.completion == expected);
  }
}

TEST_CASE("fixed dataset concatenates epochs in order") {
  DomainConfig config;
  config.learn_classes = ClassSet::from_names({"Country", "City"});
  config.schemas.schemas = {TableSchema{{"Country", "City"}}};
  const ClassPrototypeStore store = mock_store(config.learn_classes, 10);

  const auto samples = build_fixed_dataset(config, store, 1.0, 3, 2, 7, PromptDesign{});
  REQUIRE(samples.size() == 4);
  CHECK(samples[0].epoch == 0);
  CHECK(samples[1].epoch == 0);
  CHECK(samples[2].epoch == 1);
  CHECK(samples[3].epoch == 1);

  CHECK_THROWS_AS(build_fixed_dataset(config, store, 1.0, 3, 0, 7, PromptDesign{}),
                  std::invalid_argument);
}

TEST_CASE("serial and parallel fixed-dataset builds are identical") {
  const DomainConfig config = four_schema_config();
  const ClassPrototypeStore store = mock_store(config.learn_classes, 25);
  const auto serial = build_fixed_dataset(config, store, 1.0, 3, 8, 11, PromptDesign{}, {},
                                          ExecMode::Serial);
  const auto parallel = build_fixed_dataset(config, store, 1.0, 3, 8, 11, PromptDesign{}, {},
                                            ExecMode::Parallel);
  CHECK(serial == parallel);
}

TEST_CASE("export formats are byte-specified") {
  std::vector<FineTuneSample> samples;
  samples.push_back({"What type?\nSemantic Type:", "Country", 0, 0, 0});

  std::ostringstream prompt_out;
  export_jsonl(samples, prompt_out, ExportFormat::PromptCompletion);
  CHECK(prompt_out.str() ==
        "{\"prompt\":\"What type?\\nSemantic Type:\",\"completion\":\"Country\"}\n");

  std::ostringstream chat_out;
  export_jsonl(samples, chat_out, ExportFormat::ChatMessages);
  CHECK(chat_out.str() ==
        "{\"messages\":[{\"role\":\"user\",\"content\":\"What type?\\nSemantic Type:\"},"
        "{\"role\":\"assistant\",\"content\":\"Country\"}]}\n");

  std::ostringstream empty;
  export_jsonl({}, empty, ExportFormat::ChatMessages);
  CHECK(empty.str().empty());
}

TEST_CASE("exports parse back to the same pairs") {
  const DomainConfig config = four_schema_config();
  const ClassPrototypeStore store = mock_store(config.learn_classes, 10);
  const auto samples = build_fixed_dataset(config, store, 1.0, 3, 2, 3, PromptDesign{});

  for (const ExportFormat format :
       {ExportFormat::ChatMessages, ExportFormat::PromptCompletion}) {
    std::ostringstream out;
    export_jsonl(samples, out, format);
    std::istringstream in(out.str());
    const auto pairs = parse_jsonl_samples(in, format);
    REQUIRE(pairs.size() == samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
      CHECK(pairs[i].first == samples[i].prompt_text);
      CHECK(pairs[i].second == samples[i].completion);
    }
  }
}

TEST_CASE("identical inputs and seed give byte-identical exports") {
  const DomainConfig config = four_schema_config();
  const ClassPrototypeStore store = mock_store(config.learn_classes, 40);

  std::ostringstream first, second;
  export_jsonl(build_fixed_dataset(config, store, 0.5, 3, 5, 21, PromptDesign{}), first,
               ExportFormat::ChatMessages);
  export_jsonl(build_fixed_dataset(config, store, 0.5, 3, 5, 21, PromptDesign{}), second,
               ExportFormat::ChatMessages);
  CHECK(first.str() == second.str());
  CHECK(!first.str().empty());
}

TEST_CASE("consecutive epochs of one schema differ for a rich prototype") {
  DomainConfig config;
  config.learn_classes = ClassSet::from_names({"City"});
  config.schemas.schemas = {TableSchema{{"City"}}};
  const ClassPrototypeStore store = mock_store(config.learn_classes, 100);

  const auto epoch0 =
      build_epoch_dataset(config, store, 1.0, 3, SamplerSeed{13, 0}, PromptDesign{});
  const auto epoch1 =
      build_epoch_dataset(config, store, 1.0, 3, SamplerSeed{13, 1}, PromptDesign{});
  REQUIRE(epoch0.size() == epoch1.size());
  bool any_differ = false;
  for (std::size_t i = 0; i < epoch0.size(); ++i)
    if (epoch0[i].prompt_text != epoch1[i].prompt_text) any_differ = true;
  CHECK(any_differ);
}

TEST_CASE("full export covers every learning class as a completion") {
  DomainConfig config;
  config.learn_classes = ClassSet::from_names({"A1", "B2", "C3", "D4", "E5"});
  config.schemas.schemas = {TableSchema{{"A1", "B2"}}};  // C3, D4, E5 missing
  const ClassSet missing = compute_missing_classes(config.learn_classes, config.schemas);
  config.schemas = augment_schemas(config.schemas, missing);
  const ClassPrototypeStore store = mock_store(config.learn_classes, 10);

  const auto samples = build_fixed_dataset(config, store, 1.0, 3, 1, 2, PromptDesign{});
  std::unordered_set<std::string> completions;
  for (const auto& sample : samples) completions.insert(sample.completion);
  for (const auto& name : config.learn_classes.names()) CHECK(completions.count(name) == 1);
}

TEST_CASE("export_dataset writes per-epoch files for privacy, one file otherwise") {
  const DomainConfig config = four_schema_config();
  const ClassPrototypeStore store = mock_store(config.learn_classes, 10);
  const fs::path dir = fs::temp_directory_path() / "coltype_export_test";
  fs::remove_all(dir);

  ExportParams params;
  params.variant = ExportVariant::Privacy;
  params.epochs = 3;
  params.base_seed = 5;
  const ExportManifest manifest = export_dataset(config, store, params, (dir / "priv").string());
  CHECK(manifest.files ==
        std::vector<std::string>{"epoch-0000.jsonl", "epoch-0001.jsonl", "epoch-0002.jsonl"});
  CHECK(fs::exists(dir / "priv" / "export.manifest.json"));
  for (const auto& name : manifest.files) CHECK(fs::exists(dir / "priv" / name));
  CHECK(manifest.samples_per_epoch.size() == 3);
  std::size_t total = 0;
  for (std::size_t count : manifest.samples_per_epoch) total += count;
  CHECK(total == manifest.total_samples);

  params.variant = ExportVariant::Performance;
  const ExportManifest fixed = export_dataset(config, store, params, (dir / "perf").string());
  CHECK(fixed.files == std::vector<std::string>{"train.jsonl"});
  CHECK(fs::exists(dir / "perf" / "train.jsonl"));

  const nlohmann::ordered_json doc = manifest_to_json(fixed);
  CHECK(doc.at("variant") == "performance");
  CHECK(doc.at("epochs") == 3);
  CHECK(doc.at("e") == 10);
  CHECK(doc.at("design") == "col-target");
  CHECK(doc.at("total_samples") == fixed.total_samples);

  // rerunning the export reproduces the same bytes
  const std::string before = read_file(dir / "perf" / "train.jsonl");
  export_dataset(config, store, params, (dir / "perf").string());
  CHECK(read_file(dir / "perf" / "train.jsonl") == before);
  fs::remove_all(dir);
}
