#include "coltype/finetune.hpp"

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "coltype/errors.hpp"
#include "coltype/pseudotable.hpp"

namespace coltype {

ExportVariant parse_export_variant(std::string_view token) {
  if (token == "privacy") return ExportVariant::Privacy;
  if (token == "performance") return ExportVariant::Performance;
  throw ConfigError("unknown export variant: \"" + std::string(token) + "\"");
}

ExportFormat parse_export_format(std::string_view token) {
  if (token == "chat") return ExportFormat::ChatMessages;
  if (token == "prompt") return ExportFormat::PromptCompletion;
  throw ConfigError("unknown export format: \"" + std::string(token) + "\"");
}

std::string to_token(ExportVariant variant) {
  return variant == ExportVariant::Privacy ? "privacy" : "performance";
}

std::string to_token(ExportFormat format) {
  return format == ExportFormat::ChatMessages ? "chat" : "prompt";
}

nlohmann::ordered_json manifest_to_json(const ExportManifest& manifest) {
  nlohmann::ordered_json doc;
  doc["variant"] = to_token(manifest.variant);
  doc["epochs"] = manifest.epochs;
  doc["r"] = manifest.r;
  doc["k"] = manifest.k;
  doc["e"] = manifest.prototype_size_e;
  doc["base_seed"] = manifest.base_seed;
  doc["design"] = manifest.design.token();
  doc["format"] = to_token(manifest.format);
  doc["samples_per_epoch"] = manifest.samples_per_epoch;
  doc["total_samples"] = manifest.total_samples;
  doc["files"] = manifest.files;
  return doc;
}

std::vector<FineTuneSample> build_epoch_dataset(const DomainConfig& config,
                                                const ClassPrototypeStore& store, double r,
                                                std::size_t k, SamplerSeed seed,
                                                PromptDesign design,
                                                const RenderOptions& options) {
  const auto selected = sample_schema_indices(config.schemas.size(), r, seed);

  std::vector<FineTuneSample> samples;
  if (design.prediction == Prediction::TargetColumn) {
    std::size_t total = 0;
    for (std::size_t index : selected) total += config.schemas.schemas[index].width();
    samples.reserve(total);
  } else {
    samples.reserve(selected.size());
  }

  for (std::size_t position = 0; position < selected.size(); ++position) {
    const std::size_t schema_index = selected[position];
    const TableSchema& schema = config.schemas.schemas[schema_index];
    const PseudoTable table = generate_pseudo_table(schema, store, k, seed, position);
    auto texts = render_table_prompt_texts(table.columns, config.learn_classes, design, options);

    if (design.prediction == Prediction::TargetColumn) {
      for (std::size_t column = 0; column < texts.size(); ++column) {
        samples.push_back(FineTuneSample{std::move(texts[column]), schema.headers[column],
                                         static_cast<std::size_t>(seed.epoch), schema_index,
                                         column});
      }
    } else {
      std::string joined;
      for (std::size_t i = 0; i < schema.headers.size(); ++i) {
        if (i > 0) joined += ", ";
        joined += schema.headers[i];
      }
      samples.push_back(FineTuneSample{std::move(texts.front()), std::move(joined),
                                       static_cast<std::size_t>(seed.epoch), schema_index, 0});
    }
  }
  return samples;
}

std::vector<FineTuneSample> build_fixed_dataset(const DomainConfig& config,
                                                const ClassPrototypeStore& store, double r,
                                                std::size_t k, std::size_t epochs,
                                                std::uint64_t base_seed, PromptDesign design,
                                                const RenderOptions& options, ExecMode mode) {
  if (epochs == 0) throw std::invalid_argument("epochs must be >= 1");

  std::vector<std::vector<FineTuneSample>> per_epoch(epochs);
  parallel_for(epochs, mode, [&](std::size_t epoch) {
    per_epoch[epoch] =
        build_epoch_dataset(config, store, r, k, SamplerSeed{base_seed, epoch}, design, options);
  });

  std::vector<FineTuneSample> samples;
  for (auto& epoch_samples : per_epoch)
    for (auto& sample : epoch_samples) samples.push_back(std::move(sample));
  return samples;
}

void export_jsonl(const std::vector<FineTuneSample>& samples, std::ostream& sink,
                  ExportFormat format) {
  for (const auto& sample : samples) {
    nlohmann::ordered_json line;
    if (format == ExportFormat::ChatMessages) {
      line["messages"] = nlohmann::ordered_json::array(
          {{{"role", "user"}, {"content", sample.prompt_text}},
           {{"role", "assistant"}, {"content", sample.completion}}});
    } else {
      line["prompt"] = sample.prompt_text;
      line["completion"] = sample.completion;
    }
    sink << line.dump() << '\n';
  }
}

std::vector<std::pair<std::string, std::string>> parse_jsonl_samples(std::istream& source,
                                                                     ExportFormat format) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(source, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ExportError("line " + std::to_string(line_number) + ": " + e.what());
    }
    if (format == ExportFormat::ChatMessages) {
      const auto& messages = doc.at("messages");
      pairs.emplace_back(messages.at(0).at("content").get<std::string>(),
                         messages.at(1).at("content").get<std::string>());
    } else {
      pairs.emplace_back(doc.at("prompt").get<std::string>(),
                         doc.at("completion").get<std::string>());
    }
  }
  return pairs;
}

namespace {

std::string epoch_file_name(std::size_t epoch) {
  char name[32];
  std::snprintf(name, sizeof(name), "epoch-%04zu.jsonl", epoch);
  return name;
}

void write_file(const std::filesystem::path& path, const std::vector<FineTuneSample>& samples,
                ExportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ExportError("cannot write " + path.string());
  export_jsonl(samples, out, format);
}

}  // namespace

ExportManifest export_dataset(const DomainConfig& config, const ClassPrototypeStore& store,
                              const ExportParams& params, const std::string& out_dir) {
  if (params.epochs == 0) throw std::invalid_argument("epochs must be >= 1");

  const std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);

  const auto samples = build_fixed_dataset(config, store, params.r, params.k, params.epochs,
                                           params.base_seed, params.design, params.render,
                                           params.mode);

  ExportManifest manifest;
  manifest.variant = params.variant;
  manifest.epochs = params.epochs;
  manifest.r = params.r;
  manifest.k = params.k;
  manifest.prototype_size_e = store.prototype_size_e();
  manifest.base_seed = params.base_seed;
  manifest.design = params.design;
  manifest.format = params.format;
  manifest.samples_per_epoch.assign(params.epochs, 0);
  for (const auto& sample : samples) ++manifest.samples_per_epoch[sample.epoch];
  manifest.total_samples = samples.size();

  if (params.variant == ExportVariant::Privacy) {
    std::size_t offset = 0;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
      const std::size_t count = manifest.samples_per_epoch[epoch];
      std::vector<FineTuneSample> slice(samples.begin() + offset,
                                        samples.begin() + offset + count);
      offset += count;
      const std::string name = epoch_file_name(epoch);
      write_file(dir / name, slice, params.format);
      manifest.files.push_back(name);
    }
  } else {
    write_file(dir / "train.jsonl", samples, params.format);
    manifest.files.push_back("train.jsonl");
  }

  std::ofstream manifest_out(dir / "export.manifest.json", std::ios::binary);
  if (!manifest_out) throw ExportError("cannot write manifest under " + out_dir);
  manifest_out << manifest_to_json(manifest).dump(2) << '\n';
  return manifest;
}

}  // namespace coltype
