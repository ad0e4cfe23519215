#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "coltype/domain.hpp"
#include "coltype/parallel.hpp"
#include "coltype/prompt.hpp"
#include "coltype/prototype.hpp"
#include "coltype/rng.hpp"

namespace coltype {

// One (prompt, gold completion) pair with its provenance. For AllColumns
// designs the completion is the ", "-joined header list and column_index is 0.
struct FineTuneSample {
  std::string prompt_text;
  std::string completion;
  std::size_t epoch = 0;
  std::size_t schema_index = 0;  // index into the augmented schema collection
  std::size_t column_index = 0;

  bool operator==(const FineTuneSample& other) const = default;
};

// Privacy regenerates pseudo-tables per epoch (one exported file per epoch);
// Performance pre-generates one fixed dataset.
enum class ExportVariant { Privacy, Performance };
enum class ExportFormat { ChatMessages, PromptCompletion };

ExportVariant parse_export_variant(std::string_view token);
ExportFormat parse_export_format(std::string_view token);
std::string to_token(ExportVariant variant);
std::string to_token(ExportFormat format);

struct ExportManifest {
  ExportVariant variant = ExportVariant::Performance;
  std::size_t epochs = 0;
  double r = 1.0;
  std::size_t k = 3;
  std::size_t prototype_size_e = 0;
  std::uint64_t base_seed = 0;
  PromptDesign design;
  ExportFormat format = ExportFormat::ChatMessages;
  std::vector<std::size_t> samples_per_epoch;
  std::size_t total_samples = 0;
  std::vector<std::string> files;
};

nlohmann::ordered_json manifest_to_json(const ExportManifest& manifest);

// Samples ceil(r*|S|) schemas for one epoch, builds one pseudo-table per
// schema and pairs every rendered prompt with its gold header(s). The config
// must already be missing-class augmented.
std::vector<FineTuneSample> build_epoch_dataset(const DomainConfig& config,
                                                const ClassPrototypeStore& store, double r,
                                                std::size_t k, SamplerSeed seed,
                                                PromptDesign design,
                                                const RenderOptions& options = {});

// Concatenation of build_epoch_dataset for epochs 0..epochs-1, each with its
// own seed stream. Epoch builds are independent, so they may run in parallel;
// output order is always (epoch, schema position, column).
std::vector<FineTuneSample> build_fixed_dataset(const DomainConfig& config,
                                                const ClassPrototypeStore& store, double r,
                                                std::size_t k, std::size_t epochs,
                                                std::uint64_t base_seed, PromptDesign design,
                                                const RenderOptions& options = {},
                                                ExecMode mode = ExecMode::Parallel);

// One JSON object per sample, LF-terminated, fixed key order.
void export_jsonl(const std::vector<FineTuneSample>& samples, std::ostream& sink,
                  ExportFormat format);

// (prompt, completion) pairs read back from an exported stream.
std::vector<std::pair<std::string, std::string>> parse_jsonl_samples(std::istream& source,
                                                                     ExportFormat format);

struct ExportParams {
  ExportVariant variant = ExportVariant::Performance;
  double r = 1.0;
  std::size_t k = 3;
  std::size_t epochs = 20;
  std::uint64_t base_seed = 0;
  PromptDesign design;
  ExportFormat format = ExportFormat::ChatMessages;
  RenderOptions render;
  ExecMode mode = ExecMode::Parallel;
};

// Writes the JSONL file(s) plus "export.manifest.json" under out_dir:
// privacy exports one epoch-NNNN.jsonl per epoch, performance a single
// train.jsonl. Byte-deterministic for fixed inputs and seed.
ExportManifest export_dataset(const DomainConfig& config, const ClassPrototypeStore& store,
                              const ExportParams& params, const std::string& out_dir);

}  // namespace coltype
