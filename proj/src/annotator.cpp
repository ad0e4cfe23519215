#include "coltype/annotator.hpp"

#include <chrono>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "coltype/errors.hpp"

namespace coltype {

std::string to_token(MappingKind kind) {
  switch (kind) {
    case MappingKind::ExactMatch: return "exact_match";
    case MappingKind::EmbeddingRemap: return "embedding_remap";
    case MappingKind::EmptyOutput: return "empty_output";
  }
  return "unknown";
}

MappingKind parse_mapping_kind(std::string_view token) {
  if (token == "exact_match") return MappingKind::ExactMatch;
  if (token == "embedding_remap") return MappingKind::EmbeddingRemap;
  if (token == "empty_output") return MappingKind::EmptyOutput;
  throw ConfigError("unknown mapping kind: \"" + std::string(token) + "\"");
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
  if (u.dimension() != v.dimension()) throw DimensionError(u.dimension(), v.dimension());
  double dot = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) dot += u.values[i] * v.values[i];
  const double norm_u = u.norm();
  const double norm_v = v.norm();
  if (norm_u == 0.0 || norm_v == 0.0) return 0.0;
  return dot / (norm_u * norm_v);
}

CandidateEmbeddings::CandidateEmbeddings(const LlmBackend& backend, const ClassSet& classes)
    : classes_(classes) {
  vectors_.reserve(classes.size());
  for (const auto& name : classes.names()) vectors_.push_back(backend.embed(name));
}

RemapResult remap_label(const std::string& raw, const ClassSet& candidates,
                        const LlmBackend& backend, const CandidateEmbeddings* cache) {
  if (candidates.empty()) throw std::invalid_argument("remap requires at least one candidate");

  const std::string trimmed = trim(raw);
  if (trimmed.empty()) return {candidates.at(0), MappingKind::EmptyOutput, 0.0};
  if (candidates.contains(trimmed)) return {trimmed, MappingKind::ExactMatch, 1.0};

  CandidateEmbeddings local;
  if (!cache || !(cache->classes() == candidates)) {
    local = CandidateEmbeddings(backend, candidates);
    cache = &local;
  }

  const EmbeddingVector raw_vector = backend.embed(trimmed);
  std::size_t best = 0;
  double best_similarity = cosine_similarity(raw_vector, cache->at(0));
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    const double similarity = cosine_similarity(raw_vector, cache->at(i));
    if (similarity > best_similarity) {
      best_similarity = similarity;
      best = i;
    }
  }
  return {candidates.at(best), MappingKind::EmbeddingRemap, best_similarity};
}

namespace {

std::vector<std::string> split_pieces(std::string_view joined) {
  std::vector<std::string> pieces;
  std::size_t pos = 0;
  while (pos <= joined.size()) {
    const std::size_t next = joined.find(", ", pos);
    if (next == std::string_view::npos) {
      pieces.emplace_back(joined.substr(pos));
      break;
    }
    pieces.emplace_back(joined.substr(pos, next - pos));
    pos = next + 2;
  }
  return pieces;
}

}  // namespace

TableAnnotation annotate_table(const TableColumns& columns, const ClassSet& pred_classes,
                               const LlmBackend& backend, const AnnotateOptions& options,
                               const CandidateEmbeddings* cache, std::string table_ref) {
  const ClassSet& prompt_classes =
      options.prompt_classes ? *options.prompt_classes : pred_classes;

  TableAnnotation annotation;
  annotation.table_ref = std::move(table_ref);

  const auto prompts =
      render_table_prompt_texts(columns, prompt_classes, options.design, options.render);

  if (options.design.prediction == Prediction::TargetColumn) {
    annotation.predictions.reserve(prompts.size());
    for (std::size_t column = 0; column < prompts.size(); ++column) {
      const std::string raw = backend.generate(prompts[column]);
      const RemapResult mapped = remap_label(raw, pred_classes, backend, cache);
      annotation.predictions.push_back(
          {column, raw, mapped.mapped_class, mapped.kind, mapped.similarity});
    }
  } else {
    const std::string raw = backend.generate(prompts.front());
    auto pieces = split_pieces(trim(raw));
    if (pieces.size() != columns.size()) {
      annotation.output_count_mismatch = true;
      pieces.resize(columns.size());  // short outputs pad with "", long ones truncate
    }
    for (std::size_t column = 0; column < columns.size(); ++column) {
      const RemapResult mapped = remap_label(pieces[column], pred_classes, backend, cache);
      annotation.predictions.push_back(
          {column, pieces[column], mapped.mapped_class, mapped.kind, mapped.similarity});
    }
  }
  return annotation;
}

CorpusResult annotate_corpus(const std::vector<InputTable>& tables, const ClassSet& pred_classes,
                             const LlmBackend& backend, const AnnotateOptions& options) {
  const CandidateEmbeddings cache(backend, pred_classes);

  struct Slot {
    TableAnnotation annotation;
    std::string failure;
    double latency_ms = 0.0;
    bool ok = false;
  };
  std::vector<Slot> slots(tables.size());

  parallel_for(tables.size(), options.mode, [&](std::size_t i) {
    const auto start = std::chrono::steady_clock::now();
    try {
      slots[i].annotation =
          annotate_table(tables[i].columns, pred_classes, backend, options, &cache, tables[i].id);
      slots[i].ok = true;
    } catch (const std::exception& err) {
      slots[i].failure = err.what();
    }
    slots[i].latency_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
            .count();
  });

  CorpusResult result;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i].ok) {
      result.annotations.push_back(std::move(slots[i].annotation));
      result.latencies_ms.push_back(slots[i].latency_ms);
    } else {
      result.failures.push_back({i, tables[i].id, std::move(slots[i].failure)});
    }
  }
  return result;
}

void write_annotations(const std::vector<TableAnnotation>& annotations, std::ostream& sink) {
  for (const auto& annotation : annotations) {
    nlohmann::ordered_json doc;
    doc["id"] = annotation.table_ref;
    auto& predictions = doc["predictions"] = nlohmann::ordered_json::array();
    for (const auto& prediction : annotation.predictions) {
      nlohmann::ordered_json entry;
      entry["class"] = prediction.mapped_class;
      entry["kind"] = to_token(prediction.kind);
      entry["similarity"] = prediction.similarity;
      predictions.push_back(std::move(entry));
    }
    sink << doc.dump() << '\n';
  }
}

std::vector<TableAnnotation> load_annotations(std::istream& source) {
  std::vector<TableAnnotation> annotations;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(source, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw TableFileError(e.what(), line_number);
    }
    TableAnnotation annotation;
    try {
      annotation.table_ref = doc.at("id").get<std::string>();
      std::size_t column = 0;
      for (const auto& entry : doc.at("predictions")) {
        ColumnPrediction prediction;
        prediction.column_index = column++;
        prediction.mapped_class = entry.at("class").get<std::string>();
        prediction.kind = parse_mapping_kind(entry.at("kind").get<std::string>());
        prediction.similarity = entry.at("similarity").get<double>();
        annotation.predictions.push_back(std::move(prediction));
      }
    } catch (const nlohmann::json::exception& e) {
      throw TableFileError(e.what(), line_number);
    }
    annotations.push_back(std::move(annotation));
  }
  return annotations;
}

}  // namespace coltype
