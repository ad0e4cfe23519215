#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "coltype/backend.hpp"
#include "coltype/domain.hpp"
#include "coltype/parallel.hpp"
#include "coltype/prompt.hpp"
#include "coltype/tables_io.hpp"

namespace coltype {

enum class MappingKind { ExactMatch, EmbeddingRemap, EmptyOutput };

std::string to_token(MappingKind kind);
MappingKind parse_mapping_kind(std::string_view token);

// One column's prediction. mapped_class is always a member of the prediction
// class set; the raw model output is kept for auditing.
struct ColumnPrediction {
  std::size_t column_index = 0;
  std::string raw_output;
  std::string mapped_class;
  MappingKind kind = MappingKind::ExactMatch;
  double similarity = 0.0;

  bool operator==(const ColumnPrediction& other) const = default;
};

struct TableAnnotation {
  std::string table_ref;
  std::vector<ColumnPrediction> predictions;
  // Set when an all-columns generation produced the wrong number of pieces.
  bool output_count_mismatch = false;

  bool operator==(const TableAnnotation& other) const = default;
};

// dot(u,v) / (|u| |v|); 0 when either norm is zero.
double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

// Candidate embeddings computed once per (backend, class set) and reused
// across a corpus run.
class CandidateEmbeddings {
 public:
  CandidateEmbeddings() = default;
  CandidateEmbeddings(const LlmBackend& backend, const ClassSet& classes);

  const ClassSet& classes() const { return classes_; }
  const EmbeddingVector& at(std::size_t i) const { return vectors_[i]; }
  bool empty() const { return vectors_.empty(); }

 private:
  ClassSet classes_;
  std::vector<EmbeddingVector> vectors_;
};

struct RemapResult {
  std::string mapped_class;
  MappingKind kind = MappingKind::ExactMatch;
  double similarity = 0.0;
};

// Trimmed exact matches short-circuit without any embedding call; otherwise
// the cosine argmax over all candidates wins, ties broken by candidate
// order. Empty output falls back to the first candidate.
RemapResult remap_label(const std::string& raw, const ClassSet& candidates,
                        const LlmBackend& backend, const CandidateEmbeddings* cache = nullptr);

struct AnnotateOptions {
  PromptDesign design;
  RenderOptions render;
  // Classes injected into the prompt; null means the prediction classes.
  // Pointing this at the learning classes gives the remap-only ablation.
  const ClassSet* prompt_classes = nullptr;
  ExecMode mode = ExecMode::Parallel;
};

TableAnnotation annotate_table(const TableColumns& columns, const ClassSet& pred_classes,
                               const LlmBackend& backend, const AnnotateOptions& options = {},
                               const CandidateEmbeddings* cache = nullptr,
                               std::string table_ref = {});

struct TableFailure {
  std::size_t table_index = 0;
  std::string table_ref;
  std::string message;
};

struct CorpusResult {
  std::vector<TableAnnotation> annotations;  // successes, input order
  std::vector<TableFailure> failures;
  std::vector<double> latencies_ms;  // per annotated table, same order
};

// Table-level failures are collected, not fatal. Tables are independent, so
// the corpus may be annotated in parallel; results keep input order.
CorpusResult annotate_corpus(const std::vector<InputTable>& tables, const ClassSet& pred_classes,
                             const LlmBackend& backend, const AnnotateOptions& options = {});

// Line-delimited {"id", "predictions": [{"class","kind","similarity"},...]}.
void write_annotations(const std::vector<TableAnnotation>& annotations, std::ostream& sink);
std::vector<TableAnnotation> load_annotations(std::istream& source);

}  // namespace coltype
