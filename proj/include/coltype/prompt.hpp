#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coltype/domain.hpp"

namespace coltype {

enum class Presentation { ColumnByColumn, RowByRow };
enum class Prediction { TargetColumn, AllColumns };

// One of the four prompt layouts. Column-by-column presentation with
// target-column prediction is the default.
struct PromptDesign {
  Presentation presentation = Presentation::ColumnByColumn;
  Prediction prediction = Prediction::TargetColumn;

  // Tokens: col-target, col-all, row-target, row-all.
  static PromptDesign parse(std::string_view token);
  std::string token() const;

  bool operator==(const PromptDesign& other) const = default;
};

struct RenderOptions {
  // Cells are cut to this many bytes before joining (no ellipsis marker);
  // the cut never splits a UTF-8 sequence.
  std::size_t max_cell_chars = 60;
};

struct AnnotationPrompt {
  std::string text;
  std::optional<std::size_t> target_column;  // present iff TargetColumn prediction
  ClassSet candidate_classes;
  std::string table_ref;
};

using TableColumns = std::vector<std::vector<std::string>>;

AnnotationPrompt render_prompt(const TableColumns& columns, std::size_t target,
                               const ClassSet& classes, PromptDesign design,
                               const RenderOptions& options = {}, std::string table_ref = {});

// TargetColumn designs yield one prompt per column; AllColumns designs yield
// a single prompt.
std::vector<AnnotationPrompt> render_table_prompts(const TableColumns& columns,
                                                   const ClassSet& classes, PromptDesign design,
                                                   const RenderOptions& options = {},
                                                   std::string table_ref = {});

// Text-only variants for bulk rendering (no per-prompt metadata copies).
std::string render_prompt_text(const TableColumns& columns, std::size_t target,
                               const ClassSet& classes, PromptDesign design,
                               const RenderOptions& options = {});
std::vector<std::string> render_table_prompt_texts(const TableColumns& columns,
                                                   const ClassSet& classes, PromptDesign design,
                                                   const RenderOptions& options = {});

}  // namespace coltype
