#include "coltype/prompt.hpp"

#include <sstream>
#include <stdexcept>

#include "coltype/errors.hpp"

namespace coltype {

namespace {

constexpr std::string_view kIntroFirst = "These are values of columns in a table. ";
constexpr std::string_view kIntroColumns =
    "Each column starts with Column: followed by the values of that column. ";
constexpr std::string_view kIntroRows =
    "Each row starts with Row: followed by the values of that row. ";
constexpr std::string_view kIntroLast =
    "First, look at all the columns to understand the context of the table.";

constexpr std::string_view kTaskTarget =
    "Your task is to annotate the Target Column using one semantic type that matches the values "
    "of the Target Column and the context of the table from the following list: ";
constexpr std::string_view kTaskAll =
    "Your task is to annotate each column of the table, in order, using one semantic type per "
    "column from the following list: ";

std::string truncate_cell(const std::string& cell, std::size_t limit) {
  if (cell.size() <= limit) return cell;
  std::size_t cut = limit;
  // Do not cut inside a UTF-8 sequence.
  while (cut > 0 && (static_cast<unsigned char>(cell[cut]) & 0xC0) == 0x80) --cut;
  return cell.substr(0, cut);
}

void append_joined(std::string& out, const std::vector<std::string>& items) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += items[i];
  }
}

void validate_table(const TableColumns& columns) {
  if (columns.empty()) throw std::invalid_argument("table has no columns");
  const std::size_t rows = columns.front().size();
  if (rows == 0) throw std::invalid_argument("table has no rows");
  for (std::size_t i = 1; i < columns.size(); ++i)
    if (columns[i].size() != rows)
      throw RaggedTableError("column " + std::to_string(i + 1) + " has " +
                             std::to_string(columns[i].size()) + " rows, expected " +
                             std::to_string(rows));
}

TableColumns truncate_cells(const TableColumns& columns, std::size_t limit) {
  TableColumns cut = columns;
  for (auto& column : cut)
    for (auto& cell : column) cell = truncate_cell(cell, limit);
  return cut;
}

}  // namespace

PromptDesign PromptDesign::parse(std::string_view token) {
  if (token == "col-target") return {Presentation::ColumnByColumn, Prediction::TargetColumn};
  if (token == "col-all") return {Presentation::ColumnByColumn, Prediction::AllColumns};
  if (token == "row-target") return {Presentation::RowByRow, Prediction::TargetColumn};
  if (token == "row-all") return {Presentation::RowByRow, Prediction::AllColumns};
  throw ConfigError("unknown prompt design: \"" + std::string(token) + "\"");
}

std::string PromptDesign::token() const {
  std::string name = presentation == Presentation::ColumnByColumn ? "col" : "row";
  name += prediction == Prediction::TargetColumn ? "-target" : "-all";
  return name;
}

std::string render_prompt_text(const TableColumns& columns, std::size_t target,
                               const ClassSet& classes, PromptDesign design,
                               const RenderOptions& options) {
  validate_table(columns);
  if (design.prediction == Prediction::TargetColumn && target >= columns.size())
    throw ColumnIndexError(target, columns.size());

  const TableColumns cells = truncate_cells(columns, options.max_cell_chars);
  const std::size_t rows = cells.front().size();

  std::string text;
  text += kIntroFirst;
  text += design.presentation == Presentation::ColumnByColumn ? kIntroColumns : kIntroRows;
  text += kIntroLast;
  text += "\n\n";

  if (design.presentation == Presentation::ColumnByColumn) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      text += "Column " + std::to_string(i + 1) + ": ";
      append_joined(text, cells[i]);
      text += '\n';
    }
  } else {
    for (std::size_t row = 0; row < rows; ++row) {
      text += "Row " + std::to_string(row + 1) + ": ";
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i > 0) text += ", ";
        text += cells[i][row];
      }
      text += '\n';
    }
  }
  text += '\n';

  text += design.prediction == Prediction::TargetColumn ? kTaskTarget : kTaskAll;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    if (i > 0) text += ", ";
    text += classes.at(i);
  }
  text += ".\n\n";

  if (design.prediction == Prediction::TargetColumn) {
    text += "Target Column: ";
    append_joined(text, cells[target]);
    text += "\nSemantic Type:";
  } else {
    text += "Semantic Types:";
  }
  return text;
}

std::vector<std::string> render_table_prompt_texts(const TableColumns& columns,
                                                   const ClassSet& classes, PromptDesign design,
                                                   const RenderOptions& options) {
  validate_table(columns);
  std::vector<std::string> texts;
  if (design.prediction == Prediction::TargetColumn) {
    texts.reserve(columns.size());
    for (std::size_t target = 0; target < columns.size(); ++target)
      texts.push_back(render_prompt_text(columns, target, classes, design, options));
  } else {
    texts.push_back(render_prompt_text(columns, 0, classes, design, options));
  }
  return texts;
}

AnnotationPrompt render_prompt(const TableColumns& columns, std::size_t target,
                               const ClassSet& classes, PromptDesign design,
                               const RenderOptions& options, std::string table_ref) {
  AnnotationPrompt prompt;
  prompt.text = render_prompt_text(columns, target, classes, design, options);
  if (design.prediction == Prediction::TargetColumn) prompt.target_column = target;
  prompt.candidate_classes = classes;
  prompt.table_ref = std::move(table_ref);
  return prompt;
}

std::vector<AnnotationPrompt> render_table_prompts(const TableColumns& columns,
                                                   const ClassSet& classes, PromptDesign design,
                                                   const RenderOptions& options,
                                                   std::string table_ref) {
  validate_table(columns);
  std::vector<AnnotationPrompt> prompts;
  if (design.prediction == Prediction::TargetColumn) {
    prompts.reserve(columns.size());
    for (std::size_t target = 0; target < columns.size(); ++target)
      prompts.push_back(render_prompt(columns, target, classes, design, options, table_ref));
  } else {
    prompts.push_back(render_prompt(columns, 0, classes, design, options, table_ref));
  }
  return prompts;
}

}  // namespace coltype
