#include "coltype/tables_io.hpp"

#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "coltype/domain.hpp"
#include "coltype/errors.hpp"

namespace coltype {

std::vector<InputTable> load_tables(std::istream& source) {
  std::vector<InputTable> tables;
  std::unordered_set<std::string> seen_ids;
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
    if (!doc.is_object() || !doc.contains("id") || !doc.contains("columns") ||
        !doc["id"].is_string() || !doc["columns"].is_array())
      throw TableFileError("expected {\"id\": string, \"columns\": [[...],...]}", line_number);

    InputTable table;
    table.id = doc["id"].get<std::string>();
    if (!seen_ids.insert(table.id).second)
      throw TableFileError("duplicate table id \"" + table.id + "\"", line_number);
    for (const auto& column : doc["columns"]) {
      if (!column.is_array()) throw TableFileError("columns must be arrays", line_number);
      std::vector<std::string> cells;
      for (const auto& cell : column) {
        if (!cell.is_string()) throw TableFileError("cells must be strings", line_number);
        cells.push_back(cell.get<std::string>());
      }
      table.columns.push_back(std::move(cells));
    }
    if (table.columns.empty()) throw TableFileError("table has no columns", line_number);

    if (doc.contains("gold")) {
      if (!doc["gold"].is_array()) throw TableFileError("gold must be an array", line_number);
      for (const auto& label : doc["gold"]) {
        if (!label.is_string()) throw TableFileError("gold labels must be strings", line_number);
        table.gold.push_back(label.get<std::string>());
      }
      if (table.gold.size() != table.columns.size())
        throw TableFileError("gold has " + std::to_string(table.gold.size()) + " labels for " +
                                 std::to_string(table.columns.size()) + " columns",
                             line_number);
      table.has_gold = true;
    }
    tables.push_back(std::move(table));
  }
  return tables;
}

void write_tables(const std::vector<InputTable>& tables, std::ostream& sink) {
  for (const auto& table : tables) {
    nlohmann::ordered_json doc;
    doc["id"] = table.id;
    doc["columns"] = table.columns;
    if (table.has_gold) doc["gold"] = table.gold;
    sink << doc.dump() << '\n';
  }
}

}  // namespace coltype
