#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "coltype/prompt.hpp"

namespace coltype {

// One test table: line-delimited JSON
// {"id": string, "columns": [[string,...],...], "gold": [class,...]?}.
struct InputTable {
  std::string id;
  TableColumns columns;
  std::vector<std::string> gold;  // empty when absent
  bool has_gold = false;

  bool operator==(const InputTable& other) const = default;
};

std::vector<InputTable> load_tables(std::istream& source);
void write_tables(const std::vector<InputTable>& tables, std::ostream& sink);

}  // namespace coltype
