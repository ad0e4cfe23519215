#pragma once

#include <cstddef>
#include <vector>

#include "coltype/domain.hpp"
#include "coltype/prototype.hpp"
#include "coltype/rng.hpp"

namespace coltype {

// A synthetic k-row table: column i is filled with values drawn from the
// prototype of headers[i], which is also the column's gold label.
struct PseudoTable {
  std::vector<std::string> headers;
  std::vector<std::vector<std::string>> columns;  // columns[i] has `rows` cells
  std::size_t rows = 0;

  std::size_t width() const { return columns.size(); }
  bool operator==(const PseudoTable& other) const = default;
};

// ceil(r * |schemas|) schemas drawn without replacement from the multiset,
// in draw order. Distinct epochs in the seed give independent draws.
std::vector<std::size_t> sample_schema_indices(std::size_t collection_size, double r,
                                               SamplerSeed seed);
SchemaCollection sample_schemas(const SchemaCollection& schemas, double r, SamplerSeed seed);

// Per column: k distinct prototype values when the prototype has at least k,
// otherwise k draws with replacement. The draw stream is keyed by
// (base_seed, epoch, table_index, column_index), so generation order and
// scheduling cannot change the result, and two columns sharing a header draw
// independently.
PseudoTable generate_pseudo_table(const TableSchema& schema, const ClassPrototypeStore& store,
                                  std::size_t k, SamplerSeed seed, std::size_t table_index);

}  // namespace coltype
