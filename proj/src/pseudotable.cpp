#include "coltype/pseudotable.hpp"

#include <cmath>
#include <stdexcept>

#include "coltype/errors.hpp"

namespace coltype {

std::vector<std::size_t> sample_schema_indices(std::size_t collection_size, double r,
                                               SamplerSeed seed) {
  if (collection_size == 0) throw EmptyCollectionError();
  if (!(r > 0.0) || r > 1.0) throw std::invalid_argument("sampling ratio r must be in (0, 1]");

  const auto count =
      static_cast<std::size_t>(std::ceil(r * static_cast<double>(collection_size)));
  rng::Stream stream(rng::derive_key({seed.base_seed, seed.epoch, rng::kStreamSchemaSample}));
  return rng::sample_without_replacement(collection_size, count, stream);
}

SchemaCollection sample_schemas(const SchemaCollection& schemas, double r, SamplerSeed seed) {
  SchemaCollection selected;
  for (std::size_t index : sample_schema_indices(schemas.size(), r, seed))
    selected.schemas.push_back(schemas.schemas[index]);
  return selected;
}

PseudoTable generate_pseudo_table(const TableSchema& schema, const ClassPrototypeStore& store,
                                  std::size_t k, SamplerSeed seed, std::size_t table_index) {
  if (k == 0) throw std::invalid_argument("row size k must be >= 1");

  PseudoTable table;
  table.headers = schema.headers;
  table.rows = k;
  table.columns.resize(schema.headers.size());

  for (std::size_t column = 0; column < schema.headers.size(); ++column) {
    const ClassPrototype& prototype = store.at(schema.headers[column]);
    rng::Stream stream(rng::derive_key(
        {seed.base_seed, seed.epoch, rng::kStreamTableCells, table_index, column}));

    auto& cells = table.columns[column];
    cells.reserve(k);
    if (prototype.values.size() >= k) {
      for (std::size_t index : rng::sample_without_replacement(prototype.values.size(), k, stream))
        cells.push_back(prototype.values[index]);
    } else {
      for (std::size_t row = 0; row < k; ++row)
        cells.push_back(
            prototype.values[static_cast<std::size_t>(stream.next_below(prototype.values.size()))]);
    }
  }
  return table;
}

}  // namespace coltype
