#include "coltype/domain.hpp"

#include <istream>
#include <ostream>
#include <unordered_set>

#include <json.hpp>

#include "coltype/errors.hpp"

namespace coltype {

std::string trim(std::string_view text) {
  const char* ws = " \t\r\n\f\v";
  const auto begin = text.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  const auto end = text.find_last_not_of(ws);
  return std::string(text.substr(begin, end - begin + 1));
}

ClassSet ClassSet::from_names(std::vector<std::string> names) {
  ClassSet set;
  set.names_.reserve(names.size());
  for (auto& raw : names) {
    std::string name = trim(raw);
    if (name.empty()) throw std::invalid_argument("class names must be non-empty");
    if (set.index_.count(name)) throw DuplicateClassError(name);
    set.index_.emplace(name, set.names_.size());
    set.names_.push_back(std::move(name));
  }
  return set;
}

bool ClassSet::contains(std::string_view name) const {
  return index_.find(std::string(name)) != index_.end();
}

std::optional<std::size_t> ClassSet::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

ClassSet load_class_list(std::istream& source) {
  std::vector<std::string> names;
  std::string line;
  while (std::getline(source, line)) {
    std::string name = trim(line);
    if (name.empty()) continue;
    names.push_back(std::move(name));
  }
  if (names.empty()) throw EmptyClassListError();
  return ClassSet::from_names(std::move(names));
}

void write_class_list(const ClassSet& classes, std::ostream& sink) {
  for (const auto& name : classes.names()) sink << name << '\n';
}

SchemaCollection load_schema_collection(std::istream& source, const ClassSet& classes) {
  SchemaCollection collection;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(source, line)) {
    ++line_number;
    if (trim(line).empty()) continue;

    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw MalformedSchemaError(e.what(), line_number);
    }
    if (!parsed.is_array()) throw MalformedSchemaError("expected a JSON array", line_number);
    if (parsed.empty()) throw MalformedSchemaError("schema has no headers", line_number);

    TableSchema schema;
    schema.headers.reserve(parsed.size());
    for (const auto& item : parsed) {
      if (!item.is_string()) throw MalformedSchemaError("headers must be strings", line_number);
      std::string header = trim(item.get<std::string>());
      if (header.empty()) throw MalformedSchemaError("headers must be non-empty", line_number);
      if (!classes.contains(header)) throw UnknownClassError(header, line_number);
      schema.headers.push_back(std::move(header));
    }
    collection.schemas.push_back(std::move(schema));
  }
  return collection;
}

void write_schema_collection(const SchemaCollection& schemas, std::ostream& sink) {
  for (const auto& schema : schemas.schemas) {
    nlohmann::json line = nlohmann::json::array();
    for (const auto& header : schema.headers) line.push_back(header);
    sink << line.dump() << '\n';
  }
}

DomainConfig load_domain_config(std::istream& class_source, std::istream& schema_source) {
  DomainConfig config;
  config.learn_classes = load_class_list(class_source);
  config.schemas = load_schema_collection(schema_source, config.learn_classes);
  return config;
}

ClassSet compute_missing_classes(const ClassSet& classes, const SchemaCollection& schemas) {
  std::unordered_set<std::string_view> covered;
  for (const auto& schema : schemas.schemas)
    for (const auto& header : schema.headers) covered.insert(header);

  std::vector<std::string> missing;
  for (const auto& name : classes.names())
    if (!covered.count(name)) missing.push_back(name);
  return ClassSet::from_names(std::move(missing));
}

SchemaCollection augment_schemas(const SchemaCollection& schemas, const ClassSet& missing) {
  SchemaCollection result = schemas;
  result.schemas.reserve(schemas.size() + missing.size());
  for (const auto& name : missing.names()) result.schemas.push_back(TableSchema{{name}});
  return result;
}

}  // namespace coltype
