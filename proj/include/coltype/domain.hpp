#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace coltype {

// Ordered set of semantic type names. Names are trimmed on construction,
// compared by byte equality, and iterate in input order.
class ClassSet {
 public:
  ClassSet() = default;
  static ClassSet from_names(std::vector<std::string> names);

  const std::vector<std::string>& names() const { return names_; }
  std::size_t size() const { return names_.size(); }
  bool empty() const { return names_.empty(); }
  bool contains(std::string_view name) const;
  std::optional<std::size_t> index_of(std::string_view name) const;
  const std::string& at(std::size_t i) const { return names_[i]; }

  bool operator==(const ClassSet& other) const { return names_ == other.names_; }

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Column headers of one table; duplicates within a schema are allowed.
struct TableSchema {
  std::vector<std::string> headers;

  std::size_t width() const { return headers.size(); }
  bool operator==(const TableSchema& other) const = default;
};

// Multiset of schemas: order and multiplicity are significant for sampling.
struct SchemaCollection {
  std::vector<TableSchema> schemas;

  std::size_t size() const { return schemas.size(); }
  bool empty() const { return schemas.empty(); }
  bool operator==(const SchemaCollection& other) const = default;
};

struct DomainConfig {
  ClassSet learn_classes;
  SchemaCollection schemas;

  bool operator==(const DomainConfig& other) const {
    return learn_classes == other.learn_classes && schemas == other.schemas;
  }
};

std::string trim(std::string_view text);

// One class name per line, blank lines ignored.
ClassSet load_class_list(std::istream& source);
void write_class_list(const ClassSet& classes, std::ostream& sink);

// One JSON array of header strings per line, validated against `classes`.
SchemaCollection load_schema_collection(std::istream& source, const ClassSet& classes);
void write_schema_collection(const SchemaCollection& schemas, std::ostream& sink);

DomainConfig load_domain_config(std::istream& class_source, std::istream& schema_source);

// Classes of `classes` that appear in no schema, in class order.
ClassSet compute_missing_classes(const ClassSet& classes, const SchemaCollection& schemas);

// Appends one single-column schema per missing class.
SchemaCollection augment_schemas(const SchemaCollection& schemas, const ClassSet& missing);

}  // namespace coltype
