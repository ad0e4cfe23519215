#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "coltype/domain.hpp"
#include "coltype/parallel.hpp"

namespace coltype {

class LlmBackend;

// Up to e representative values for one semantic type. Values are trimmed,
// non-empty and unique.
struct ClassPrototype {
  std::string class_name;
  std::vector<std::string> values;

  bool operator==(const ClassPrototype& other) const = default;
};

class ClassPrototypeStore {
 public:
  ClassPrototypeStore() = default;
  ClassPrototypeStore(std::vector<ClassPrototype> entries, std::size_t prototype_size_e);

  const std::vector<ClassPrototype>& entries() const { return entries_; }
  std::size_t prototype_size_e() const { return prototype_size_e_; }
  std::size_t size() const { return entries_.size(); }

  const ClassPrototype* find(std::string_view class_name) const;
  const ClassPrototype& at(std::string_view class_name) const;

  bool operator==(const ClassPrototypeStore& other) const {
    return entries_ == other.entries_ && prototype_size_e_ == other.prototype_size_e_;
  }

 private:
  std::vector<ClassPrototype> entries_;
  std::unordered_map<std::string, std::size_t> index_;
  std::size_t prototype_size_e_ = 0;
};

// The generation request sent to the prototype backend. The trailing format
// instruction keeps the response parseable line-by-line.
std::string build_prototype_prompt(std::string_view class_name, std::size_t e);

// Splits the raw completion into values: one per line, trimmed, enumeration
// markers ("1. ", "2) ") stripped, duplicates dropped, truncated to e.
std::vector<std::string> parse_prototype_response(const std::string& raw, std::size_t e);

ClassPrototype generate_class_prototype(const std::string& class_name, std::size_t e,
                                        const LlmBackend& backend);

ClassPrototypeStore generate_all_prototypes(const ClassSet& classes, std::size_t e,
                                            const LlmBackend& backend,
                                            ExecMode mode = ExecMode::Parallel);

// Line-delimited {"class": ..., "values": [...]} records in store order.
void save_store(const ClassPrototypeStore& store, std::ostream& sink);
ClassPrototypeStore load_store(std::istream& source,
                               std::optional<std::size_t> prototype_size_e = std::nullopt);

}  // namespace coltype
