#include "coltype/prototype.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

#include "coltype/backend.hpp"
#include "coltype/errors.hpp"

namespace coltype {

ClassPrototypeStore::ClassPrototypeStore(std::vector<ClassPrototype> entries,
                                         std::size_t prototype_size_e)
    : entries_(std::move(entries)), prototype_size_e_(prototype_size_e) {
  for (std::size_t i = 0; i < entries_.size(); ++i) index_.emplace(entries_[i].class_name, i);
}

const ClassPrototype* ClassPrototypeStore::find(std::string_view class_name) const {
  auto it = index_.find(std::string(class_name));
  return it == index_.end() ? nullptr : &entries_[it->second];
}

const ClassPrototype& ClassPrototypeStore::at(std::string_view class_name) const {
  const ClassPrototype* prototype = find(class_name);
  if (!prototype) throw MissingPrototypeError(std::string(class_name));
  return *prototype;
}

std::string build_prototype_prompt(std::string_view class_name, std::size_t e) {
  if (e == 0) throw std::invalid_argument("prototype size e must be >= 1");
  std::ostringstream prompt;
  prompt << "Generate " << e << " real-world examples of the semantic type " << class_name
         << " commonly found in web tables. Return one example per line with no numbering or "
            "extra text.";
  return prompt.str();
}

std::vector<std::string> parse_prototype_response(const std::string& raw, std::size_t e) {
  std::vector<std::string> values;
  std::unordered_set<std::string> seen;
  std::istringstream lines(raw);
  std::string line;
  while (values.size() < e && std::getline(lines, line)) {
    std::string value = trim(line);
    // Leading enumeration marker: digits, '.' or ')', one space.
    std::size_t digits = 0;
    while (digits < value.size() && value[digits] >= '0' && value[digits] <= '9') ++digits;
    if (digits > 0 && digits + 1 < value.size() &&
        (value[digits] == '.' || value[digits] == ')') && value[digits + 1] == ' ') {
      value = trim(value.substr(digits + 2));
    }
    if (value.empty()) continue;
    if (!seen.insert(value).second) continue;
    values.push_back(std::move(value));
  }
  if (values.empty()) throw EmptyPrototypeError("<unnamed>");
  return values;
}

ClassPrototype generate_class_prototype(const std::string& class_name, std::size_t e,
                                        const LlmBackend& backend) {
  std::string raw;
  try {
    raw = backend.generate(build_prototype_prompt(class_name, e));
  } catch (const BackendError& err) {
    throw BackendError("prototype generation for class \"" + class_name + "\": " + err.what());
  }
  try {
    return ClassPrototype{class_name, parse_prototype_response(raw, e)};
  } catch (const EmptyPrototypeError&) {
    throw EmptyPrototypeError(class_name);
  }
}

ClassPrototypeStore generate_all_prototypes(const ClassSet& classes, std::size_t e,
                                            const LlmBackend& backend, ExecMode mode) {
  std::vector<ClassPrototype> entries(classes.size());
  std::vector<std::string> failures(classes.size());

  parallel_for(classes.size(), mode, [&](std::size_t i) {
    try {
      entries[i] = generate_class_prototype(classes.at(i), e, backend);
    } catch (const std::exception& err) {
      failures[i] = err.what();
    }
  });

  std::string aggregated;
  for (const auto& failure : failures) {
    if (failure.empty()) continue;
    if (!aggregated.empty()) aggregated += "; ";
    aggregated += failure;
  }
  if (!aggregated.empty()) throw Error("prototype generation failed: " + aggregated);

  return ClassPrototypeStore(std::move(entries), e);
}

void save_store(const ClassPrototypeStore& store, std::ostream& sink) {
  for (const auto& prototype : store.entries()) {
    nlohmann::ordered_json line;
    line["class"] = prototype.class_name;
    line["values"] = prototype.values;
    sink << line.dump() << '\n';
  }
}

ClassPrototypeStore load_store(std::istream& source, std::optional<std::size_t> prototype_size_e) {
  std::vector<ClassPrototype> entries;
  std::unordered_set<std::string> seen_classes;
  std::string line;
  std::size_t line_number = 0;
  std::size_t widest = 0;

  while (std::getline(source, line)) {
    ++line_number;
    if (trim(line).empty()) continue;

    nlohmann::json parsed;
    try {
      parsed = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw StoreFormatError(e.what(), line_number);
    }
    if (!parsed.is_object() || !parsed.contains("class") || !parsed.contains("values") ||
        !parsed["class"].is_string() || !parsed["values"].is_array())
      throw StoreFormatError("expected {\"class\": string, \"values\": [string,...]}", line_number);

    ClassPrototype prototype;
    prototype.class_name = trim(parsed["class"].get<std::string>());
    if (prototype.class_name.empty()) throw StoreFormatError("class name is empty", line_number);
    if (!seen_classes.insert(prototype.class_name).second)
      throw StoreFormatError("duplicate class key \"" + prototype.class_name + "\"", line_number);

    std::unordered_set<std::string> seen_values;
    for (const auto& item : parsed["values"]) {
      if (!item.is_string()) throw StoreFormatError("values must be strings", line_number);
      std::string value = trim(item.get<std::string>());
      if (value.empty()) throw StoreFormatError("empty prototype value", line_number);
      if (!seen_values.insert(value).second)
        throw StoreFormatError("duplicate prototype value \"" + value + "\"", line_number);
      prototype.values.push_back(std::move(value));
    }
    if (prototype.values.empty()) throw StoreFormatError("prototype has no values", line_number);
    widest = std::max(widest, prototype.values.size());
    entries.push_back(std::move(prototype));
  }

  const std::size_t e = prototype_size_e.value_or(widest > 0 ? widest : 1);
  for (const auto& prototype : entries)
    if (prototype.values.size() > e)
      throw StoreFormatError(
          "prototype for \"" + prototype.class_name + "\" exceeds size limit " + std::to_string(e),
          0);
  return ClassPrototypeStore(std::move(entries), e);
}

}  // namespace coltype
