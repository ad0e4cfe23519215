#include "coltype/mock_backend.hpp"

#include <cmath>
#include <sstream>

#include "coltype/domain.hpp"
#include "coltype/errors.hpp"
#include "coltype/prototype.hpp"
#include "coltype/rng.hpp"

namespace coltype {

namespace {

constexpr std::string_view kPrototypePrefix = "Generate ";
constexpr std::string_view kPrototypeInfix = " real-world examples of the semantic type ";
constexpr std::string_view kPrototypeSuffixStart = " commonly found in web tables.";
constexpr std::string_view kTargetMarker = "Target Column: ";
constexpr std::string_view kListMarker = "from the following list: ";

std::vector<std::string> split_values(std::string_view joined) {
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= joined.size()) {
    const std::size_t next = joined.find(", ", pos);
    if (next == std::string_view::npos) {
      parts.emplace_back(joined.substr(pos));
      break;
    }
    parts.emplace_back(joined.substr(pos, next - pos));
    pos = next + 2;
  }
  return parts;
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find('\n', pos);
    if (next == std::string_view::npos) {
      lines.emplace_back(text.substr(pos));
      break;
    }
    lines.emplace_back(text.substr(pos, next - pos));
    pos = next + 1;
  }
  return lines;
}

// Trailing segment of a "Column i: ..." / "Row j: ..." / "Target Column: ..."
// line, or empty when the line does not match.
std::string_view line_payload(std::string_view line, std::string_view head) {
  if (line.substr(0, head.size()) != head) return {};
  const std::size_t colon = line.find(": ", head.size());
  if (colon == std::string_view::npos) return {};
  return line.substr(colon + 2);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t hash = 14695981039346656037ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  return hash;
}

MockBackend::MockBackend(MockOptions options) : options_(options) {
  if (options_.dimension == 0) throw ConfigError("mock embedding dimension must be positive");
}

void MockBackend::set_canned(std::string prompt, std::string completion) {
  canned_[std::move(prompt)] = std::move(completion);
}

void MockBackend::set_value_class(std::string value, std::string class_name) {
  value_class_[std::move(value)] = std::move(class_name);
}

void MockBackend::add_provenance(const ClassPrototypeStore& store) {
  for (const auto& prototype : store.entries())
    for (const auto& value : prototype.values) value_class_[value] = prototype.class_name;
}

EmbeddingVector MockBackend::embed(const std::string& text) const {
  EmbeddingVector vector;
  vector.values.assign(options_.dimension, 0.0);
  if (text.size() >= 3) {
    for (std::size_t i = 0; i + 3 <= text.size(); ++i) {
      const std::uint64_t bucket = fnv1a64(std::string_view(text).substr(i, 3)) % options_.dimension;
      vector.values[bucket] += 1.0;
    }
    double norm_sq = 0.0;
    for (double v : vector.values) norm_sq += v * v;
    const double norm = std::sqrt(norm_sq);
    if (norm > 0.0)
      for (double& v : vector.values) v /= norm;
  }
  return vector;
}

std::string MockBackend::generate(const std::string& prompt) const {
  if (auto it = canned_.find(prompt); it != canned_.end()) return it->second;

  // Prototype prompt: "Generate <e> real-world examples of the semantic type
  // <class> commonly found in web tables. ..."
  if (prompt.rfind(kPrototypePrefix, 0) == 0) {
    const std::size_t infix = prompt.find(kPrototypeInfix);
    const std::size_t suffix = prompt.find(kPrototypeSuffixStart);
    if (infix != std::string::npos && suffix != std::string::npos && infix < suffix) {
      const std::string count_text =
          prompt.substr(kPrototypePrefix.size(), infix - kPrototypePrefix.size());
      const std::string class_name =
          prompt.substr(infix + kPrototypeInfix.size(), suffix - infix - kPrototypeInfix.size());
      std::size_t count = 0;
      try {
        count = static_cast<std::size_t>(std::stoull(count_text));
      } catch (const std::exception&) {
        count = 0;
      }
      if (count > 0 && !class_name.empty()) {
        std::ostringstream out;
        for (std::size_t i = 1; i <= count; ++i) out << class_name << "_example_" << i << '\n';
        return out.str();
      }
    }
  }

  return answer_annotation(prompt);
}

std::string MockBackend::gold_for_values(const std::vector<std::string>& values) const {
  if (values.empty()) return {};
  if (auto it = value_class_.find(values.front()); it != value_class_.end()) return it->second;
  return values.front();
}

std::string MockBackend::answer_annotation(const std::string& prompt) const {
  const auto lines = split_lines(prompt);

  // First values of each column, reconstructed from either presentation.
  std::vector<std::vector<std::string>> column_values;
  std::vector<std::string> target_values;
  std::string candidate_segment;

  for (const auto& line : lines) {
    if (auto payload = line_payload(line, "Column "); !payload.empty()) {
      column_values.push_back(split_values(payload));
    } else if (auto row = line_payload(line, "Row "); !row.empty()) {
      const auto row_values = split_values(row);
      if (column_values.size() < row_values.size()) column_values.resize(row_values.size());
      for (std::size_t c = 0; c < row_values.size(); ++c)
        column_values[c].push_back(row_values[c]);
    } else if (line.rfind(kTargetMarker, 0) == 0) {
      target_values = split_values(std::string_view(line).substr(kTargetMarker.size()));
    } else if (auto marker = line.find(kListMarker); marker != std::string::npos) {
      std::string_view rest = std::string_view(line).substr(marker + kListMarker.size());
      if (!rest.empty() && rest.back() == '.') rest.remove_suffix(1);
      candidate_segment = std::string(rest);
    }
  }

  const bool all_columns = target_values.empty();
  std::vector<std::vector<std::string>> targets;
  if (all_columns) {
    targets = column_values;
  } else {
    targets.push_back(target_values);
  }
  if (targets.empty()) return {};

  std::vector<std::string> answers;
  answers.reserve(targets.size());

  switch (options_.policy) {
    case MockPolicy::Echo:
      for (const auto& values : targets) answers.push_back(values.empty() ? "" : values.front());
      break;
    case MockPolicy::Oracle:
      for (const auto& values : targets) answers.push_back(gold_for_values(values));
      break;
    case MockPolicy::Noisy: {
      const auto candidates = split_values(candidate_segment);
      rng::Stream stream(rng::derive_key({options_.noise_seed, fnv1a64(prompt)}));
      for (const auto& values : targets) {
        const std::string gold = gold_for_values(values);
        if (candidates.empty() || stream.next_unit() < options_.noise_p) {
          answers.push_back(gold);
          continue;
        }
        std::size_t gold_index = candidates.size();
        for (std::size_t i = 0; i < candidates.size(); ++i)
          if (candidates[i] == gold) {
            gold_index = i;
            break;
          }
        if (gold_index < candidates.size() && candidates.size() > 1) {
          std::size_t pick = static_cast<std::size_t>(stream.next_below(candidates.size() - 1));
          if (pick >= gold_index) ++pick;
          answers.push_back(candidates[pick]);
        } else {
          answers.push_back(
              candidates[static_cast<std::size_t>(stream.next_below(candidates.size()))]);
        }
      }
      break;
    }
  }

  std::string joined;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    if (i > 0) joined += ", ";
    joined += answers[i];
  }
  return joined;
}

}  // namespace coltype
