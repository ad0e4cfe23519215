#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "coltype/backend.hpp"

namespace coltype {

class ClassPrototypeStore;

struct MockOptions {
  MockPolicy policy = MockPolicy::Oracle;
  double noise_p = 0.8;
  std::uint64_t noise_seed = 0;
  std::size_t dimension = 256;
};

// Deterministic test double for both generation and embedding.
//
// generate() resolution order:
//   1. canned responses, keyed by the exact prompt text;
//   2. prototype prompts are answered by a synthesizer producing
//      "<class>_example_<i>" lines;
//   3. annotation prompts are answered by the configured policy. Oracle
//      recovers the gold class through a value -> class provenance map,
//      Noisy(p) keeps the gold with probability p (stream keyed by the
//      prompt text, so results do not depend on call order), Echo returns
//      the first value of the target column.
//
// embed() hashes character trigrams into a fixed-dimension count vector and
// L2-normalizes it. Strings with no trigram (fewer than 3 bytes) embed to
// the zero vector.
//
// Configure (set_canned, set_value_class, add_provenance) before sharing
// across threads; generate/embed are then safe to call concurrently.
class MockBackend : public LlmBackend {
 public:
  explicit MockBackend(MockOptions options = {});

  std::string generate(const std::string& prompt) const override;
  EmbeddingVector embed(const std::string& text) const override;
  std::size_t embedding_dimension() const override { return options_.dimension; }

  void set_canned(std::string prompt, std::string completion);
  void set_value_class(std::string value, std::string class_name);
  // Registers every prototype value as provenance for its class.
  void add_provenance(const ClassPrototypeStore& store);

  const MockOptions& options() const { return options_; }

 private:
  std::string answer_annotation(const std::string& prompt) const;
  std::string gold_for_values(const std::vector<std::string>& values) const;

  MockOptions options_;
  std::unordered_map<std::string, std::string> canned_;
  std::unordered_map<std::string, std::string> value_class_;
};

std::uint64_t fnv1a64(std::string_view text);

}  // namespace coltype
