#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace coltype {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dimension() const { return values.size(); }
  double norm() const;
  bool zero_norm() const { return norm() == 0.0; }

  bool operator==(const EmbeddingVector& other) const = default;
};

// The two capabilities the pipeline needs from a model: text generation and
// a deterministic string -> vector embedding. Implementations must be safe
// to share across concurrent callers.
class LlmBackend {
 public:
  virtual ~LlmBackend() = default;

  virtual std::string generate(const std::string& prompt) const = 0;
  virtual EmbeddingVector embed(const std::string& text) const = 0;

  // 0 when the dimension is not known until the first embed call.
  virtual std::size_t embedding_dimension() const = 0;
};

enum class MockPolicy { Oracle, Noisy, Echo };

struct BackendConfig {
  enum class Kind { Mock, Http };

  Kind kind = Kind::Mock;

  // Http
  std::string endpoint;
  std::string model;
  std::string embedding_model;
  std::string api_key_env = "OPENAI_API_KEY";
  double timeout_seconds = 30.0;
  std::size_t max_retries = 3;
  std::size_t retry_backoff_ms = 250;
  std::size_t concurrency = 4;

  // Mock
  MockPolicy policy = MockPolicy::Oracle;
  double noise_p = 0.8;
  std::uint64_t noise_seed = 0;
  std::size_t dimension = 256;
  std::string prototypes_path;  // optional provenance for oracle/noisy

  static BackendConfig from_json_text(const std::string& text);
  static BackendConfig from_file(const std::string& path);
};

std::unique_ptr<LlmBackend> make_backend(const BackendConfig& config);

}  // namespace coltype
