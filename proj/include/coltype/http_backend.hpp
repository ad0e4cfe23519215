#pragma once

#include <condition_variable>
#include <mutex>
#include <string>

#include <json.hpp>

#include "coltype/backend.hpp"

namespace coltype {

// OpenAI-compatible chat-completions and embeddings client. Timeouts and
// rate limits are retried with exponential backoff up to max_retries; the
// request concurrency limit bounds in-flight calls across threads. The API
// key is read from the configured environment variable and never logged.
class HttpBackend : public LlmBackend {
 public:
  explicit HttpBackend(BackendConfig config);

  std::string generate(const std::string& prompt) const override;
  EmbeddingVector embed(const std::string& text) const override;
  std::size_t embedding_dimension() const override;

 private:
  nlohmann::json post_json(const std::string& path, const nlohmann::json& body) const;

  BackendConfig config_;
  std::string api_key_;

  mutable std::mutex mutex_;
  mutable std::condition_variable slot_freed_;
  mutable std::size_t in_flight_ = 0;
  mutable std::size_t dimension_ = 0;
};

}  // namespace coltype
