#include "coltype/http_backend.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "coltype/errors.hpp"

namespace coltype {

namespace {

constexpr const char* kChatPath = "/v1/chat/completions";
constexpr const char* kEmbeddingsPath = "/v1/embeddings";

class InFlightSlot {
 public:
  InFlightSlot(std::mutex& mutex, std::condition_variable& freed, std::size_t& count,
               std::size_t limit)
      : mutex_(mutex), freed_(freed), count_(count) {
    std::unique_lock<std::mutex> lock(mutex_);
    freed_.wait(lock, [&] { return count_ < limit; });
    ++count_;
  }
  ~InFlightSlot() {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      --count_;
    }
    freed_.notify_one();
  }

 private:
  std::mutex& mutex_;
  std::condition_variable& freed_;
  std::size_t& count_;
};

}  // namespace

HttpBackend::HttpBackend(BackendConfig config) : config_(std::move(config)) {
  if (config_.endpoint.empty() || config_.model.empty())
    throw ConfigError("http backend requires endpoint and model");
  while (!config_.endpoint.empty() && config_.endpoint.back() == '/')
    config_.endpoint.pop_back();
  if (config_.concurrency == 0) config_.concurrency = 1;
  if (const char* key = std::getenv(config_.api_key_env.c_str())) api_key_ = key;
}

nlohmann::json HttpBackend::post_json(const std::string& path,
                                      const nlohmann::json& body) const {
  InFlightSlot slot(mutex_, slot_freed_, in_flight_, config_.concurrency);

  const std::string payload = body.dump();
  const auto timeout = std::chrono::milliseconds(
      static_cast<long long>(config_.timeout_seconds * 1000.0));

  std::string last_error;
  bool rate_limited = false;
  for (std::size_t attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      const auto delay = std::chrono::milliseconds(config_.retry_backoff_ms)
                         * (1LL << (attempt - 1));
      std::this_thread::sleep_for(delay);
    }

    httplib::Client client(config_.endpoint);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    auto result = client.Post(path, headers, payload, "application/json");
    if (!result) {
      // Connection failures and timeouts are retried.
      last_error = "request failed: " + httplib::to_string(result.error());
      rate_limited = false;
      continue;
    }
    if (result->status == 429 || result->status == 503) {
      last_error = "HTTP " + std::to_string(result->status);
      rate_limited = true;
      continue;
    }
    if (result->status < 200 || result->status >= 300)
      throw ProtocolError("HTTP " + std::to_string(result->status) + " from " + path);

    try {
      return nlohmann::json::parse(result->body);
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError(std::string("malformed response body: ") + e.what());
    }
  }

  const std::string suffix = " after " + std::to_string(config_.max_retries) + " retries";
  if (rate_limited) throw RateLimitedError(last_error + suffix);
  throw TimeoutError(last_error + suffix);
}

std::string HttpBackend::generate(const std::string& prompt) const {
  nlohmann::json body;
  body["model"] = config_.model;
  body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", prompt}}});
  body["temperature"] = 0;

  const nlohmann::json response = post_json(kChatPath, body);
  try {
    return response.at("choices").at(0).at("message").at("content").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("unexpected chat response shape: ") + e.what());
  }
}

EmbeddingVector HttpBackend::embed(const std::string& text) const {
  nlohmann::json body;
  body["model"] = config_.embedding_model.empty() ? config_.model : config_.embedding_model;
  body["input"] = text;

  const nlohmann::json response = post_json(kEmbeddingsPath, body);
  EmbeddingVector vector;
  try {
    for (const auto& value : response.at("data").at(0).at("embedding"))
      vector.values.push_back(value.get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("unexpected embeddings response shape: ") + e.what());
  }
  if (vector.values.empty()) throw ProtocolError("embedding response is empty");
  for (double v : vector.values)
    if (!std::isfinite(v)) throw ProtocolError("embedding contains non-finite values");

  std::lock_guard<std::mutex> lock(mutex_);
  if (dimension_ == 0) {
    dimension_ = vector.dimension();
  } else if (dimension_ != vector.dimension()) {
    throw ProtocolError("embedding dimension changed from " + std::to_string(dimension_) +
                        " to " + std::to_string(vector.dimension()));
  }
  return vector;
}

std::size_t HttpBackend::embedding_dimension() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return dimension_;
}

}  // namespace coltype
