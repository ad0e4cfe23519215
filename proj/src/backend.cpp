#include "coltype/backend.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "coltype/errors.hpp"
#include "coltype/http_backend.hpp"
#include "coltype/mock_backend.hpp"
#include "coltype/prototype.hpp"

namespace coltype {

double EmbeddingVector::norm() const {
  double sum = 0.0;
  for (double v : values) sum += v * v;
  return std::sqrt(sum);
}

namespace {

MockPolicy parse_policy(const std::string& token) {
  if (token == "oracle") return MockPolicy::Oracle;
  if (token == "noisy") return MockPolicy::Noisy;
  if (token == "echo") return MockPolicy::Echo;
  throw ConfigError("unknown mock policy: \"" + token + "\"");
}

}  // namespace

BackendConfig BackendConfig::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("backend config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("backend config must be a JSON object");

  BackendConfig config;
  try {
    const std::string kind = doc.value("kind", "mock");
    if (kind == "mock") {
      config.kind = Kind::Mock;
    } else if (kind == "http") {
      config.kind = Kind::Http;
    } else {
      throw ConfigError("unknown backend kind: \"" + kind + "\"");
    }

    config.endpoint = doc.value("endpoint", config.endpoint);
    config.model = doc.value("model", config.model);
    config.embedding_model = doc.value("embedding_model", config.embedding_model);
    config.api_key_env = doc.value("api_key_env", config.api_key_env);
    config.timeout_seconds = doc.value("timeout_seconds", config.timeout_seconds);
    config.max_retries = doc.value("max_retries", config.max_retries);
    config.retry_backoff_ms = doc.value("retry_backoff_ms", config.retry_backoff_ms);
    config.concurrency = doc.value("concurrency", config.concurrency);

    if (doc.contains("policy")) config.policy = parse_policy(doc["policy"].get<std::string>());
    config.noise_p = doc.value("noise_p", config.noise_p);
    config.noise_seed = doc.value("seed", config.noise_seed);
    config.dimension = doc.value("dimension", config.dimension);
    config.prototypes_path = doc.value("prototypes", config.prototypes_path);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("backend config field: ") + e.what());
  }

  if (config.kind == Kind::Http && (config.endpoint.empty() || config.model.empty()))
    throw ConfigError("http backend requires \"endpoint\" and \"model\"");
  return config;
}

BackendConfig BackendConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open backend config: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

std::unique_ptr<LlmBackend> make_backend(const BackendConfig& config) {
  if (config.kind == BackendConfig::Kind::Http) return std::make_unique<HttpBackend>(config);

  MockOptions options;
  options.policy = config.policy;
  options.noise_p = config.noise_p;
  options.noise_seed = config.noise_seed;
  options.dimension = config.dimension;
  auto mock = std::make_unique<MockBackend>(options);
  if (!config.prototypes_path.empty()) {
    std::ifstream in(config.prototypes_path);
    if (!in) throw ConfigError("cannot open prototype store: " + config.prototypes_path);
    mock->add_provenance(load_store(in));
  }
  return mock;
}

}  // namespace coltype
