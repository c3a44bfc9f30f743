//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#ifndef MSBENCH_LLM_GATEWAY_H_
#define MSBENCH_LLM_GATEWAY_H_

#include <chrono>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "msbench/protocol/prompt.h"

namespace msbench::llm {

struct ProviderConfig {
  std::string endpoint_url = "https://api.openai.com/v1/chat/completions";
  std::string model_name = "gpt-4o-mini";
  /// Name of the environment variable holding the API key. The key itself
  /// is never stored.
  std::string api_key_env = "OPENAI_API_KEY";
  double temperature = 0.0;
  int max_tokens = 4096;
  double request_timeout = 120.0;  // seconds
  int max_retries = 3;
  int parallelism = 4;
  double backoff_initial = 1.0;  // seconds, doubled per retry
  double backoff_max = 30.0;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

class ConfigError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class MissingApiKey: public ConfigError {
public:
  explicit MissingApiKey(const std::string &env_name);
};

enum class CompletionStatus {
  kOk,
  kHttpError,
  kTimeout,
  kRateLimitedExhausted,
  kTransportError,
};

std::string_view to_string(CompletionStatus status);

struct CompletionOutcome {
  std::string record_id;
  CompletionStatus status = CompletionStatus::kTransportError;
  std::string transcript;  // empty unless ok
  int attempts = 0;
  bool cached = false;
  int http_status = 0;  // last HTTP status seen, 0 if none
  std::string error;
};

/// Result of one request attempt.
struct BackendReply {
  enum class Kind { kOk, kHttpStatus, kTimeout, kTransport };
  Kind kind = Kind::kTransport;
  int http_status = 0;
  std::string content;
  std::string error;
};

/// Sends one prompt. Implementations must be safe to call concurrently.
class CompletionBackend {
public:
  virtual ~CompletionBackend() = default;
  virtual BackendReply send(const std::string &record_id, const std::string &prompt,
                            const ProviderConfig &config, const std::string &api_key) = 0;
  virtual bool requires_api_key() const { return true; }
};

/// Chat-completions over HTTP(S): one user message carrying the prompt;
/// the reply is choices[0].message.content. Override the two hooks for
/// providers with a different schema.
class ChatCompletionsBackend: public CompletionBackend {
public:
  BackendReply send(const std::string &record_id, const std::string &prompt,
                    const ProviderConfig &config, const std::string &api_key) override;

  virtual std::string request_body(const std::string &prompt, const ProviderConfig &config) const;
  /// nullopt when the body does not have the expected shape.
  virtual std::optional<std::string> response_content(const std::string &body) const;
};

/// Replays `<dir>/<record_id>.txt`; a missing file is an HTTP 404.
class MockBackend: public CompletionBackend {
public:
  explicit MockBackend(std::filesystem::path dir): dir_(std::move(dir)) { }

  BackendReply send(const std::string &record_id, const std::string &prompt,
                    const ProviderConfig &config, const std::string &api_key) override;
  bool requires_api_key() const override { return false; }

private:
  std::filesystem::path dir_;
};

/// "mock:<dir>" selects MockBackend; "" or "http" the chat-completions
/// backend. Throws ConfigError otherwise.
std::unique_ptr<CompletionBackend> make_backend(std::string_view provider);

/// SHA-256 over prompt, model, temperature and max_tokens.
std::string cache_key(std::string_view prompt, const ProviderConfig &config);

/// Record ids as file names: characters outside [A-Za-z0-9._-] become '_'.
std::string safe_file_name(std::string_view record_id);

/// Writes `content` to a temporary sibling and renames it into place.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

/// One file per key: `<key>.txt` holds the transcript, `<key>.meta` a
/// single metadata line.
class ResponseCache {
public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<std::string> get(const std::string &key) const;
  void put(const std::string &key, std::string_view transcript, std::string_view meta) const;
  bool contains(const std::string &key) const;

private:
  std::filesystem::path dir_;
};

/// Cached, retrying completion client bound to one run directory. Layout:
/// `cache/`, `transcripts/<record_id>.txt`, `batch.log`.
class Gateway {
public:
  using Seconds = std::chrono::duration<double>;
  using Sleeper = std::function<void(Seconds)>;

  Gateway(ProviderConfig config, std::filesystem::path run_dir,
          std::unique_ptr<CompletionBackend> backend);

  /// Replaces the backoff sleep (tests).
  void set_sleeper(Sleeper sleeper) { sleeper_ = std::move(sleeper); }
  /// Destination of progress lines; nullptr silences them.
  void set_progress_stream(std::ostream *out) { progress_ = out; }

  const ProviderConfig &config() const { return config_; }
  std::filesystem::path transcripts_dir() const { return run_dir_ / "transcripts"; }
  std::filesystem::path transcript_path(std::string_view record_id) const;

  /// Throws MissingApiKey on a cache miss when the key variable is unset.
  CompletionOutcome complete(const std::string &record_id, const std::string &prompt);

  /// Outcomes in input order with at most `parallelism` requests in
  /// flight. Missing keys are detected before any request is sent.
  std::vector<CompletionOutcome> run_batch(std::span<const protocol::PromptInstance> instances);

private:
  std::string api_key() const;
  void log_outcome(const CompletionOutcome &outcome);

  ProviderConfig config_;
  std::filesystem::path run_dir_;
  std::unique_ptr<CompletionBackend> backend_;
  ResponseCache cache_;
  Sleeper sleeper_;
  std::ostream *progress_;
  std::mutex log_mutex_;
};

} // namespace msbench::llm

#endif // MSBENCH_LLM_GATEWAY_H_
