//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "msbench/llm/gateway.h"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <unistd.h>

#include <httplib.h>
#include <json.hpp>

#include "msbench/util/digest.h"
#include "msbench/util/parallel.h"

namespace msbench::llm {
namespace {

using Json = nlohmann::json;

std::string read_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm {};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double jitter_factor() {
  thread_local std::mt19937 rng { std::random_device {}() };
  return std::uniform_real_distribution<double>(0.5, 1.0)(rng);
}

// "https://host:port/v1/chat" -> ("https://host:port", "/v1/chat").
std::pair<std::string, std::string> split_url(const std::string &url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos)
    throw ConfigError("endpoint must start with http:// or https://: " + url);
  const auto path = url.find('/', scheme + 3);
  if (path == std::string::npos)
    return { url, "/" };
  return { url.substr(0, path), url.substr(path) };
}

} // namespace

void ProviderConfig::validate() const {
  if (model_name.empty())
    throw ConfigError("model name is empty");
  if (!(temperature >= 0))
    throw ConfigError("temperature must be >= 0");
  if (max_tokens < 1)
    throw ConfigError("max_tokens must be >= 1");
  if (!(request_timeout > 0))
    throw ConfigError("request timeout must be > 0");
  if (max_retries < 0)
    throw ConfigError("max_retries must be >= 0");
  if (parallelism < 1)
    throw ConfigError("parallelism must be >= 1");
  if (!(backoff_initial >= 0) || !(backoff_max >= 0))
    throw ConfigError("backoff must be >= 0");
}

MissingApiKey::MissingApiKey(const std::string &env_name)
    : ConfigError("MissingApiKey: environment variable " + env_name + " is not set") { }

std::string_view to_string(CompletionStatus status) {
  switch (status) {
  case CompletionStatus::kOk: return "ok";
  case CompletionStatus::kHttpError: return "http_error";
  case CompletionStatus::kTimeout: return "timeout";
  case CompletionStatus::kRateLimitedExhausted: return "rate_limited_exhausted";
  case CompletionStatus::kTransportError: return "transport_error";
  }
  return "?";
}

std::string ChatCompletionsBackend::request_body(const std::string &prompt,
                                                 const ProviderConfig &config) const {
  const Json body = {
    { "model", config.model_name },
    { "messages", Json::array({ { { "role", "user" }, { "content", prompt } } }) },
    { "temperature", config.temperature },
    { "max_tokens", config.max_tokens },
  };
  return body.dump();
}

std::optional<std::string>
ChatCompletionsBackend::response_content(const std::string &body) const {
  const Json j = Json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("choices") || !j["choices"].is_array()
      || j["choices"].empty())
    return std::nullopt;
  const Json &msg = j["choices"][0].value("message", Json::object());
  if (!msg.is_object() || !msg.contains("content") || !msg["content"].is_string())
    return std::nullopt;
  return msg["content"].get<std::string>();
}

BackendReply ChatCompletionsBackend::send(const std::string &, const std::string &prompt,
                                          const ProviderConfig &config,
                                          const std::string &api_key) {
  const auto [host, path] = split_url(config.endpoint_url);
  httplib::Client client(host);
  const auto timeout = std::chrono::duration<double>(config.request_timeout);
  client.set_connection_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_read_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  client.set_write_timeout(std::chrono::duration_cast<std::chrono::microseconds>(timeout));
  httplib::Headers headers;
  if (!api_key.empty())
    headers.emplace("Authorization", "Bearer " + api_key);

  BackendReply reply;
  const httplib::Result res =
      client.Post(path, headers, request_body(prompt, config), "application/json");
  if (!res) {
    const httplib::Error err = res.error();
    reply.kind = err == httplib::Error::ConnectionTimeout || err == httplib::Error::Read
                     ? BackendReply::Kind::kTimeout
                     : BackendReply::Kind::kTransport;
    reply.error = httplib::to_string(err);
    return reply;
  }
  reply.http_status = res->status;
  if (res->status != 200) {
    reply.kind = BackendReply::Kind::kHttpStatus;
    reply.error = "HTTP " + std::to_string(res->status);
    return reply;
  }
  const auto content = response_content(res->body);
  if (!content) {
    reply.kind = BackendReply::Kind::kHttpStatus;
    reply.error = "unexpected response shape";
    return reply;
  }
  reply.kind = BackendReply::Kind::kOk;
  reply.content = *content;
  return reply;
}

BackendReply MockBackend::send(const std::string &record_id, const std::string &,
                               const ProviderConfig &, const std::string &) {
  BackendReply reply;
  const std::filesystem::path path = dir_ / (safe_file_name(record_id) + ".txt");
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) {
    reply.kind = BackendReply::Kind::kHttpStatus;
    reply.http_status = 404;
    reply.error = "no mock transcript for " + record_id;
    return reply;
  }
  reply.kind = BackendReply::Kind::kOk;
  reply.http_status = 200;
  reply.content = read_file(path);
  return reply;
}

std::unique_ptr<CompletionBackend> make_backend(std::string_view provider) {
  if (provider.empty() || provider == "http")
    return std::make_unique<ChatCompletionsBackend>();
  if (provider.substr(0, 5) == "mock:" && provider.size() > 5)
    return std::make_unique<MockBackend>(std::filesystem::path(std::string(provider.substr(5))));
  throw ConfigError("unknown provider '" + std::string(provider) + "' (use http or mock:<dir>)");
}

std::string cache_key(std::string_view prompt, const ProviderConfig &config) {
  const Json material = Json::array(
      { std::string(prompt), config.model_name, config.temperature, config.max_tokens });
  return util::sha256_hex(material.dump());
}

std::string safe_file_name(std::string_view record_id) {
  std::string out;
  for (const char c: record_id) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-';
    out += ok ? c : '_';
  }
  if (out.empty() || out == "." || out == "..")
    out = "_" + out;
  return out;
}

void write_file_atomic(const std::filesystem::path &path, std::string_view content) {
  static std::atomic<unsigned long> counter { 0 };
  std::filesystem::create_directories(path.parent_path());
  std::ostringstream tmp_name;
  tmp_name << path.filename().string() << ".tmp." << ::getpid() << '.'
           << std::hash<std::thread::id> {}(std::this_thread::get_id()) << '.' << counter++;
  const std::filesystem::path tmp = path.parent_path() / tmp_name.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
      throw std::runtime_error("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

ResponseCache::ResponseCache(std::filesystem::path dir): dir_(std::move(dir)) { }

std::optional<std::string> ResponseCache::get(const std::string &key) const {
  const std::filesystem::path path = dir_ / (key + ".txt");
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec))
    return std::nullopt;
  return read_file(path);
}

bool ResponseCache::contains(const std::string &key) const {
  std::error_code ec;
  return std::filesystem::is_regular_file(dir_ / (key + ".txt"), ec);
}

void ResponseCache::put(const std::string &key, std::string_view transcript,
                        std::string_view meta) const {
  // Transcript last: a present .txt is what marks the key as cached.
  write_file_atomic(dir_ / (key + ".meta"), std::string(meta) + "\n");
  write_file_atomic(dir_ / (key + ".txt"), transcript);
}

Gateway::Gateway(ProviderConfig config, std::filesystem::path run_dir,
                 std::unique_ptr<CompletionBackend> backend)
    : config_(std::move(config)), run_dir_(std::move(run_dir)), backend_(std::move(backend)),
      cache_(run_dir_ / "cache"),
      sleeper_([](Seconds d) { std::this_thread::sleep_for(d); }), progress_(&std::clog) {
  config_.validate();
  if (!backend_)
    throw ConfigError("no completion backend");
  std::filesystem::create_directories(run_dir_ / "cache");
  std::filesystem::create_directories(transcripts_dir());
}

std::filesystem::path Gateway::transcript_path(std::string_view record_id) const {
  return transcripts_dir() / (safe_file_name(record_id) + ".txt");
}

std::string Gateway::api_key() const {
  if (!backend_->requires_api_key())
    return {};
  const char *value = std::getenv(config_.api_key_env.c_str());
  if (value == nullptr || *value == '\0')
    throw MissingApiKey(config_.api_key_env);
  return value;
}

CompletionOutcome Gateway::complete(const std::string &record_id, const std::string &prompt) {
  CompletionOutcome outcome;
  outcome.record_id = record_id;
  const std::string key = cache_key(prompt, config_);

  if (auto hit = cache_.get(key); hit && !hit->empty()) {
    outcome.status = CompletionStatus::kOk;
    outcome.cached = true;
    outcome.transcript = std::move(*hit);
    write_file_atomic(transcript_path(record_id), outcome.transcript);
    return outcome;
  }

  const std::string secret = api_key();
  for (int attempt = 1; attempt <= config_.max_retries + 1; ++attempt) {
    const BackendReply reply = backend_->send(record_id, prompt, config_, secret);
    outcome.attempts = attempt;
    outcome.http_status = reply.http_status;
    outcome.error = reply.error;
    bool retryable = false;
    switch (reply.kind) {
    case BackendReply::Kind::kOk:
      if (reply.content.empty()) {
        outcome.status = CompletionStatus::kHttpError;
        outcome.error = "empty completion";
        break;
      }
      outcome.status = CompletionStatus::kOk;
      outcome.transcript = reply.content;
      outcome.error.clear();
      {
        Json meta = { { "timestamp", utc_timestamp() }, { "model", config_.model_name },
                      { "attempts", attempt }, { "record_id", record_id } };
        cache_.put(key, outcome.transcript, meta.dump());
      }
      write_file_atomic(transcript_path(record_id), outcome.transcript);
      return outcome;
    case BackendReply::Kind::kHttpStatus:
      if (reply.http_status == 429) {
        outcome.status = CompletionStatus::kRateLimitedExhausted;
        retryable = true;
      } else {
        outcome.status = CompletionStatus::kHttpError;
        retryable = reply.http_status >= 500;
      }
      break;
    case BackendReply::Kind::kTimeout:
      outcome.status = CompletionStatus::kTimeout;
      retryable = true;
      break;
    case BackendReply::Kind::kTransport:
      outcome.status = CompletionStatus::kTransportError;
      retryable = true;
      break;
    }
    if (!retryable || attempt > config_.max_retries)
      break;
    const double base = std::min(config_.backoff_max,
                                 config_.backoff_initial * std::pow(2.0, attempt - 1));
    sleeper_(Seconds(base * jitter_factor()));
  }
  return outcome;
}

void Gateway::log_outcome(const CompletionOutcome &o) {
  const Json line = { { "record_id", o.record_id }, { "status", std::string(to_string(o.status)) },
                      { "attempts", o.attempts },   { "cached", o.cached },
                      { "http_status", o.http_status } };
  std::lock_guard lock(log_mutex_);
  std::ofstream out(run_dir_ / "batch.log", std::ios::app);
  out << line.dump() << '\n';
}

std::vector<CompletionOutcome>
Gateway::run_batch(std::span<const protocol::PromptInstance> instances) {
  if (backend_->requires_api_key()) {
    const char *value = std::getenv(config_.api_key_env.c_str());
    if (value == nullptr || *value == '\0') {
      for (const auto &inst: instances) {
        if (!cache_.contains(cache_key(inst.text, config_)))
          throw MissingApiKey(config_.api_key_env);
      }
    }
  }

  std::vector<CompletionOutcome> out(instances.size());
  std::atomic<std::size_t> done { 0 };
  util::parallel_for(instances.size(), config_.parallelism, [&](std::size_t i) {
    out[i] = complete(instances[i].record_id, instances[i].text);
    log_outcome(out[i]);
    const std::size_t n = ++done;
    if (progress_ != nullptr && (n % 100 == 0 || n == instances.size())) {
      std::lock_guard lock(log_mutex_);
      *progress_ << "progress: " << n << "/" << instances.size() << " records\n";
    }
  });
  return out;
}

} // namespace msbench::llm
