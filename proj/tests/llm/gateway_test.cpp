//
// Project msbench - Copyright 2026 The msbench Authors.
// SPDX-License-Identifier: Apache-2.0
//

#define CPPHTTPLIB_OPENSSL_SUPPORT

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include "msbench/llm/gateway.h"
#include "msbench/util/digest.h"
#include "support/temp_dir.h"

namespace msbench::llm {
namespace {

using Json = nlohmann::json;
using namespace std::chrono_literals;

constexpr const char *kKeyEnv = "MSBENCH_GATEWAY_TEST_KEY";
constexpr const char *kSecret = "sk-test-9f3b1c7e-SECRET";

struct Reply {
  int status = 200;
  std::string content;  // wrapped in a chat-completions body when status is 200
  std::string raw_body;  // used verbatim when non-empty
  std::chrono::milliseconds delay { 0 };
};

std::string completion_body(const std::string &content) {
  return Json { { "choices", Json::array({ { { "message", { { "role", "assistant" },
                                                            { "content", content } } } } }) } }
      .dump();
}

// A local chat-completions endpoint driven by a script.
class FakeProvider {
public:
  using Script = std::function<Reply(int request_index, const Json &body)>;

  explicit FakeProvider(Script script): script_(std::move(script)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request &req, httplib::Response &res) {
      const int index = requests_++;
      const int now = ++in_flight_;
      {
        std::lock_guard lock(mutex_);
        max_in_flight_ = std::max(max_in_flight_, now);
        auth_headers_.push_back(req.get_header_value("Authorization"));
        bodies_.push_back(req.body);
      }
      const Reply r = script_(index, Json::parse(req.body));
      std::this_thread::sleep_for(r.delay);
      res.status = r.status;
      res.set_content(r.raw_body.empty() && r.status == 200 ? completion_body(r.content) : r.raw_body,
                      "application/json");
      --in_flight_;
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeProvider() {
    server_.stop();
    thread_.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions"; }
  int requests() const { return requests_; }
  int max_in_flight() const {
    std::lock_guard lock(mutex_);
    return max_in_flight_;
  }
  std::vector<std::string> auth_headers() const {
    std::lock_guard lock(mutex_);
    return auth_headers_;
  }
  std::vector<std::string> bodies() const {
    std::lock_guard lock(mutex_);
    return bodies_;
  }

private:
  Script script_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> requests_ { 0 };
  std::atomic<int> in_flight_ { 0 };
  mutable std::mutex mutex_;
  int max_in_flight_ = 0;
  std::vector<std::string> auth_headers_;
  std::vector<std::string> bodies_;
};

Reply echo(int, const Json &body) {
  return { 200, "<answer>CCO</answer> for " + body["messages"][0]["content"].get<std::string>() };
}

class GatewayTest: public ::testing::Test {
protected:
  void SetUp() override { ::setenv(kKeyEnv, kSecret, 1); }
  void TearDown() override { ::unsetenv(kKeyEnv); }

  ProviderConfig config(const FakeProvider &fake) const {
    ProviderConfig c;
    c.endpoint_url = fake.url();
    c.model_name = "test-model";
    c.api_key_env = kKeyEnv;
    c.request_timeout = 5;
    c.backoff_initial = 1.0;
    c.backoff_max = 3.0;
    return c;
  }

  std::unique_ptr<Gateway> gateway(const ProviderConfig &c) {
    auto g = std::make_unique<Gateway>(c, dir_.path() / "run", std::make_unique<ChatCompletionsBackend>());
    g->set_sleeper([this](Gateway::Seconds s) { sleeps_.push_back(s.count()); });
    g->set_progress_stream(nullptr);
    return g;
  }

  static std::vector<protocol::PromptInstance> instances(int n, const std::string &tag = "p") {
    std::vector<protocol::PromptInstance> out;
    for (int i = 0; i < n; ++i)
      out.push_back({ "rec" + std::to_string(i), tag + " prompt " + std::to_string(i), "v" });
    return out;
  }

  test::TempDir dir_;
  std::vector<double> sleeps_;
};

TEST(Digest, KnownVectors) {
  EXPECT_EQ(util::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(util::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(CacheKey, DependsOnPromptModelTemperatureAndLength) {
  ProviderConfig c;
  const std::string base = cache_key("prompt", c);
  EXPECT_EQ(base.size(), 64u);
  EXPECT_EQ(base.find_first_not_of("0123456789abcdef"), std::string::npos);
  EXPECT_EQ(cache_key("prompt", c), base);
  EXPECT_NE(cache_key("prompt ", c), base);
  ProviderConfig d = c;
  d.model_name = "other";
  EXPECT_NE(cache_key("prompt", d), base);
  d = c;
  d.temperature = 0.7;
  EXPECT_NE(cache_key("prompt", d), base);
  d = c;
  d.max_tokens = 100;
  EXPECT_NE(cache_key("prompt", d), base);
  // Transport settings do not change what is asked.
  d = c;
  d.endpoint_url = "http://elsewhere/v1";
  d.parallelism = 9;
  d.max_retries = 0;
  d.api_key_env = "OTHER";
  EXPECT_EQ(cache_key("prompt", d), base);
}

TEST(SafeFileName, Examples) {
  EXPECT_EQ(safe_file_name("MSG-0001_a.b"), "MSG-0001_a.b");
  EXPECT_EQ(safe_file_name("a/b c:d"), "a_b_c_d");
  EXPECT_EQ(safe_file_name(".."), "_..");
  EXPECT_EQ(safe_file_name(""), "_");
}

TEST(ProviderConfig, Validate) {
  ProviderConfig c;
  EXPECT_NO_THROW(c.validate());
  auto bad = [&](auto mutate) {
    ProviderConfig d;
    mutate(d);
    EXPECT_THROW(d.validate(), ConfigError);
  };
  bad([](ProviderConfig &d) { d.model_name.clear(); });
  bad([](ProviderConfig &d) { d.temperature = -0.1; });
  bad([](ProviderConfig &d) { d.max_tokens = 0; });
  bad([](ProviderConfig &d) { d.request_timeout = 0; });
  bad([](ProviderConfig &d) { d.max_retries = -1; });
  bad([](ProviderConfig &d) { d.parallelism = 0; });
  bad([](ProviderConfig &d) { d.backoff_initial = -1; });
}

TEST(MakeBackend, Selection) {
  EXPECT_NE(dynamic_cast<ChatCompletionsBackend *>(make_backend("http").get()), nullptr);
  EXPECT_NE(dynamic_cast<ChatCompletionsBackend *>(make_backend("").get()), nullptr);
  EXPECT_NE(dynamic_cast<MockBackend *>(make_backend("mock:/tmp").get()), nullptr);
  EXPECT_THROW(make_backend("mock:"), ConfigError);
  EXPECT_THROW(make_backend("grpc"), ConfigError);
}

TEST_F(GatewayTest, CompletesAndCaches) {
  FakeProvider fake(echo);
  auto g = gateway(config(fake));
  const CompletionOutcome first = g->complete("rec/1", "hello");
  EXPECT_EQ(first.status, CompletionStatus::kOk);
  EXPECT_EQ(first.attempts, 1);
  EXPECT_FALSE(first.cached);
  EXPECT_EQ(first.transcript, "<answer>CCO</answer> for hello");
  EXPECT_EQ(test::read_file(g->transcript_path("rec/1")), first.transcript);
  EXPECT_EQ(g->transcript_path("rec/1").filename(), "rec_1.txt");

  const std::string key = cache_key("hello", g->config());
  const auto cache_dir = dir_.path() / "run" / "cache";
  EXPECT_EQ(test::read_file(cache_dir / (key + ".txt")), first.transcript);
  const Json meta = Json::parse(test::read_file(cache_dir / (key + ".meta")));
  EXPECT_EQ(meta["model"], "test-model");
  EXPECT_EQ(meta["attempts"], 1);
  EXPECT_TRUE(meta.contains("timestamp"));

  const Json body = Json::parse(fake.bodies().at(0));
  EXPECT_EQ(body["model"], "test-model");
  EXPECT_EQ(body["temperature"], 0.0);
  EXPECT_EQ(body["max_tokens"], 4096);
  EXPECT_EQ(body["messages"][0]["role"], "user");
  EXPECT_EQ(fake.auth_headers().at(0), std::string("Bearer ") + kSecret);

  // Warm cache: no request, zero attempts, same transcript.
  const CompletionOutcome again = g->complete("rec/1", "hello");
  EXPECT_EQ(again.status, CompletionStatus::kOk);
  EXPECT_TRUE(again.cached);
  EXPECT_EQ(again.attempts, 0);
  EXPECT_EQ(again.transcript, first.transcript);
  EXPECT_EQ(fake.requests(), 1);
}

TEST_F(GatewayTest, RetriesRateLimitThenSucceeds) {
  FakeProvider fake([](int i, const Json &) { return i == 0 ? Reply { 429 } : Reply { 200, "done" }; });
  auto g = gateway(config(fake));
  const CompletionOutcome o = g->complete("r", "p");
  EXPECT_EQ(o.status, CompletionStatus::kOk);
  EXPECT_EQ(o.attempts, 2);
  EXPECT_EQ(fake.requests(), 2);
  ASSERT_EQ(sleeps_.size(), 1u);
  EXPECT_GE(sleeps_[0], 0.5);
  EXPECT_LE(sleeps_[0], 1.0);
}

TEST_F(GatewayTest, PersistentServerErrorUsesAllAttempts) {
  FakeProvider fake([](int, const Json &) { return Reply { 503 }; });
  ProviderConfig c = config(fake);
  c.max_retries = 3;
  auto g = gateway(c);
  const CompletionOutcome o = g->complete("r", "p");
  EXPECT_EQ(o.status, CompletionStatus::kHttpError);
  EXPECT_EQ(o.http_status, 503);
  EXPECT_EQ(o.attempts, 4);
  EXPECT_EQ(fake.requests(), 4);
  // Backoff before retry n: min(3, 1 * 2^(n-1)) scaled by a factor in [0.5, 1].
  const double base[] = { 1.0, 2.0, 3.0 };
  ASSERT_EQ(sleeps_.size(), 3u);
  for (int n = 0; n < 3; ++n) {
    EXPECT_GE(sleeps_[n], 0.5 * base[n]);
    EXPECT_LE(sleeps_[n], base[n]);
  }
  EXPECT_TRUE(test::read_file(g->transcript_path("r")).empty());
  EXPECT_FALSE(std::filesystem::exists(g->transcript_path("r")));
}

TEST_F(GatewayTest, PersistentRateLimitIsExhausted) {
  FakeProvider fake([](int, const Json &) { return Reply { 429 }; });
  ProviderConfig c = config(fake);
  c.max_retries = 2;
  const CompletionOutcome o = gateway(c)->complete("r", "p");
  EXPECT_EQ(o.status, CompletionStatus::kRateLimitedExhausted);
  EXPECT_EQ(o.attempts, 3);
}

TEST_F(GatewayTest, ClientErrorIsNotRetried) {
  FakeProvider fake([](int, const Json &) { return Reply { 400, "", "{\"error\": \"bad\"}" }; });
  const CompletionOutcome o = gateway(config(fake))->complete("r", "p");
  EXPECT_EQ(o.status, CompletionStatus::kHttpError);
  EXPECT_EQ(o.http_status, 400);
  EXPECT_EQ(o.attempts, 1);
  EXPECT_TRUE(sleeps_.empty());
}

TEST_F(GatewayTest, EmptyOrMalformedCompletionIsAnError) {
  FakeProvider fake([](int i, const Json &) {
    return i == 0 ? Reply { 200, "" } : Reply { 200, "", "{\"choices\": []}" };
  });
  auto g = gateway(config(fake));
  const CompletionOutcome empty = g->complete("a", "p1");
  EXPECT_EQ(empty.status, CompletionStatus::kHttpError);
  EXPECT_EQ(empty.attempts, 1);
  EXPECT_FALSE(g->complete("b", "p2").status == CompletionStatus::kOk);
  EXPECT_FALSE(std::filesystem::exists(dir_.path() / "run" / "cache" / (cache_key("p1", g->config()) + ".txt")));
}

TEST_F(GatewayTest, Timeout) {
  FakeProvider fake([](int, const Json &) { return Reply { 200, "late", "", 1500ms }; });
  ProviderConfig c = config(fake);
  c.request_timeout = 0.3;
  c.max_retries = 1;
  const CompletionOutcome o = gateway(c)->complete("r", "p");
  EXPECT_EQ(o.status, CompletionStatus::kTimeout);
  EXPECT_EQ(o.attempts, 2);
}

TEST_F(GatewayTest, TransportError) {
  // A port that was bound and released, so nothing listens there.
  int closed_port = 0;
  {
    const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr {};
    addr.sin_family = AF_INET;
    addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
    ASSERT_EQ(::bind(fd, reinterpret_cast<sockaddr *>(&addr), sizeof addr), 0);
    socklen_t len = sizeof addr;
    ::getsockname(fd, reinterpret_cast<sockaddr *>(&addr), &len);
    closed_port = ntohs(addr.sin_port);
    ::close(fd);
  }
  ProviderConfig c;
  c.endpoint_url = "http://127.0.0.1:" + std::to_string(closed_port) + "/v1/chat/completions";
  c.api_key_env = kKeyEnv;
  c.max_retries = 1;
  c.request_timeout = 2;
  auto g = std::make_unique<Gateway>(c, dir_.path() / "run", std::make_unique<ChatCompletionsBackend>());
  g->set_sleeper([](Gateway::Seconds) { });
  const CompletionOutcome o = g->complete("r", "p");
  EXPECT_EQ(o.status, CompletionStatus::kTransportError);
  EXPECT_EQ(o.attempts, 2);
  EXPECT_FALSE(o.error.empty());
}

TEST_F(GatewayTest, BatchOnlyRequestsUncachedPrompts) {
  FakeProvider fake(echo);
  auto g = gateway(config(fake));
  const auto all = instances(10);
  for (int i = 0; i < 3; ++i)
    ASSERT_EQ(g->complete(all[i].record_id, all[i].text).status, CompletionStatus::kOk);
  ASSERT_EQ(fake.requests(), 3);
  const auto outcomes = g->run_batch(all);
  EXPECT_EQ(fake.requests(), 10);
  ASSERT_EQ(outcomes.size(), 10u);
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(outcomes[i].record_id, all[i].record_id);
    EXPECT_EQ(outcomes[i].status, CompletionStatus::kOk);
    EXPECT_EQ(outcomes[i].cached, i < 3);
    EXPECT_EQ(outcomes[i].attempts, i < 3 ? 0 : 1);
    EXPECT_TRUE(std::filesystem::exists(g->transcript_path(all[i].record_id)));
  }
  std::istringstream log(test::read_file(dir_.path() / "run" / "batch.log"));
  int lines = 0;
  for (std::string line; std::getline(log, line); ++lines)
    EXPECT_TRUE(Json::parse(line).contains("status"));
  EXPECT_EQ(lines, 10);
}

TEST_F(GatewayTest, InFlightNeverExceedsParallelism) {
  for (const int parallelism: { 1, 3 }) {
    FakeProvider fake([](int i, const Json &) { return Reply { 200, "x" + std::to_string(i), "", 40ms }; });
    ProviderConfig c = config(fake);
    c.parallelism = parallelism;
    const auto outcomes = gateway(c)->run_batch(instances(12, "par" + std::to_string(parallelism)));
    EXPECT_EQ(fake.requests(), 12);
    EXPECT_LE(fake.max_in_flight(), parallelism);
    EXPECT_GE(fake.max_in_flight(), 1);
    EXPECT_EQ(std::count_if(outcomes.begin(), outcomes.end(),
                            [](const auto &o) { return o.status == CompletionStatus::kOk; }),
              12);
  }
}

TEST_F(GatewayTest, ResumeRequestsOnlyFailures) {
  const auto all = instances(6);
  {
    FakeProvider flaky([](int, const Json &body) {
      const std::string prompt = body["messages"][0]["content"];
      return prompt.back() == '2' || prompt.back() == '4' ? Reply { 404 } : Reply { 200, prompt };
    });
    const auto outcomes = gateway(config(flaky))->run_batch(all);
    EXPECT_EQ(std::count_if(outcomes.begin(), outcomes.end(),
                            [](const auto &o) { return o.status != CompletionStatus::kOk; }),
              2);
  }
  FakeProvider healthy(echo);
  const auto outcomes = gateway(config(healthy))->run_batch(all);
  EXPECT_EQ(healthy.requests(), 2);
  for (const auto &o: outcomes)
    EXPECT_EQ(o.status, CompletionStatus::kOk);
}

TEST_F(GatewayTest, MissingApiKeyBeforeAnyRequest) {
  FakeProvider fake(echo);
  auto g = gateway(config(fake));
  const auto all = instances(4);
  ASSERT_EQ(g->complete(all[0].record_id, all[0].text).status, CompletionStatus::kOk);
  ::unsetenv(kKeyEnv);
  EXPECT_THROW(g->run_batch(all), MissingApiKey);
  EXPECT_EQ(fake.requests(), 1);
  // Fully cached batches need no key.
  const auto cached = g->run_batch(std::span(all).first(1));
  EXPECT_TRUE(cached[0].cached);
  EXPECT_THROW(g->complete("x", "uncached"), MissingApiKey);
  ::setenv(kKeyEnv, "", 1);
  EXPECT_THROW(g->run_batch(all), MissingApiKey);
  EXPECT_EQ(fake.requests(), 1);
}

TEST_F(GatewayTest, SecretNeverWrittenToDisk) {
  FakeProvider fake([](int i, const Json &body) {
    if (i % 3 == 1)
      return Reply { 500 };
    return Reply { 200, body["messages"][0]["content"].get<std::string>() };
  });
  ProviderConfig c = config(fake);
  c.max_retries = 0;
  auto g = gateway(c);
  g->run_batch(instances(9));
  int files = 0;
  for (const auto &entry: std::filesystem::recursive_directory_iterator(dir_.path())) {
    if (!entry.is_regular_file())
      continue;
    ++files;
    EXPECT_EQ(test::read_file(entry.path()).find(kSecret), std::string::npos) << entry.path();
  }
  EXPECT_GT(files, 10);
}

TEST(MockBackend, ReplaysFilesAndProgress) {
  test::TempDir dir;
  std::vector<protocol::PromptInstance> all;
  for (int i = 0; i < 150; ++i) {
    const std::string id = "m" + std::to_string(i);
    if (i != 7)
      dir.write("mock/" + id + ".txt", "<answer>C</answer> " + id);
    all.push_back({ id, "prompt " + id, "v" });
  }
  ProviderConfig c;
  c.api_key_env = "MSBENCH_UNSET_KEY_FOR_MOCK";
  ::unsetenv(c.api_key_env.c_str());
  Gateway g(c, dir / "run", make_backend("mock:" + (dir / "mock").string()));
  std::ostringstream progress;
  g.set_progress_stream(&progress);
  const auto outcomes = g.run_batch(all);
  EXPECT_EQ(outcomes[0].transcript, "<answer>C</answer> m0");
  EXPECT_EQ(outcomes[7].status, CompletionStatus::kHttpError);
  EXPECT_EQ(outcomes[7].http_status, 404);
  EXPECT_EQ(outcomes[7].attempts, 1);
  EXPECT_NE(progress.str().find("progress: 100/150 records"), std::string::npos);
  EXPECT_NE(progress.str().find("progress: 150/150 records"), std::string::npos);
}

TEST(WriteFileAtomic, ReplacesContent) {
  test::TempDir dir;
  const auto p = dir / "sub" / "f.txt";
  write_file_atomic(p, "one");
  write_file_atomic(p, "two");
  EXPECT_EQ(test::read_file(p), "two");
  int entries = 0;
  for ([[maybe_unused]] const auto &e: std::filesystem::directory_iterator(p.parent_path()))
    ++entries;
  EXPECT_EQ(entries, 1);
}

} // namespace
} // namespace msbench::llm
