#pragma once

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "colloquy/domain.hpp"
#include "colloquy/errors.hpp"
#include "colloquy/util.hpp"

namespace colloquy {

struct ChatRequest {
  std::string system_prompt;
  std::string user_prompt;
  DecodingParams decoding;
  std::string model_name;
};

inline void validate_request(const ChatRequest& req) {
  if (req.system_prompt.empty()) throw std::invalid_argument("system_prompt must be nonempty");
  if (req.user_prompt.empty()) throw std::invalid_argument("user_prompt must be nonempty");
  if (req.model_name.empty()) throw std::invalid_argument("model_name must be nonempty");
  if (req.decoding.temperature < 0.0) throw std::invalid_argument("temperature must be >= 0");
  if (!(req.decoding.top_p > 0.0 && req.decoding.top_p <= 1.0))
    throw std::invalid_argument("top_p must be in (0,1]");
  if (req.decoding.max_tokens < 1) throw std::invalid_argument("max_tokens must be >= 1");
}

struct ChatResponse {
  std::string text;
  TokenUsage usage;
  std::int64_t latency_ms = 0;
  int attempts = 1;  // filled in by the gateway
};

// A chat + embeddings backend. Implementations must be safe to call from
// several threads at once and signal failures via the error types:
// TransientProviderError is retried, everything else propagates.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual ChatResponse chat(const ChatRequest& req) = 0;
  virtual std::vector<std::vector<double>> embeddings(const std::vector<std::string>& texts,
                                                      const std::string& model) = 0;
};

struct GatewayOptions {
  int max_attempts = 6;
  double backoff_base_s = 1.0;
  double backoff_factor = 2.0;
  double jitter_frac = 0.2;
  int max_concurrent = 8;
  int embed_batch = 128;
  std::uint64_t jitter_seed = 0;
  // Injectable so tests can run instantly and record the requested delays.
  std::function<void(double)> sleep_fn = [](double seconds) {
    std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
  };
};

namespace detail {

class ConcurrencyLimiter {
 public:
  explicit ConcurrencyLimiter(int cap) : cap_(cap > 0 ? cap : 1) {}

  void acquire() {
    std::unique_lock lock(m_);
    cv_.wait(lock, [&] { return in_flight_ < cap_; });
    ++in_flight_;
    if (in_flight_ > peak_) peak_ = in_flight_;
  }

  void release() {
    {
      std::lock_guard lock(m_);
      --in_flight_;
    }
    cv_.notify_one();
  }

  int peak() const {
    std::lock_guard lock(m_);
    return peak_;
  }

  int in_flight() const {
    std::lock_guard lock(m_);
    return in_flight_;
  }

 private:
  mutable std::mutex m_;
  std::condition_variable cv_;
  int cap_;
  int in_flight_ = 0;
  int peak_ = 0;
};

struct Permit {
  ConcurrencyLimiter& limiter;
  explicit Permit(ConcurrencyLimiter& l) : limiter(l) { limiter.acquire(); }
  ~Permit() { limiter.release(); }
  Permit(const Permit&) = delete;
  Permit& operator=(const Permit&) = delete;
};

}  // namespace detail

// Wraps a Provider with retry-with-backoff, a global in-flight cap, and
// embedding normalization. Shareable across threads.
class Gateway {
 public:
  Gateway(std::shared_ptr<Provider> provider, GatewayOptions options = {})
      : provider_(std::move(provider)),
        options_(std::move(options)),
        limiter_(options_.max_concurrent),
        jitter_rng_(options_.jitter_seed) {}

  ChatResponse complete(const ChatRequest& req) {
    validate_request(req);
    int attempt = 0;
    std::string last_error;
    while (attempt < options_.max_attempts) {
      ++attempt;
      try {
        detail::Permit permit(limiter_);
        ChatResponse resp = provider_->chat(req);
        resp.attempts = attempt;
        return resp;
      } catch (const TransientProviderError& e) {
        last_error = e.what();
        if (attempt == options_.max_attempts) break;
        options_.sleep_fn(backoff_delay_s(attempt));
      }
    }
    throw RateLimitExhausted("gave up after " + std::to_string(options_.max_attempts) +
                             " attempts; last error: " + last_error);
  }

  // Unit-length embeddings for every input, batched provider-side.
  std::vector<std::vector<double>> embed(const std::vector<std::string>& texts,
                                         const std::string& model) {
    if (texts.empty()) throw std::invalid_argument("embed: input list must be nonempty");
    std::vector<std::vector<double>> out;
    out.reserve(texts.size());
    std::size_t dim = 0;
    for (std::size_t start = 0; start < texts.size();
         start += static_cast<std::size_t>(options_.embed_batch)) {
      std::size_t count = std::min(static_cast<std::size_t>(options_.embed_batch),
                                   texts.size() - start);
      std::vector<std::string> chunk(texts.begin() + static_cast<std::ptrdiff_t>(start),
                                     texts.begin() + static_cast<std::ptrdiff_t>(start + count));
      auto vectors = embed_chunk(chunk, model);
      if (vectors.size() != chunk.size())
        throw MalformedProviderReply("embedding count " + std::to_string(vectors.size()) +
                                     " != input count " + std::to_string(chunk.size()));
      for (auto& v : vectors) {
        if (dim == 0) dim = v.size();
        if (v.size() != dim || dim == 0)
          throw DimensionMismatch("embedding dimensions inconsistent across batch");
        normalize(v);
        out.push_back(std::move(v));
      }
    }
    return out;
  }

  int peak_in_flight() const { return limiter_.peak(); }
  const GatewayOptions& options() const { return options_; }

 private:
  std::vector<std::vector<double>> embed_chunk(const std::vector<std::string>& chunk,
                                               const std::string& model) {
    int attempt = 0;
    std::string last_error;
    while (attempt < options_.max_attempts) {
      ++attempt;
      try {
        detail::Permit permit(limiter_);
        return provider_->embeddings(chunk, model);
      } catch (const TransientProviderError& e) {
        last_error = e.what();
        if (attempt == options_.max_attempts) break;
        options_.sleep_fn(backoff_delay_s(attempt));
      }
    }
    throw RateLimitExhausted("gave up after " + std::to_string(options_.max_attempts) +
                             " attempts; last error: " + last_error);
  }

  // Delay after the `attempt`-th failure. With factor 2 and jitter <= 20%
  // consecutive delays grow monotonically even at jitter extremes.
  double backoff_delay_s(int attempt) {
    double jitter;
    {
      std::lock_guard lock(rng_m_);
      jitter = 1.0 + options_.jitter_frac * (2.0 * jitter_rng_.uniform01() - 1.0);
    }
    return options_.backoff_base_s * std::pow(options_.backoff_factor, attempt - 1) * jitter;
  }

  static void normalize(std::vector<double>& v) {
    double norm_sq = 0.0;
    for (double x : v) norm_sq += x * x;
    if (norm_sq == 0.0) throw ZeroVector("provider returned a zero embedding");
    double inv = 1.0 / std::sqrt(norm_sq);
    for (double& x : v) x *= inv;
  }

  std::shared_ptr<Provider> provider_;
  GatewayOptions options_;
  detail::ConcurrencyLimiter limiter_;
  std::mutex rng_m_;
  DetRng jitter_rng_;
};

}  // namespace colloquy
