#pragma once

#include <cstdlib>
#include <memory>
#include <string>
#include <vector>

#include <httplib.h>

#include "colloquy/errors.hpp"
#include "colloquy/gateway.hpp"

namespace colloquy {

struct HttpProviderOptions {
  std::string base_url;        // e.g. "http://127.0.0.1:8080"
  std::string embed_base_url;  // empty -> base_url
  std::string api_key;         // empty -> no Authorization header
  std::string chat_path = "/v1/chat/completions";
  std::string embed_path = "/v1/embeddings";
  int timeout_s = 120;
};

// Talks to any endpoint exposing the common chat-completions / embeddings
// JSON shape. Auth failures (401/403) surface as AuthError; 429 and 5xx as
// TransientProviderError so the gateway can retry them; transport failures
// (refused connection, timeout) are treated as transient too.
class HttpProvider : public Provider {
 public:
  explicit HttpProvider(HttpProviderOptions options) : options_(std::move(options)) {
    if (options_.base_url.empty())
      throw std::invalid_argument("HttpProvider: base_url must not be empty");
    if (options_.embed_base_url.empty()) options_.embed_base_url = options_.base_url;
  }

  ChatResponse chat(const ChatRequest& request) override {
    Json messages = Json::array();
    if (!request.system_prompt.empty())
      messages.push_back(Json{{"role", "system"}, {"content", request.system_prompt}});
    messages.push_back(Json{{"role", "user"}, {"content", request.user_prompt}});
    Json body = Json{{"model", request.model_name},
                     {"messages", messages},
                     {"temperature", request.decoding.temperature},
                     {"top_p", request.decoding.top_p},
                     {"max_tokens", request.decoding.max_tokens}};
    Json reply = post_json(options_.base_url, options_.chat_path, body);

    ChatResponse response;
    try {
      response.text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
      if (reply.contains("usage")) {
        response.usage.prompt_tokens = reply["usage"].value("prompt_tokens", 0);
        response.usage.completion_tokens = reply["usage"].value("completion_tokens", 0);
      }
    } catch (const Json::exception& e) {
      throw MalformedProviderReply(std::string("chat reply missing fields: ") + e.what());
    }
    return response;
  }

  std::vector<std::vector<double>> embeddings(const std::vector<std::string>& texts,
                                              const std::string& model) override {
    Json body = Json{{"model", model}, {"input", texts}};
    Json reply = post_json(options_.embed_base_url, options_.embed_path, body);
    std::vector<std::vector<double>> out;
    try {
      for (const auto& item : reply.at("data"))
        out.push_back(item.at("embedding").get<std::vector<double>>());
    } catch (const Json::exception& e) {
      throw MalformedProviderReply(std::string("embeddings reply missing fields: ") + e.what());
    }
    return out;
  }

 private:
  Json post_json(const std::string& base, const std::string& path, const Json& body) {
    httplib::Client client(base);
    client.set_connection_timeout(options_.timeout_s, 0);
    client.set_read_timeout(options_.timeout_s, 0);
    client.set_write_timeout(options_.timeout_s, 0);
    httplib::Headers headers;
    if (!options_.api_key.empty())
      headers.emplace("Authorization", "Bearer " + options_.api_key);

    auto result = client.Post(path, headers, body.dump(), "application/json");
    if (!result)
      throw TransientProviderError("transport failure: " + httplib::to_string(result.error()));
    int status = result->status;
    if (status == 401 || status == 403)
      throw AuthError("provider rejected credentials (HTTP " + std::to_string(status) + ")");
    if (status == 429 || status >= 500)
      throw TransientProviderError("provider returned HTTP " + std::to_string(status), status);
    if (status != 200)
      throw MalformedProviderReply("unexpected HTTP status " + std::to_string(status) + ": " +
                                   result->body);
    try {
      return Json::parse(result->body);
    } catch (const Json::exception& e) {
      throw MalformedProviderReply(std::string("reply is not valid JSON: ") + e.what());
    }
  }

  HttpProviderOptions options_;
};

inline std::shared_ptr<Provider> make_http_provider(const ProviderSettings& settings) {
  HttpProviderOptions opt;
  opt.base_url = settings.base_url;
  opt.embed_base_url = settings.embed_base_url;
  if (!settings.api_key_env.empty())
    if (const char* key = std::getenv(settings.api_key_env.c_str())) opt.api_key = key;
  return std::make_shared<HttpProvider>(std::move(opt));
}

}  // namespace colloquy
