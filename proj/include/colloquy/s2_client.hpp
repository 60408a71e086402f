#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>

#include "colloquy/errors.hpp"
#include "colloquy/paper_bank.hpp"

namespace colloquy {

struct S2Options {
  std::string base_url = "https://api.semanticscholar.org";
  std::string api_key;  // sent as x-api-key when set
  std::string search_path = "/graph/v1/paper/search";
  int page_limit = 100;
  int max_attempts = 5;  // per page, against 429/5xx
  double retry_delay_s = 1.0;
  int timeout_s = 60;
  std::function<void(double)> sleep_fn;  // injectable for tests
};

namespace detail {

inline std::string url_encode(const std::string& s) {
  static const char* hex = "0123456789ABCDEF";
  std::string out;
  for (unsigned char c : s) {
    if (std::isalnum(c) || c == '-' || c == '_' || c == '.' || c == '~') {
      out.push_back(static_cast<char>(c));
    } else {
      out.push_back('%');
      out.push_back(hex[c >> 4]);
      out.push_back(hex[c & 0xF]);
    }
  }
  return out;
}

}  // namespace detail

// Builds a fetcher that pages through the scholarly-paper search endpoint
// until it has `want` records with both a title and an abstract. Rate limits
// and server errors are retried a few times per page; anything that still
// fails surfaces as RemoteUnavailable.
inline RemoteFetcher make_s2_fetcher(S2Options options) {
  if (!options.sleep_fn)
    options.sleep_fn = [](double s) {
      std::this_thread::sleep_for(std::chrono::duration<double>(s));
    };
  return [options](const Topic& topic, int want) {
    httplib::Client client(options.base_url);
    client.set_connection_timeout(options.timeout_s, 0);
    client.set_read_timeout(options.timeout_s, 0);
    httplib::Headers headers;
    if (!options.api_key.empty()) headers.emplace("x-api-key", options.api_key);

    std::vector<PaperRecord> records;
    int offset = 0;
    while (static_cast<int>(records.size()) < want) {
      int limit = std::min(options.page_limit, want - static_cast<int>(records.size()));
      std::string path = options.search_path + "?query=" + detail::url_encode(topic.description) +
                         "&fields=title,abstract&offset=" + std::to_string(offset) +
                         "&limit=" + std::to_string(limit);

      Json page;
      bool got_page = false;
      for (int attempt = 1; attempt <= options.max_attempts && !got_page; ++attempt) {
        auto result = client.Get(path, headers);
        int status = result ? result->status : 0;
        if (result && status == 200) {
          try {
            page = Json::parse(result->body);
          } catch (const Json::exception& e) {
            throw RemoteUnavailable(std::string("paper search returned invalid JSON: ") +
                                    e.what());
          }
          got_page = true;
        } else if (!result || status == 429 || status >= 500) {
          if (attempt == options.max_attempts)
            throw RemoteUnavailable("paper search failed after " +
                                    std::to_string(options.max_attempts) + " attempts (HTTP " +
                                    std::to_string(status) + ")");
          options.sleep_fn(options.retry_delay_s * attempt);
        } else {
          throw RemoteUnavailable("paper search returned HTTP " + std::to_string(status) + ": " +
                                  (result ? result->body : std::string{}));
        }
      }

      const Json data = page.value("data", Json::array());
      if (data.empty()) break;  // result set exhausted
      auto string_field = [](const Json& item, const char* key) -> std::string {
        auto it = item.find(key);
        return it != item.end() && it->is_string() ? it->get<std::string>() : std::string{};
      };
      for (const auto& item : data) {
        PaperRecord rec;
        rec.paper_id = string_field(item, "paperId");
        rec.title = string_field(item, "title");
        rec.abstract_text = string_field(item, "abstract");
        rec.fetched_at = static_cast<std::int64_t>(std::time(nullptr));
        if (rec.paper_id.empty() || rec.title.empty() || rec.abstract_text.empty()) continue;
        records.push_back(std::move(rec));
        if (static_cast<int>(records.size()) >= want) break;
      }
      offset += static_cast<int>(data.size());
      if (page.contains("total") && offset >= page["total"].get<int>()) break;
    }
    return records;
  };
}

inline RemoteFetcher make_s2_fetcher(const BankSettings& settings) {
  S2Options opt;
  opt.base_url = settings.s2_base_url;
  if (!settings.s2_api_key_env.empty())
    if (const char* key = std::getenv(settings.s2_api_key_env.c_str())) opt.api_key = key;
  return make_s2_fetcher(std::move(opt));
}

}  // namespace colloquy
