#pragma once

#include <string>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "poisim/clients.hpp"
#include "poisim/error.hpp"

// Thin HTTP adapters for the live-backend interfaces. Only the CLI includes
// this header, and only when the corresponding environment variable names an
// endpoint; the library core stays offline.

namespace poisim {

namespace detail {

inline nlohmann::json post_json(const std::string& base_url, const std::string& path,
                                const nlohmann::json& body) {
  httplib::Client client(base_url);
  client.set_connection_timeout(10, 0);
  client.set_read_timeout(120, 0);
  auto res = client.Post(path, body.dump(), "application/json");
  if (!res) {
    throw Error("endpoint " + base_url + path + " unreachable: " +
                httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw Error("endpoint " + base_url + path + " returned status " +
                std::to_string(res->status));
  }
  try {
    return nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("endpoint response is not JSON: ") + e.what());
  }
}

}  // namespace detail

class HttpTextGenerator final : public TextGenerator {
public:
  explicit HttpTextGenerator(std::string base_url, std::string path = "/generate")
      : base_url_(std::move(base_url)), path_(std::move(path)) {}

  GenerationResponse generate(const GenerationRequest& request) override {
    return generation_response_from_json(
        detail::post_json(base_url_, path_, to_json(request)));
  }

private:
  std::string base_url_;
  std::string path_;
};

class HttpTokenScorer final : public TokenScorer {
public:
  explicit HttpTokenScorer(std::string base_url, std::string path = "/score")
      : base_url_(std::move(base_url)), path_(std::move(path)) {}

  std::vector<ScoredToken> score(const std::string& text) override {
    return score_response_from_json(
        detail::post_json(base_url_, path_, score_request_json(text)));
  }

private:
  std::string base_url_;
  std::string path_;
};

}  // namespace poisim
