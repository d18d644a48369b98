#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "poisim/error.hpp"

// Pluggable interfaces to optional live backends (an LLM endpoint for payload
// generation and a scoring endpoint for detector features). The simulator
// never requires them: every code path has a deterministic offline fallback,
// and these wire formats exist so a thin HTTP adapter can be dropped in.

namespace poisim {

/// One text-generation request against an instruction-following model.
struct GenerationRequest {
  std::string system_prompt;
  std::string user_prompt;
  double temperature = 0.0;
  int max_tokens = 512;
};

struct GenerationResponse {
  std::string text;
};

class TextGenerator {
public:
  virtual ~TextGenerator() = default;
  virtual GenerationResponse generate(const GenerationRequest& request) = 0;
};

inline nlohmann::json to_json(const GenerationRequest& r) {
  return nlohmann::json{{"system_prompt", r.system_prompt},
                        {"user_prompt", r.user_prompt},
                        {"temperature", r.temperature},
                        {"max_tokens", r.max_tokens}};
}

inline GenerationRequest generation_request_from_json(const nlohmann::json& j) {
  GenerationRequest r;
  if (!j.is_object() || !j.contains("system_prompt") || !j.contains("user_prompt")) {
    throw ParseError("generation request: expected {system_prompt, user_prompt, ...}");
  }
  r.system_prompt = j.at("system_prompt").get<std::string>();
  r.user_prompt = j.at("user_prompt").get<std::string>();
  if (j.contains("temperature")) r.temperature = j.at("temperature").get<double>();
  if (j.contains("max_tokens")) r.max_tokens = j.at("max_tokens").get<int>();
  return r;
}

inline GenerationResponse generation_response_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("text") || !j.at("text").is_string()) {
    throw ParseError("generation response: expected {text}");
  }
  return {j.at("text").get<std::string>()};
}

/// Per-token scoring result from a remote language model.
struct ScoredToken {
  std::string token;
  double logprob = 0.0;
  int rank = 0;  // 1-based rank of the token in the model's next-token ordering
};

class TokenScorer {
public:
  virtual ~TokenScorer() = default;
  virtual std::vector<ScoredToken> score(const std::string& text) = 0;
};

inline nlohmann::json score_request_json(const std::string& text) {
  return nlohmann::json{{"text", text}};
}

inline std::vector<ScoredToken> score_response_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("tokens") || !j.at("tokens").is_array()) {
    throw ParseError("score response: expected {tokens: [...]}");
  }
  std::vector<ScoredToken> out;
  for (const auto& t : j.at("tokens")) {
    if (!t.is_object() || !t.contains("token") || !t.contains("logprob") || !t.contains("rank")) {
      throw ParseError("score response token: expected {token, logprob, rank}");
    }
    out.push_back({t.at("token").get<std::string>(), t.at("logprob").get<double>(),
                   t.at("rank").get<int>()});
  }
  return out;
}

/// Environment variables naming optional live endpoints; unset means offline.
inline constexpr const char* kGeneratorUrlEnv = "POISIM_GENERATOR_URL";
inline constexpr const char* kScorerUrlEnv = "POISIM_SCORER_URL";

}  // namespace poisim
