#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "poisim/error.hpp"

// Classification of URLs into user-generated-content platforms, and the
// community-prefix scheme used for prefix-targeted interposition
// (platform domain plus at most two path segments, e.g. "reddit.com/r/answers").

namespace poisim {

enum class Platform {
  reddit,
  youtube,
  facebook,
  wikipedia,
  instagram,
  tiktok,
  medium,
  quora,
  other_ugc,
  non_ugc,
};

inline const char* platform_name(Platform p) {
  switch (p) {
    case Platform::reddit: return "reddit";
    case Platform::youtube: return "youtube";
    case Platform::facebook: return "facebook";
    case Platform::wikipedia: return "wikipedia";
    case Platform::instagram: return "instagram";
    case Platform::tiktok: return "tiktok";
    case Platform::medium: return "medium";
    case Platform::quora: return "quora";
    case Platform::other_ugc: return "other_ugc";
    case Platform::non_ugc: return "non_ugc";
  }
  return "non_ugc";
}

inline Platform parse_platform(std::string_view name) {
  for (Platform p : {Platform::reddit, Platform::youtube, Platform::facebook,
                     Platform::wikipedia, Platform::instagram, Platform::tiktok,
                     Platform::medium, Platform::quora, Platform::other_ugc,
                     Platform::non_ugc}) {
    if (name == platform_name(p)) return p;
  }
  throw ParseError("unknown platform label: '" + std::string(name) + "'");
}

inline bool is_ugc(Platform p) { return p != Platform::non_ugc; }

/// One registrable domain mapped to a platform label.
struct PlatformRule {
  std::string domain;  // lowercase registrable domain, e.g. "reddit.com"
  Platform platform = Platform::other_ugc;
};

using PlatformConfig = std::vector<PlatformRule>;

/// The stock ruleset: the eight tracked platforms.
inline PlatformConfig default_platform_config() {
  return {
      {"reddit.com", Platform::reddit},       {"youtube.com", Platform::youtube},
      {"facebook.com", Platform::facebook},   {"wikipedia.org", Platform::wikipedia},
      {"instagram.com", Platform::instagram}, {"tiktok.com", Platform::tiktok},
      {"medium.com", Platform::medium},       {"quora.com", Platform::quora},
  };
}

/// Parse a JSON array of {"domain": ..., "platform": ...} objects.
inline PlatformConfig load_platform_config(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("platform config: expected a JSON array");
  PlatformConfig out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto& e = j[i];
    if (!e.is_object() || !e.contains("domain") || !e.contains("platform")) {
      throw ParseError("platform config[" + std::to_string(i) +
                       "]: expected {domain, platform}");
    }
    std::string domain = e.at("domain").get<std::string>();
    std::transform(domain.begin(), domain.end(), domain.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    out.push_back({std::move(domain), parse_platform(e.at("platform").get<std::string>())});
  }
  return out;
}

/// Host plus path segments; scheme, query and fragment already stripped.
struct ParsedUrl {
  std::string host;                     // lowercased, one leading "www." removed
  std::vector<std::string> segments;    // path segments, original case
};

namespace detail {

inline bool host_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-';
}

}  // namespace detail

/// Parse enough of a URL for classification: optional scheme, host, path.
/// Throws ParseError for strings that cannot be a URL (whitespace, empty or
/// dotless host, illegal host characters).
inline ParsedUrl parse_url(std::string_view url) {
  if (url.empty()) throw ParseError("not a URL: empty string");
  for (char c : url) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      throw ParseError("not a URL: '" + std::string(url) + "'");
    }
  }
  std::string_view rest = url;
  if (auto pos = rest.find("://"); pos != std::string_view::npos) {
    rest = rest.substr(pos + 3);
  }
  // Authority ends at the first path/query/fragment delimiter.
  std::size_t end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, end);
  if (auto at = authority.rfind('@'); at != std::string_view::npos) {
    authority = authority.substr(at + 1);
  }
  if (auto colon = authority.find(':'); colon != std::string_view::npos) {
    authority = authority.substr(0, colon);
  }
  if (authority.empty() || authority.find('.') == std::string_view::npos) {
    throw ParseError("not a URL: '" + std::string(url) + "'");
  }
  ParsedUrl out;
  out.host.reserve(authority.size());
  for (char c : authority) {
    if (!detail::host_char(c)) throw ParseError("not a URL: '" + std::string(url) + "'");
    out.host.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (out.host.rfind("www.", 0) == 0 && out.host.size() > 4) {
    out.host.erase(0, 4);
  }
  if (end != std::string_view::npos && rest[end] == '/') {
    std::string_view path = rest.substr(end);
    if (auto q = path.find_first_of("?#"); q != std::string_view::npos) {
      path = path.substr(0, q);
    }
    std::string seg;
    for (char c : path.substr(1)) {
      if (c == '/') {
        if (!seg.empty()) out.segments.push_back(std::move(seg));
        seg.clear();
      } else {
        seg.push_back(c);
      }
    }
    if (!seg.empty()) out.segments.push_back(std::move(seg));
  }
  return out;
}

/// Map a URL to its platform. Subdomains classify as the parent platform;
/// anything off the ruleset is non_ugc. Throws ParseError on non-URLs.
inline Platform classify_url(std::string_view url,
                             const PlatformConfig& config = default_platform_config()) {
  const ParsedUrl u = parse_url(url);
  for (const auto& rule : config) {
    if (u.host == rule.domain) return rule.platform;
    if (u.host.size() > rule.domain.size() + 1 &&
        u.host.compare(u.host.size() - rule.domain.size() - 1, std::string::npos,
                       "." + rule.domain) == 0) {
      return rule.platform;
    }
  }
  return Platform::non_ugc;
}

/// Domain plus the first two path segments; idempotent, case preserved in the
/// path, query/fragment/trailing slash stripped.
inline std::string community_prefix(std::string_view url) {
  const ParsedUrl u = parse_url(url);
  std::string out = u.host;
  for (std::size_t i = 0; i < u.segments.size() && i < 2; ++i) {
    out.push_back('/');
    out.append(u.segments[i]);
  }
  return out;
}

/// Whole-segment prefix match: true iff community_prefix(url) starts with
/// `prefix` on segment boundaries. "reddit.com/r/Comcast" does not match the
/// prefix "reddit.com/r/Comcast_Xfinity".
inline bool matches_prefix(std::string_view url, std::string_view prefix) {
  const ParsedUrl u = parse_url(url);
  const ParsedUrl p = parse_url(prefix);
  if (u.host != p.host) return false;
  if (p.segments.size() > 2) return false;  // community prefixes carry <= 2 segments
  if (p.segments.size() > u.segments.size()) return false;
  for (std::size_t i = 0; i < p.segments.size(); ++i) {
    if (u.segments[i] != p.segments[i]) return false;
  }
  return true;
}

}  // namespace poisim
