#pragma once

#include <cctype>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

// Small text utilities shared by the simulators, the payload engine and the
// detectors. Word = maximal run of non-whitespace; token = lowercased maximal
// run of alphanumerics. All budgets in the pipelines are counted in words.

namespace poisim {

/// Split on whitespace runs; views point into `text`.
inline std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) out.push_back(text.substr(i, j - i));
    i = j;
  }
  return out;
}

inline int word_count(std::string_view text) {
  return static_cast<int>(split_words(text).size());
}

/// Join words [from, to) with single spaces.
inline std::string join_words(const std::vector<std::string_view>& words,
                              std::size_t from, std::size_t to) {
  std::string out;
  for (std::size_t i = from; i < to && i < words.size(); ++i) {
    if (!out.empty()) out.push_back(' ');
    out.append(words[i]);
  }
  return out;
}

/// Collapse whitespace runs to single spaces and trim the ends.
inline std::string normalize_ws(std::string_view text) {
  auto w = split_words(text);
  return join_words(w, 0, w.size());
}

/// First `n` words of `text`, single-spaced (word-boundary truncation).
inline std::string truncate_words(std::string_view text, int n) {
  if (n <= 0) return {};
  auto w = split_words(text);
  return join_words(w, 0, static_cast<std::size_t>(n));
}

/// Lowercased alphanumeric tokens, splitting on every other byte.
inline std::vector<std::string> alnum_tokens(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

namespace detail {
inline bool sentence_end(char c) { return c == '.' || c == '!' || c == '?'; }
}  // namespace detail

/// Split into sentences at '.', '!' or '?'; terminators stay attached.
/// Text after the last terminator forms a final sentence of its own.
inline std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (detail::sentence_end(text[i])) {
      std::string s = normalize_ws(text.substr(start, i - start + 1));
      if (!s.empty()) out.push_back(std::move(s));
      start = i + 1;
    }
  }
  std::string tail = normalize_ws(text.substr(start));
  if (!tail.empty()) out.push_back(std::move(tail));
  return out;
}

/// First sentence of `text` (whole text when no terminator is present).
inline std::string first_sentence(std::string_view text) {
  auto s = split_sentences(text);
  return s.empty() ? std::string{} : s.front();
}

inline bool contains(std::string_view text, std::string_view needle) {
  return text.find(needle) != std::string_view::npos;
}

/// Fixed-point formatting used by every table emitter (1 or 3 decimals).
inline std::string fmt_fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

inline std::string fmt1(double v) { return fmt_fixed(v, 1); }
inline std::string fmt3(double v) { return fmt_fixed(v, 3); }

}  // namespace poisim
