#pragma once

#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

namespace kgqg {

inline bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

// Trim both ends and collapse internal whitespace runs to a single space.
// This is the normal form used for triple equality everywhere.
inline std::string normalize_ws(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      if (!out.empty()) pending_space = true;
    } else {
      if (pending_space) out.push_back(' ');
      pending_space = false;
      out.push_back(c);
    }
  }
  return out;
}

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t b = i;
    while (i < s.size() && !is_space(s[i])) ++i;
    if (i > b) out.emplace_back(s.substr(b, i - b));
  }
  return out;
}

// Marker vocabulary of the serialization format. Bit-exact, see the
// context builder. [TRIPLE]/[QUESTION] frame model outputs.
inline const std::array<std::string_view, 9>& markers() {
  static const std::array<std::string_view, 9> m = {
      "</t>", "<t>", "<sj>", "<p>", "<o>", "<q>", "<a>", "[TRIPLE]", "[QUESTION]"};
  return m;
}

inline bool is_marker(std::string_view tok) {
  for (auto m : markers())
    if (tok == m) return true;
  return false;
}

// Split into whitespace tokens, additionally cutting markers out of words
// they are glued to, so "<sj>Ada" becomes ["<sj>", "Ada"].
inline std::vector<std::string> marker_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) {
      out.push_back(word);
      word.clear();
    }
  };
  std::size_t i = 0;
  while (i < s.size()) {
    if (is_space(s[i])) {
      flush();
      ++i;
      continue;
    }
    bool matched = false;
    if (s[i] == '<' || s[i] == '[') {
      for (auto m : markers()) {
        if (s.substr(i, m.size()) == m) {
          flush();
          out.emplace_back(m);
          i += m.size();
          matched = true;
          break;
        }
      }
    }
    if (!matched) {
      word.push_back(s[i]);
      ++i;
    }
  }
  flush();
  return out;
}

// Model-size proxy used by the length filter: whitespace tokens after
// marker-aware splitting, each marker counting as one token.
inline std::size_t token_len(std::string_view s) {
  return marker_tokens(s).size();
}

// GLEU tokenization: lowercase, punctuation split off as single-char
// tokens. Non-ASCII bytes are treated as word characters.
inline std::vector<std::string> gleu_tokens(std::string_view s, bool split_punct = true) {
  std::vector<std::string> out;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) {
      out.push_back(word);
      word.clear();
    }
  };
  for (char c : s) {
    unsigned char u = static_cast<unsigned char>(c);
    if (std::isspace(u)) {
      flush();
    } else if (split_punct && u < 0x80 && !std::isalnum(u)) {
      flush();
      out.emplace_back(1, static_cast<char>(std::tolower(u)));
    } else {
      word.push_back(static_cast<char>(u < 0x80 ? std::tolower(u) : u));
    }
  }
  flush();
  return out;
}

}  // namespace kgqg
