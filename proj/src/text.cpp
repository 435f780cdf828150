#include "kgreason/text.hpp"

#include <cctype>

namespace kgreason {

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

std::string_view trim(std::string_view text) {
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

std::string canonical_label(std::string_view label) {
  std::string out(trim(label));
  for (char& c : out) {
    if (c == ' ') c = '_';
  }
  return out;
}

std::string quote_label(std::string_view label) {
  const bool has_single = label.find('\'') != std::string_view::npos;
  const bool has_double = label.find('"') != std::string_view::npos;
  const char quote = (has_single && !has_double) ? '"' : '\'';
  std::string out;
  out.reserve(label.size() + 2);
  out.push_back(quote);
  for (char c : label) {
    if (c == '\\' || c == quote) out.push_back('\\');
    out.push_back(c);
  }
  out.push_back(quote);
  return out;
}

std::string render_list(const std::vector<std::string>& items) {
  std::string out = "[";
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i > 0) out += ", ";
    out += quote_label(items[i]);
  }
  out += "]";
  return out;
}

std::optional<std::string> read_quoted(std::string_view text, std::size_t& pos) {
  const char quote = text[pos];
  std::string out;
  for (std::size_t i = pos + 1; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '\\' && i + 1 < text.size()) {
      out.push_back(text[++i]);
    } else if (c == quote) {
      pos = i + 1;
      return out;
    } else {
      out.push_back(c);
    }
  }
  return std::nullopt;
}

std::optional<std::vector<std::string>> parse_first_list(std::string_view text) {
  const auto open = text.find('[');
  if (open == std::string_view::npos) return std::nullopt;

  std::vector<std::string> items;
  std::string bare;
  bool have_bare = false;
  auto flush_bare = [&] {
    if (have_bare) {
      auto item = trim(bare);
      if (!item.empty()) items.emplace_back(item);
    }
    bare.clear();
    have_bare = false;
  };

  std::size_t pos = open + 1;
  while (pos < text.size()) {
    const char c = text[pos];
    if (c == ']') {
      flush_bare();
      return items;
    }
    if (c == ',') {
      flush_bare();
      ++pos;
    } else if ((c == '\'' || c == '"') && trim(bare).empty()) {
      auto quoted = read_quoted(text, pos);
      if (!quoted) return std::nullopt;
      items.push_back(std::move(*quoted));
      bare.clear();
      have_bare = false;
      // Skip anything up to the next separator.
      while (pos < text.size() && text[pos] != ',' && text[pos] != ']') ++pos;
    } else {
      bare.push_back(c);
      have_bare = true;
      ++pos;
    }
  }
  // Unterminated list.
  return std::nullopt;
}

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace kgreason
