#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kgreason {

std::string_view trim(std::string_view text);

// Entity and type labels compare after trimming and mapping spaces to
// underscores, so `William Anders` and `William_Anders` are the same key.
std::string canonical_label(std::string_view label);

// Quotes a label the way the prompt examples do: single quotes unless the
// label holds an apostrophe (and no double quote), in which case double
// quotes. Backslashes and the chosen quote character are escaped.
std::string quote_label(std::string_view label);

// `['a', 'b']`
std::string render_list(const std::vector<std::string>& items);

// Items of the first `[...]` list in `text`. Items may be single-quoted,
// double-quoted or bare; quoted items honour backslash escapes. Returns
// nullopt when no bracketed list is present.
std::optional<std::vector<std::string>> parse_first_list(std::string_view text);

// Reads one quoted string starting at text[pos] (which must be ' or ").
// Advances pos past the closing quote. Returns nullopt if unterminated.
std::optional<std::string> read_quoted(std::string_view text, std::size_t& pos);

std::string ascii_lower(std::string_view text);

}  // namespace kgreason
