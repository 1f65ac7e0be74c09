#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace atlas {

using StopWords = std::unordered_set<std::string>;

/// Concatenates title and abstract, splits on non-alphanumeric bytes, lowercases
/// ASCII, then drops tokens shorter than two bytes, pure-digit tokens and stop
/// words. Bytes >= 0x80 count as word characters so UTF-8 words stay intact.
std::vector<std::string> tokenize(std::string_view title, std::string_view abstract,
                                  const StopWords& stopwords);

std::string to_lower_ascii(std::string_view text);

/// Built-in English stop-word list.
const StopWords& default_stopwords();

/// One term per line; blank lines and surrounding whitespace ignored, terms lowercased.
StopWords load_stopwords(const std::string& path);

}  // namespace atlas
