#include "atlas/text.hpp"

#include <algorithm>
#include <cctype>

namespace atlas {

namespace {

bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

bool all_digits(const std::string& token) {
  return std::all_of(token.begin(), token.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

void scan(std::string_view text, const StopWords& stopwords, std::vector<std::string>& out) {
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && !is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t start = i;
    while (i < text.size() && is_word_byte(static_cast<unsigned char>(text[i]))) ++i;
    if (i - start < 2) continue;
    std::string token = to_lower_ascii(text.substr(start, i - start));
    if (all_digits(token) || stopwords.contains(token)) continue;
    out.push_back(std::move(token));
  }
}

}  // namespace

std::string to_lower_ascii(std::string_view text) {
  std::string out(text);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::vector<std::string> tokenize(std::string_view title, std::string_view abstract,
                                  const StopWords& stopwords) {
  // Title and abstract are joined by a separator, so scanning them in turn is equivalent.
  std::vector<std::string> out;
  scan(title, stopwords, out);
  scan(abstract, stopwords, out);
  return out;
}

}  // namespace atlas
