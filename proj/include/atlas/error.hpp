#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace atlas {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class CorpusError : public Error {
public:
  using Error::Error;
};

class VocabularyError : public Error {
public:
  using Error::Error;
};

class ModelError : public Error {
public:
  using Error::Error;
};

class EmbeddingError : public Error {
public:
  using Error::Error;
};

class BundleError : public Error {
public:
  using Error::Error;
};

/// Raised when a named author or venue does not exist. Carries the closest
/// known names so callers can offer them back to the user.
class LookupError : public Error {
public:
  LookupError(const std::string& what, std::vector<std::string> suggestions)
      : Error(what), suggestions_(std::move(suggestions)) {}

  const std::vector<std::string>& suggestions() const noexcept { return suggestions_; }

private:
  std::vector<std::string> suggestions_;
};

}  // namespace atlas
