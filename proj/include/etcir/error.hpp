#pragma once

#include <stdexcept>
#include <string>

namespace etcir {

enum class Errc {
  invalid_argument,
  dimension_too_small,
  malformed,
  insufficient_descriptors,
  empty_corpus,
  duplicate_id,
  length_mismatch,
  hash_mismatch,
  parse,
  io,
};

const char* errc_name(Errc code) noexcept;

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace etcir
