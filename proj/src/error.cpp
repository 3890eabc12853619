#include "etcir/error.hpp"

namespace etcir {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::invalid_argument: return "invalid argument";
    case Errc::dimension_too_small: return "dimension too small";
    case Errc::malformed: return "malformed value";
    case Errc::insufficient_descriptors: return "insufficient descriptors";
    case Errc::empty_corpus: return "empty corpus";
    case Errc::duplicate_id: return "duplicate id";
    case Errc::length_mismatch: return "length mismatch";
    case Errc::hash_mismatch: return "hash mismatch";
    case Errc::parse: return "parse error";
    case Errc::io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace etcir
