#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "etcir/image.hpp"

namespace etcir {

// K1 drives the block permutation, K2 the per-block rotation/inversion.
struct KeySet {
  std::uint64_t k1 = 0;
  std::uint64_t k2 = 0;

  friend bool operator==(const KeySet&, const KeySet&) = default;
};

// Output position p receives source block mapping[p].
struct Permutation {
  std::vector<std::size_t> mapping;

  std::size_t size() const noexcept { return mapping.size(); }
  bool is_bijection() const;
};

// Element of D4: rotate clockwise by 90 * (code % 4), then mirror left-right
// when code >= 4.
class DihedralCode {
 public:
  constexpr DihedralCode() = default;
  explicit DihedralCode(int code);

  constexpr int value() const noexcept { return code_; }
  constexpr int quarter_turns() const noexcept { return code_ % 4; }
  constexpr bool flipped() const noexcept { return code_ >= 4; }

  friend constexpr bool operator==(DihedralCode, DihedralCode) = default;

 private:
  int code_ = 0;
};

Permutation derive_permutation(std::uint64_t k1, std::size_t block_count);

// One code per output (permuted) block position.
std::vector<DihedralCode> derive_dihedral_codes(std::uint64_t k2,
                                                std::size_t block_count);

Block apply_dihedral(const Block& block, DihedralCode code);
DihedralCode invert_dihedral(DihedralCode code);

// Output is cropped to multiples of 16 in both dimensions.
ImageBuffer encrypt(const ImageBuffer& img, const KeySet& keys);

// Requires dimensions that are multiples of 16.
ImageBuffer decrypt(const ImageBuffer& etc, const KeySet& keys);

// Key set for image `index` under a master seed: outputs 2*index and
// 2*index + 1 of the master stream.
KeySet derive_keyset(std::uint64_t master_seed, std::uint64_t index) noexcept;

}  // namespace etcir
