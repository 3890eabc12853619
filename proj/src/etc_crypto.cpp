#include "etcir/etc_crypto.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "etcir/error.hpp"
#include "etcir/rng.hpp"

namespace etcir {

bool Permutation::is_bijection() const {
  std::vector<bool> seen(mapping.size(), false);
  for (std::size_t v : mapping) {
    if (v >= mapping.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

DihedralCode::DihedralCode(int code) : code_(code) {
  if (code < 0 || code >= 8) {
    throw Error(Errc::invalid_argument,
                "dihedral code out of range: " + std::to_string(code));
  }
}

Permutation derive_permutation(std::uint64_t k1, std::size_t block_count) {
  if (block_count == 0) {
    throw Error(Errc::invalid_argument, "permutation needs at least one block");
  }
  Permutation perm;
  perm.mapping.resize(block_count);
  std::iota(perm.mapping.begin(), perm.mapping.end(), std::size_t{0});
  SplitMix64 stream(k1);
  for (std::size_t i = block_count - 1; i >= 1; --i) {
    const auto j = static_cast<std::size_t>(bounded_uniform(stream, i + 1));
    std::swap(perm.mapping[i], perm.mapping[j]);
  }
  return perm;
}

std::vector<DihedralCode> derive_dihedral_codes(std::uint64_t k2,
                                                std::size_t block_count) {
  if (block_count == 0) {
    throw Error(Errc::invalid_argument, "dihedral codes need at least one block");
  }
  SplitMix64 stream(k2);
  std::vector<DihedralCode> codes;
  codes.reserve(block_count);
  for (std::size_t i = 0; i < block_count; ++i) {
    codes.emplace_back(static_cast<int>(bounded_uniform(stream, 8)));
  }
  return codes;
}

namespace {

constexpr int kLast = kBlockSize - 1;

Block rotate_cw(const Block& in) {
  Block out;
  for (int y = 0; y < kBlockSize; ++y) {
    for (int x = 0; x < kBlockSize; ++x) out.at(x, y) = in.at(y, kLast - x);
  }
  return out;
}

Block mirror(const Block& in) {
  Block out;
  for (int y = 0; y < kBlockSize; ++y) {
    for (int x = 0; x < kBlockSize; ++x) out.at(x, y) = in.at(kLast - x, y);
  }
  return out;
}

}  // namespace

Block apply_dihedral(const Block& block, DihedralCode code) {
  Block out = block;
  for (int i = 0; i < code.quarter_turns(); ++i) out = rotate_cw(out);
  if (code.flipped()) out = mirror(out);
  return out;
}

DihedralCode invert_dihedral(DihedralCode code) {
  // Reflections are involutions; rotations invert to the complementary turn.
  if (code.flipped()) return code;
  return DihedralCode((4 - code.quarter_turns()) % 4);
}

ImageBuffer encrypt(const ImageBuffer& img, const KeySet& keys) {
  const BlockGrid plain = partition_blocks(img);
  const Permutation perm = derive_permutation(keys.k1, plain.size());
  const auto codes = derive_dihedral_codes(keys.k2, plain.size());

  BlockGrid scrambled{plain.cols, plain.rows, {}};
  scrambled.blocks.reserve(plain.size());
  for (std::size_t p = 0; p < plain.size(); ++p) {
    scrambled.blocks.push_back(apply_dihedral(plain.blocks[perm.mapping[p]], codes[p]));
  }
  return assemble_blocks(scrambled);
}

ImageBuffer decrypt(const ImageBuffer& etc, const KeySet& keys) {
  if (etc.width() % kBlockSize != 0 || etc.height() % kBlockSize != 0) {
    throw Error(Errc::malformed,
                "encrypted image dimensions must be multiples of 16");
  }
  const BlockGrid scrambled = partition_blocks(etc);
  const Permutation perm = derive_permutation(keys.k1, scrambled.size());
  const auto codes = derive_dihedral_codes(keys.k2, scrambled.size());

  BlockGrid plain{scrambled.cols, scrambled.rows,
                  std::vector<Block>(scrambled.size())};
  for (std::size_t p = 0; p < scrambled.size(); ++p) {
    plain.blocks[perm.mapping[p]] =
        apply_dihedral(scrambled.blocks[p], invert_dihedral(codes[p]));
  }
  return assemble_blocks(plain);
}

KeySet derive_keyset(std::uint64_t master_seed, std::uint64_t index) noexcept {
  // SplitMix64 state after n steps is seed + n * gamma, so jump directly.
  SplitMix64 stream(master_seed + 2 * index * kSplitMixGamma);
  KeySet keys;
  keys.k1 = stream.next();
  keys.k2 = stream.next();
  return keys;
}

}  // namespace etcir
