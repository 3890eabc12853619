#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "etcir/image.hpp"

namespace etcir {

inline constexpr std::size_t kScdLength = 256;
inline constexpr int kHueBins = 16;
inline constexpr int kSatBins = 4;
inline constexpr int kValBins = 4;

// Normalized 16(H) x 4(S) x 4(V) histogram, index = h*16 + s*4 + v.
struct ColorHistogram {
  std::array<double, kScdLength> bins{};
};

// Haar coefficients of a ColorHistogram: approximation first, then detail
// bands from coarsest to finest.
struct ScdVector {
  std::array<double, kScdLength> coeffs{};

  friend bool operator==(const ScdVector&, const ScdVector&) = default;
};

std::size_t hsv_bin_index(const HsvPixel& p) noexcept;

ColorHistogram block_histogram(const Block& block);
ScdVector haar_transform(const ColorHistogram& hist);

// Patch descriptor of one 16x16 block. Depends only on the block's pixel
// multiset, so any rotation or mirroring of the block leaves it unchanged.
ScdVector scd(const Block& block);

// scd() of every 16x16 block of the image, in raster order.
std::vector<ScdVector> block_descriptors(const ImageBuffer& img);

}  // namespace etcir
