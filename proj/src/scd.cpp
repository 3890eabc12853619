#include "etcir/scd.hpp"

#include <algorithm>
#include <cmath>

namespace etcir {

std::size_t hsv_bin_index(const HsvPixel& p) noexcept {
  const int h = std::min(static_cast<int>(std::floor(p.h / 22.5)), kHueBins - 1);
  const int s = std::min(static_cast<int>(std::floor(p.s * kSatBins)), kSatBins - 1);
  const int v = std::min(static_cast<int>(std::floor(p.v * kValBins)), kValBins - 1);
  return static_cast<std::size_t>(h * kSatBins * kValBins + s * kValBins + v);
}

ColorHistogram block_histogram(const Block& block) {
  // Integer counts first so the result is independent of pixel order.
  std::array<int, kScdLength> counts{};
  for (const Rgb8& px : block.pixels) ++counts[hsv_bin_index(rgb_to_hsv(px))];

  ColorHistogram hist;
  for (std::size_t i = 0; i < kScdLength; ++i) {
    hist.bins[i] = counts[i] / static_cast<double>(kBlockPixels);
  }
  return hist;
}

ScdVector haar_transform(const ColorHistogram& hist) {
  static const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

  std::array<double, kScdLength> work = hist.bins;
  ScdVector out;
  for (std::size_t n = kScdLength; n > 1; n /= 2) {
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) {
      const double a = work[2 * i];
      const double b = work[2 * i + 1];
      out.coeffs[i] = (a + b) * kInvSqrt2;
      out.coeffs[half + i] = (a - b) * kInvSqrt2;
    }
    std::copy_n(out.coeffs.begin(), half, work.begin());
  }
  return out;
}

ScdVector scd(const Block& block) { return haar_transform(block_histogram(block)); }

std::vector<ScdVector> block_descriptors(const ImageBuffer& img) {
  const BlockGrid grid = partition_blocks(img);
  std::vector<ScdVector> out;
  out.reserve(grid.size());
  for (const Block& b : grid.blocks) out.push_back(scd(b));
  return out;
}

}  // namespace etcir
