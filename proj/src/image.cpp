#include "etcir/image.hpp"

#include <algorithm>
#include <string>

#include "etcir/error.hpp"

namespace etcir {

namespace {

void check_dimensions(int width, int height) {
  if (width < kBlockSize || height < kBlockSize) {
    throw Error(Errc::dimension_too_small,
                "image is " + std::to_string(width) + "x" +
                    std::to_string(height) + "; both sides must be >= 16");
  }
}

}  // namespace

ImageBuffer::ImageBuffer(int width, int height, std::vector<Rgb8> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  check_dimensions(width, height);
  if (pixels_.size() !=
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw Error(Errc::length_mismatch, "pixel count does not match width*height");
  }
}

ImageBuffer ImageBuffer::filled(int width, int height, Rgb8 color) {
  check_dimensions(width, height);
  return ImageBuffer(width, height,
                     std::vector<Rgb8>(static_cast<std::size_t>(width) *
                                           static_cast<std::size_t>(height),
                                       color));
}

ImageBuffer ImageBuffer::from_rgb_bytes(int width, int height,
                                        std::span<const std::uint8_t> bytes) {
  check_dimensions(width, height);
  const auto count =
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() != count * 3) {
    throw Error(Errc::length_mismatch, "RGB byte count does not match width*height*3");
  }
  std::vector<Rgb8> px(count);
  for (std::size_t i = 0; i < count; ++i) {
    px[i] = Rgb8{bytes[3 * i], bytes[3 * i + 1], bytes[3 * i + 2]};
  }
  return ImageBuffer(width, height, std::move(px));
}

std::vector<std::uint8_t> ImageBuffer::rgb_bytes() const {
  std::vector<std::uint8_t> out;
  out.reserve(pixels_.size() * 3);
  for (const Rgb8& p : pixels_) {
    out.push_back(p.r);
    out.push_back(p.g);
    out.push_back(p.b);
  }
  return out;
}

BlockGrid partition_blocks(const ImageBuffer& img) {
  // ImageBuffer already guarantees >= 16 on each side.
  BlockGrid grid;
  grid.cols = img.width() / kBlockSize;
  grid.rows = img.height() / kBlockSize;
  grid.blocks.resize(static_cast<std::size_t>(grid.cols) *
                     static_cast<std::size_t>(grid.rows));
  for (int br = 0; br < grid.rows; ++br) {
    for (int bc = 0; bc < grid.cols; ++bc) {
      Block& blk = grid.blocks[static_cast<std::size_t>(br * grid.cols + bc)];
      for (int y = 0; y < kBlockSize; ++y) {
        for (int x = 0; x < kBlockSize; ++x) {
          blk.at(x, y) = img.at(bc * kBlockSize + x, br * kBlockSize + y);
        }
      }
    }
  }
  return grid;
}

ImageBuffer assemble_blocks(const BlockGrid& grid) {
  if (grid.cols < 1 || grid.rows < 1 ||
      grid.blocks.size() != static_cast<std::size_t>(grid.cols) *
                                static_cast<std::size_t>(grid.rows)) {
    throw Error(Errc::malformed, "block grid shape does not match its block count");
  }
  const int width = grid.cols * kBlockSize;
  const int height = grid.rows * kBlockSize;
  std::vector<Rgb8> px(static_cast<std::size_t>(width) *
                       static_cast<std::size_t>(height));
  for (int br = 0; br < grid.rows; ++br) {
    for (int bc = 0; bc < grid.cols; ++bc) {
      const Block& blk = grid.blocks[static_cast<std::size_t>(br * grid.cols + bc)];
      for (int y = 0; y < kBlockSize; ++y) {
        const auto row = static_cast<std::size_t>(br * kBlockSize + y) *
                         static_cast<std::size_t>(width);
        std::copy_n(&blk.at(0, y), kBlockSize,
                    px.begin() + static_cast<std::ptrdiff_t>(
                                     row + static_cast<std::size_t>(bc * kBlockSize)));
      }
    }
  }
  return ImageBuffer(width, height, std::move(px));
}

ImageBuffer crop16(const ImageBuffer& img) {
  const int width = img.width() / kBlockSize * kBlockSize;
  const int height = img.height() / kBlockSize * kBlockSize;
  if (width == img.width() && height == img.height()) return img;
  std::vector<Rgb8> px;
  px.reserve(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) px.push_back(img.at(x, y));
  }
  return ImageBuffer(width, height, std::move(px));
}

HsvPixel rgb_to_hsv(Rgb8 p) noexcept {
  const int hi = std::max({p.r, p.g, p.b});
  const int lo = std::min({p.r, p.g, p.b});
  const int delta = hi - lo;

  HsvPixel out;
  out.v = hi / 255.0;
  out.s = hi == 0 ? 0.0 : static_cast<double>(delta) / hi;
  if (delta == 0) return out;

  const double d = delta;
  double h;
  if (hi == p.r) {
    h = 60.0 * ((p.g - p.b) / d);
  } else if (hi == p.g) {
    h = 60.0 * ((p.b - p.r) / d + 2.0);
  } else {
    h = 60.0 * ((p.r - p.g) / d + 4.0);
  }
  if (h < 0.0) h += 360.0;
  out.h = h;
  return out;
}

}  // namespace etcir
