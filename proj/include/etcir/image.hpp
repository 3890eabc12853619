#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace etcir {

inline constexpr int kBlockSize = 16;
inline constexpr int kBlockPixels = kBlockSize * kBlockSize;

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend auto operator<=>(const Rgb8&, const Rgb8&) = default;
};

// Row-major 8-bit RGB image, at least one block in each dimension.
class ImageBuffer {
 public:
  ImageBuffer(int width, int height, std::vector<Rgb8> pixels);
  static ImageBuffer filled(int width, int height, Rgb8 color);
  // Interleaved RGB bytes, width * height * 3 of them.
  static ImageBuffer from_rgb_bytes(int width, int height,
                                    std::span<const std::uint8_t> bytes);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::span<const Rgb8> pixels() const noexcept { return pixels_; }

  const Rgb8& at(int x, int y) const { return pixels_[index(x, y)]; }
  Rgb8& at(int x, int y) { return pixels_[index(x, y)]; }

  std::vector<std::uint8_t> rgb_bytes() const;

  friend bool operator==(const ImageBuffer&, const ImageBuffer&) = default;

 private:
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }

  int width_;
  int height_;
  std::vector<Rgb8> pixels_;
};

struct Block {
  std::array<Rgb8, kBlockPixels> pixels{};

  const Rgb8& at(int x, int y) const { return pixels[y * kBlockSize + x]; }
  Rgb8& at(int x, int y) { return pixels[y * kBlockSize + x]; }

  friend bool operator==(const Block&, const Block&) = default;
};

// Raster-order (left-to-right, top-to-bottom) blocks of an image.
struct BlockGrid {
  int cols = 0;
  int rows = 0;
  std::vector<Block> blocks;

  std::size_t size() const noexcept { return blocks.size(); }
};

struct HsvPixel {
  double h = 0.0;  // degrees, [0, 360)
  double s = 0.0;  // [0, 1]
  double v = 0.0;  // [0, 1]
};

BlockGrid partition_blocks(const ImageBuffer& img);
ImageBuffer assemble_blocks(const BlockGrid& grid);

// Image cropped to the largest multiples of the block size.
ImageBuffer crop16(const ImageBuffer& img);

// Hexcone model; hue is 0 for achromatic pixels.
HsvPixel rgb_to_hsv(Rgb8 p) noexcept;

}  // namespace etcir
