#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "etcir/image.hpp"

namespace etcir {

enum class ImageFormat { ppm, png, jpeg };

// Chosen from the file extension: .ppm, .png, .jpg/.jpeg.
ImageFormat format_for_path(const std::filesystem::path& path);

// Detects PPM (P6), PNG or JPEG from the leading bytes. Alpha is dropped and
// grayscale or palette images are expanded to RGB.
ImageBuffer decode_image(std::span<const std::uint8_t> bytes);
ImageBuffer read_image(const std::filesystem::path& path);

std::vector<std::uint8_t> encode_ppm(const ImageBuffer& img);
std::vector<std::uint8_t> encode_png(const ImageBuffer& img);
std::vector<std::uint8_t> encode_jpeg(const ImageBuffer& img, int quality);

void write_image(const ImageBuffer& img, const std::filesystem::path& path,
                 int jpeg_quality = 90);

// Encode then decode at the given quality (lossy path).
ImageBuffer jpeg_roundtrip(const ImageBuffer& img, int quality);

}  // namespace etcir
