#pragma once

// Helpers and independent oracles shared by the test binaries. Nothing here
// calls into the code path it is used to check.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

#include "etcir/image.hpp"

namespace etcir::testing {

inline ImageBuffer random_image(std::mt19937_64& rng, int width, int height) {
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<Rgb8> px(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (auto& p : px) {
    p = Rgb8{static_cast<std::uint8_t>(byte(rng)), static_cast<std::uint8_t>(byte(rng)),
             static_cast<std::uint8_t>(byte(rng))};
  }
  return ImageBuffer(width, height, std::move(px));
}

inline Block random_block(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> byte(0, 255);
  Block b;
  for (auto& p : b.pixels) {
    p = Rgb8{static_cast<std::uint8_t>(byte(rng)), static_cast<std::uint8_t>(byte(rng)),
             static_cast<std::uint8_t>(byte(rng))};
  }
  return b;
}

// Orthonormal Haar basis built row by row from scaled box functions; row 0 is
// the constant 1/16, row 2^j + k is the level-j wavelet at offset k.
inline std::vector<std::array<double, 256>> haar_basis() {
  std::vector<std::array<double, 256>> rows(256);
  rows[0].fill(1.0 / 16.0);
  for (int level = 0; level < 8; ++level) {
    const int count = 1 << level;
    const int support = 256 / count;
    const double amp = std::sqrt(static_cast<double>(count)) / 16.0;
    for (int k = 0; k < count; ++k) {
      auto& row = rows[static_cast<std::size_t>(count + k)];
      row.fill(0.0);
      for (int i = 0; i < support; ++i) {
        row[static_cast<std::size_t>(k * support + i)] = i < support / 2 ? amp : -amp;
      }
    }
  }
  return rows;
}

inline std::array<double, 256> haar_by_matrix(const std::array<double, 256>& x) {
  static const auto basis = haar_basis();
  std::array<double, 256> out{};
  for (std::size_t r = 0; r < 256; ++r) {
    double s = 0.0;
    for (std::size_t i = 0; i < 256; ++i) s += basis[r][i] * x[i];
    out[r] = s;
  }
  return out;
}

// Inverse of the pyramid layout: undo levels from coarsest to finest.
inline std::array<double, 256> inverse_haar(const std::array<double, 256>& c) {
  const double s = 1.0 / std::sqrt(2.0);
  std::array<double, 256> work = c;
  for (std::size_t n = 2; n <= 256; n *= 2) {
    std::array<double, 256> next = work;
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) {
      next[2 * i] = (work[i] + work[half + i]) * s;
      next[2 * i + 1] = (work[i] - work[half + i]) * s;
    }
    work = next;
  }
  return work;
}

// Direct summation of AP: for every rank n, TP@n is recounted from scratch.
inline double brute_force_ap(const std::vector<std::string>& ranking,
                             const std::unordered_set<std::string>& relevant) {
  double sum = 0.0;
  for (std::size_t n = 1; n <= ranking.size(); ++n) {
    if (!relevant.count(ranking[n - 1])) continue;
    std::size_t tp = 0;
    for (std::size_t i = 0; i < n; ++i) tp += relevant.count(ranking[i]);
    sum += static_cast<double>(tp) / static_cast<double>(n);
  }
  return sum / static_cast<double>(relevant.size());
}

}  // namespace etcir::testing
