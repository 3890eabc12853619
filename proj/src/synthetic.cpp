#include "etcir/eval.hpp"

#include <algorithm>
#include <array>

#include "etcir/error.hpp"
#include "etcir/rng.hpp"

namespace etcir {

namespace {

std::uint8_t clamp_channel(int v) { return static_cast<std::uint8_t>(std::clamp(v, 0, 255)); }

int jitter(SplitMix64& rng, int amplitude) {
  return static_cast<int>(bounded_uniform(rng, 2 * amplitude + 1)) - amplitude;
}

}  // namespace

std::vector<CorpusImage> synthetic_corpus(const SyntheticSpec& spec) {
  if (spec.groups == 0 || spec.per_group == 0) {
    throw Error(Errc::invalid_argument, "synthetic corpus needs at least one group and member");
  }
  if (spec.width < kBlockSize || spec.height < kBlockSize) {
    throw Error(Errc::dimension_too_small, "synthetic images must be at least 16x16");
  }

  std::vector<CorpusImage> corpus;
  SplitMix64 rng(spec.seed);
  for (std::size_t g = 0; g < spec.groups; ++g) {
    std::array<Rgb8, 4> palette;
    for (auto& c : palette) {
      c = Rgb8{static_cast<std::uint8_t>(bounded_uniform(rng, 256)),
               static_cast<std::uint8_t>(bounded_uniform(rng, 256)),
               static_cast<std::uint8_t>(bounded_uniform(rng, 256))};
    }
    for (std::size_t k = 0; k < spec.per_group; ++k) {
      ImageBuffer img = ImageBuffer::filled(spec.width, spec.height, palette[0]);
      const std::size_t rects = 3 + bounded_uniform(rng, 4);
      for (std::size_t r = 0; r < rects; ++r) {
        const Rgb8 color = palette[1 + bounded_uniform(rng, 3)];
        const int x0 = static_cast<int>(bounded_uniform(rng, spec.width));
        const int y0 = static_cast<int>(bounded_uniform(rng, spec.height));
        const int w = 8 + static_cast<int>(bounded_uniform(rng, spec.width / 2));
        const int h = 8 + static_cast<int>(bounded_uniform(rng, spec.height / 2));
        for (int y = y0; y < std::min(spec.height, y0 + h); ++y) {
          for (int x = x0; x < std::min(spec.width, x0 + w); ++x) img.at(x, y) = color;
        }
      }
      const int exposure = jitter(rng, 12);
      for (int y = 0; y < spec.height; ++y) {
        for (int x = 0; x < spec.width; ++x) {
          Rgb8& p = img.at(x, y);
          p = Rgb8{clamp_channel(p.r + exposure + jitter(rng, 10)),
                   clamp_channel(p.g + exposure + jitter(rng, 10)),
                   clamp_channel(p.b + exposure + jitter(rng, 10))};
        }
      }
      const std::string gid = "g" + std::to_string(g);
      corpus.push_back(CorpusImage{gid + "_" + std::to_string(k), gid,
                                   "owner" + std::to_string(g % 3), std::move(img)});
    }
  }
  return corpus;
}

}  // namespace etcir
