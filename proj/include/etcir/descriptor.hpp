#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "etcir/codebook.hpp"
#include "etcir/image.hpp"

namespace etcir {

// Visual-word counts of one image; total is its block count.
struct WordHistogram {
  std::vector<std::uint32_t> counts;
  std::uint64_t total = 0;

  friend bool operator==(const WordHistogram&, const WordHistogram&) = default;
};

// Document frequencies over the stored corpus: df[m] is the number of
// histograms with a nonzero count for word m.
struct CorpusStats {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> df;

  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

// l2-normalized tf-idf vector, or all zeros when no component survives.
struct WeightedDescriptor {
  std::vector<double> values;

  friend bool operator==(const WeightedDescriptor&, const WeightedDescriptor&) = default;
};

WordHistogram word_histogram(std::span<const ScdVector> patches, const Codebook& cb);
WordHistogram image_word_histogram(const ImageBuffer& img, const Codebook& cb);

CorpusStats compute_corpus_stats(std::span<const WordHistogram> hists);

// v(m) = (1 + ln tf(m)) * ln(N / df(m)), zero where tf or df is zero, then
// l2 normalization.
WeightedDescriptor weight(const WordHistogram& h, const CorpusStats& stats);

// Query images are weighted with the stored corpus' stats.
WeightedDescriptor describe(const ImageBuffer& img, const Codebook& cb,
                            const CorpusStats& stats);

}  // namespace etcir
