#include "etcir/descriptor.hpp"

#include <cmath>

#include "etcir/error.hpp"

namespace etcir {

WordHistogram word_histogram(std::span<const ScdVector> patches, const Codebook& cb) {
  WordHistogram h;
  h.counts.assign(cb.size(), 0);
  for (const ScdVector& p : patches) ++h.counts[assign(p, cb)];
  h.total = patches.size();
  return h;
}

WordHistogram image_word_histogram(const ImageBuffer& img, const Codebook& cb) {
  return word_histogram(block_descriptors(img), cb);
}

CorpusStats compute_corpus_stats(std::span<const WordHistogram> hists) {
  if (hists.empty()) throw Error(Errc::empty_corpus, "corpus stats need at least one histogram");
  CorpusStats stats;
  stats.n = hists.size();
  stats.df.assign(hists.front().counts.size(), 0);
  for (const WordHistogram& h : hists) {
    if (h.counts.size() != stats.df.size()) {
      throw Error(Errc::length_mismatch, "histograms disagree on codebook size");
    }
    for (std::size_t m = 0; m < h.counts.size(); ++m) {
      if (h.counts[m] > 0) ++stats.df[m];
    }
  }
  return stats;
}

WeightedDescriptor weight(const WordHistogram& h, const CorpusStats& stats) {
  if (stats.n == 0) throw Error(Errc::empty_corpus, "corpus stats have N = 0");
  if (h.counts.size() != stats.df.size()) {
    throw Error(Errc::length_mismatch, "histogram and corpus stats disagree on codebook size");
  }
  const double n = static_cast<double>(stats.n);
  WeightedDescriptor out;
  out.values.assign(h.counts.size(), 0.0);
  double norm2 = 0.0;
  for (std::size_t m = 0; m < h.counts.size(); ++m) {
    if (h.counts[m] == 0 || stats.df[m] == 0) continue;
    const double tf = 1.0 + std::log(static_cast<double>(h.counts[m]));
    const double idf = std::log(n / static_cast<double>(stats.df[m]));
    out.values[m] = tf * idf;
    norm2 += out.values[m] * out.values[m];
  }
  if (norm2 > 0.0) {
    const double norm = std::sqrt(norm2);
    for (double& v : out.values) v /= norm;
  }
  return out;
}

WeightedDescriptor describe(const ImageBuffer& img, const Codebook& cb,
                            const CorpusStats& stats) {
  return weight(image_word_histogram(img, cb), stats);
}

}  // namespace etcir
