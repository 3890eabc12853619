#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "etcir/scd.hpp"

namespace etcir {

struct ClusteringConfig {
  std::size_t m = 256;
  std::uint64_t seed = 0;
  std::size_t max_iters = 100;
  // Threshold on the summed l2 movement of all centroids in one iteration.
  double tol = 1e-9;
};

// M visual words plus the clustering provenance needed to rebuild them.
struct Codebook {
  std::vector<ScdVector> words;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  std::size_t max_iters = 0;
  double tol = 0.0;

  std::size_t size() const noexcept { return words.size(); }

  friend bool operator==(const Codebook&, const Codebook&) = default;
};

// Within-cluster sum of squared distances recorded after every Lloyd update.
struct KMeansTrace {
  std::vector<double> sse;
};

double squared_distance(const ScdVector& a, const ScdVector& b) noexcept;

// Lexicographic sort by coefficient; duplicates are kept. Makes clustering
// independent of the order in which patches were collected.
std::vector<ScdVector> canonicalize_patch_set(std::vector<ScdVector> descriptors);

// k-means++ seeding from SplitMix64(cfg.seed), then Lloyd iterations.
// Assignment ties go to the lowest centroid index; an empty cluster takes the
// point farthest from its centroid. Deterministic in (descriptors, cfg).
Codebook kmeans(std::span<const ScdVector> descriptors, const ClusteringConfig& cfg,
                KMeansTrace* trace = nullptr);

// Nearest word by l2 distance, lowest index on ties.
std::size_t assign(const ScdVector& d, const Codebook& cb);

}  // namespace etcir
