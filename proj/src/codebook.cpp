#include "etcir/codebook.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "etcir/error.hpp"
#include "etcir/rng.hpp"

namespace etcir {

namespace {

// Runs fn(i) for i in [0, n). Each index is written by exactly one thread, so
// the result does not depend on the thread count.
template <typename Fn>
void parallel_for(std::size_t n, Fn fn) {
  constexpr std::size_t kMinChunk = 4096;
  const std::size_t hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min(hw, (n + kMinChunk - 1) / kMinChunk);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    const std::size_t end = std::min(n, begin + chunk);
    pool.emplace_back([begin, end, &fn] {
      for (std::size_t i = begin; i < end; ++i) fn(i);
    });
  }
}

std::size_t nearest(const ScdVector& d, std::span<const ScdVector> words,
                    double* best_d2 = nullptr) {
  std::size_t best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < words.size(); ++k) {
    const double dist = squared_distance(d, words[k]);
    if (dist < best_dist) {
      best_dist = dist;
      best = k;
    }
  }
  if (best_d2 != nullptr) *best_d2 = best_dist;
  return best;
}

std::vector<ScdVector> seed_centers(std::span<const ScdVector> points,
                                    std::size_t m, SplitMix64& stream) {
  const std::size_t n = points.size();
  std::vector<ScdVector> centers;
  centers.reserve(m);
  centers.push_back(points[bounded_uniform(stream, n)]);

  std::vector<double> min_d2(n);
  parallel_for(n, [&](std::size_t i) {
    min_d2[i] = squared_distance(points[i], centers.front());
  });

  while (centers.size() < m) {
    double total = 0.0;
    for (double d : min_d2) total += d;

    std::size_t pick = n;
    if (total > 0.0) {
      const double target = unit_interval(stream) * total;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        cumulative += min_d2[i];
        if (cumulative > target) {
          pick = i;
          break;
        }
      }
      if (pick == n) {
        // Rounding left the target past the final sum; take the last
        // candidate with nonzero weight.
        for (std::size_t i = n; i-- > 0;) {
          if (min_d2[i] > 0.0) {
            pick = i;
            break;
          }
        }
      }
    } else {
      pick = bounded_uniform(stream, n);
    }

    centers.push_back(points[pick]);
    const ScdVector& added = centers.back();
    parallel_for(n, [&](std::size_t i) {
      min_d2[i] = std::min(min_d2[i], squared_distance(points[i], added));
    });
  }
  return centers;
}

}  // namespace

double squared_distance(const ScdVector& a, const ScdVector& b) noexcept {
  double sum = 0.0;
  for (std::size_t i = 0; i < kScdLength; ++i) {
    const double d = a.coeffs[i] - b.coeffs[i];
    sum += d * d;
  }
  return sum;
}

std::vector<ScdVector> canonicalize_patch_set(std::vector<ScdVector> descriptors) {
  std::sort(descriptors.begin(), descriptors.end(),
            [](const ScdVector& a, const ScdVector& b) { return a.coeffs < b.coeffs; });
  return descriptors;
}

Codebook kmeans(std::span<const ScdVector> points, const ClusteringConfig& cfg,
                KMeansTrace* trace) {
  if (cfg.m == 0) throw Error(Errc::invalid_argument, "codebook size must be >= 1");
  if (cfg.max_iters == 0) throw Error(Errc::invalid_argument, "max_iters must be >= 1");
  const std::size_t n = points.size();
  const std::size_t m = cfg.m;
  if (n < m) {
    throw Error(Errc::insufficient_descriptors,
                "k-means needs at least " + std::to_string(m) +
                    " patch descriptors, got " + std::to_string(n));
  }

  SplitMix64 stream(cfg.seed);
  std::vector<ScdVector> centers = seed_centers(points, m, stream);

  std::vector<std::size_t> label(n);
  std::vector<double> dist(n);
  std::vector<std::size_t> counts(m);
  Codebook cb;
  cb.seed = cfg.seed;
  cb.max_iters = cfg.max_iters;
  cb.tol = cfg.tol;

  for (std::size_t iter = 1; iter <= cfg.max_iters; ++iter) {
    parallel_for(n, [&](std::size_t i) { label[i] = nearest(points[i], centers, &dist[i]); });

    std::fill(counts.begin(), counts.end(), 0);
    for (std::size_t l : label) ++counts[l];

    for (std::size_t k = 0; k < m; ++k) {
      if (counts[k] != 0) continue;
      // n >= m guarantees some cluster still has two or more members.
      std::size_t far = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (counts[label[i]] > 1 && (far == n || dist[i] > dist[far])) far = i;
      }
      --counts[label[far]];
      label[far] = k;
      counts[k] = 1;
      dist[far] = 0.0;
    }

    std::vector<ScdVector> updated(m);
    for (std::size_t i = 0; i < n; ++i) {
      auto& acc = updated[label[i]].coeffs;
      const auto& p = points[i].coeffs;
      for (std::size_t c = 0; c < kScdLength; ++c) acc[c] += p[c];
    }
    double movement = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double members = static_cast<double>(counts[k]);
      for (double& c : updated[k].coeffs) c /= members;
      movement += std::sqrt(squared_distance(updated[k], centers[k]));
    }
    centers = std::move(updated);
    cb.iterations = iter;

    if (trace != nullptr) {
      double sse = 0.0;
      for (std::size_t i = 0; i < n; ++i) sse += squared_distance(points[i], centers[label[i]]);
      trace->sse.push_back(sse);
    }
    if (movement < cfg.tol) break;
  }

  cb.words = std::move(centers);
  return cb;
}

std::size_t assign(const ScdVector& d, const Codebook& cb) {
  if (cb.words.empty()) throw Error(Errc::invalid_argument, "codebook is empty");
  return nearest(d, cb.words);
}

}  // namespace etcir
