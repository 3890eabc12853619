#include "etcir/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include "etcir/error.hpp"

namespace etcir {

double l2_distance(const WeightedDescriptor& a, const WeightedDescriptor& b) {
  if (a.values.size() != b.values.size()) {
    throw Error(Errc::length_mismatch, "descriptor dimensions differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    const double d = a.values[i] - b.values[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

Index::Index(std::vector<IndexEntry> entries) : entries_(std::move(entries)) {
  std::unordered_set<std::string> seen;
  for (const IndexEntry& e : entries_) {
    if (!seen.insert(e.image_id).second) {
      throw Error(Errc::duplicate_id, "duplicate image id in index: " + e.image_id);
    }
  }
}

std::vector<RankedHit> Index::query(const WeightedDescriptor& q, std::size_t k) const {
  if (k == 0) throw Error(Errc::invalid_argument, "top-k must be >= 1");

  std::vector<double> dist(entries_.size());
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    dist[i] = l2_distance(q, entries_[i].descriptor);
  }
  std::vector<std::size_t> order(entries_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::size_t keep = std::min(k, order.size());
  const auto before = [&](std::size_t a, std::size_t b) {
    if (dist[a] != dist[b]) return dist[a] < dist[b];
    return entries_[a].image_id < entries_[b].image_id;
  };
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(keep),
                    order.end(), before);

  std::vector<RankedHit> hits;
  hits.reserve(keep);
  for (std::size_t r = 0; r < keep; ++r) {
    const IndexEntry& e = entries_[order[r]];
    hits.push_back(RankedHit{e.image_id, e.owner_id, dist[order[r]], r + 1});
  }
  return hits;
}

Index build_index(std::vector<IndexEntry> entries) { return Index(std::move(entries)); }

}  // namespace etcir
