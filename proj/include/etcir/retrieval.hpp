#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "etcir/descriptor.hpp"

namespace etcir {

struct IndexEntry {
  std::string image_id;
  std::string owner_id;
  WeightedDescriptor descriptor;

  friend bool operator==(const IndexEntry&, const IndexEntry&) = default;
};

struct RankedHit {
  std::string image_id;
  std::string owner_id;
  double distance = 0.0;
  std::size_t rank = 0;  // 1-based
};

double l2_distance(const WeightedDescriptor& a, const WeightedDescriptor& b);

// Immutable exhaustive-scan index; entries keep insertion order.
class Index {
 public:
  Index() = default;
  explicit Index(std::vector<IndexEntry> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<IndexEntry>& entries() const noexcept { return entries_; }

  // min(k, size()) hits by ascending l2 distance, ties by image id.
  std::vector<RankedHit> query(const WeightedDescriptor& q, std::size_t k) const;

 private:
  std::vector<IndexEntry> entries_;
};

Index build_index(std::vector<IndexEntry> entries);

}  // namespace etcir
