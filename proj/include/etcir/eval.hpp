#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "etcir/codebook.hpp"
#include "etcir/descriptor.hpp"
#include "etcir/etc_crypto.hpp"
#include "etcir/image.hpp"
#include "etcir/retrieval.hpp"

namespace etcir {

// AP = (1/G) * sum_{n=1..N} (TP@n / n) * f(n) over a full ranking of N ids.
double average_precision(std::span<const std::string> ranking,
                         const std::unordered_set<std::string>& relevant, std::size_t g,
                         std::size_t n);

double mean_ap(std::span<const double> aps);

enum class ImageKind { plain, etc };

const char* kind_name(ImageKind kind) noexcept;
ImageKind parse_kind(std::string_view text);

struct CorpusImage {
  std::string image_id;
  std::string group_id;
  std::string owner_id;
  ImageBuffer image;
};

struct ScenarioConfig {
  ImageKind stored_kind = ImageKind::plain;
  ImageKind query_kind = ImageKind::plain;
  ClusteringConfig clustering;
  // Stored image i is encrypted with derive_keyset(stored_key_seed, i) unless
  // it has an entry in stored_keys; query j uses derive_keyset(query_key_seed, j).
  std::uint64_t stored_key_seed = 0x5EED0001;
  std::uint64_t query_key_seed = 0x5EED0002;
  std::map<std::string, KeySet> stored_keys;
  // Whether a query that is itself stored counts as one of its own hits.
  bool count_self_match = true;
  // Lossy path: every image is JPEG-coded at this quality before description.
  std::optional<int> jpeg_quality;
};

struct QueryOutcome {
  std::string query_id;
  std::size_t relevant = 0;  // G
  std::size_t ranked = 0;    // N
  double ap = 0.0;
};

struct ScenarioReport {
  ScenarioConfig config;
  Codebook codebook;
  CorpusStats stats;
  Index index;
  std::vector<QueryOutcome> queries;
  std::vector<std::string> skipped;  // queries left without any relevant image
  std::size_t key_collisions = 0;    // query keys equal to the matching stored key
  double map = 0.0;
};

// End-to-end retrieval experiment over one (stored kind, query kind) pairing.
// Each query's ground truth is the set of stored images sharing its group id.
ScenarioReport run_scenario(std::span<const CorpusImage> stored,
                            std::span<const CorpusImage> queries, const ScenarioConfig& cfg);

// Provenance echo of a scenario configuration.
std::string config_json(const ScenarioConfig& cfg);

// Per-query AP lines followed by a summary line.
std::string report_tsv(const ScenarioReport& report);

// Deterministic corpus of `groups` x `per_group` images; members of a group
// share a colour palette but differ in layout, noise and exposure.
struct SyntheticSpec {
  std::size_t groups = 10;
  std::size_t per_group = 4;
  int width = 104;
  int height = 72;
  std::uint64_t seed = 2024;
};

std::vector<CorpusImage> synthetic_corpus(const SyntheticSpec& spec);

}  // namespace etcir
