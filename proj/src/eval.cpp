#include "etcir/eval.hpp"

#include <cstdio>
#include <json.hpp>
#include <set>
#include <sstream>
#include <unordered_map>

#include "etcir/codec.hpp"
#include "etcir/error.hpp"
#include "etcir/formats.hpp"

namespace etcir {

double average_precision(std::span<const std::string> ranking,
                         const std::unordered_set<std::string>& relevant, std::size_t g,
                         std::size_t n) {
  if (ranking.size() != n) {
    throw Error(Errc::length_mismatch, "ranking length " + std::to_string(ranking.size()) +
                                           " does not match N = " + std::to_string(n));
  }
  if (g == 0 || g != relevant.size()) {
    throw Error(Errc::invalid_argument, "G must equal the (nonempty) relevant set size");
  }
  // Extended-precision accumulation, rounded to double once at the end.
  long double sum = 0.0L;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (relevant.count(ranking[i]) == 0) continue;
    ++tp;
    sum += static_cast<long double>(tp) / static_cast<long double>(i + 1);
  }
  return static_cast<double>(sum / static_cast<long double>(g));
}

double mean_ap(std::span<const double> aps) {
  if (aps.empty()) throw Error(Errc::empty_corpus, "mAP needs at least one query");
  double sum = 0.0;
  for (double ap : aps) sum += ap;
  return sum / static_cast<double>(aps.size());
}

const char* kind_name(ImageKind kind) noexcept {
  return kind == ImageKind::etc ? "etc" : "plain";
}

ImageKind parse_kind(std::string_view text) {
  if (text == "plain") return ImageKind::plain;
  if (text == "etc" || text == "EtC") return ImageKind::etc;
  throw Error(Errc::invalid_argument, "image kind must be 'plain' or 'etc'");
}

namespace {

ImageBuffer materialize(const ImageBuffer& img, ImageKind kind, const KeySet& keys,
                        const std::optional<int>& jpeg_quality) {
  ImageBuffer out = kind == ImageKind::etc ? encrypt(img, keys) : img;
  if (jpeg_quality) out = jpeg_roundtrip(out, *jpeg_quality);
  return out;
}

}  // namespace

ScenarioReport run_scenario(std::span<const CorpusImage> stored,
                            std::span<const CorpusImage> queries, const ScenarioConfig& cfg) {
  if (stored.empty()) throw Error(Errc::empty_corpus, "scenario needs stored images");
  if (queries.empty()) throw Error(Errc::empty_corpus, "scenario needs query images");

  ScenarioReport report;
  report.config = cfg;

  // (1) stored corpus as the third party receives it.
  std::vector<ImageBuffer> uploaded;
  std::unordered_map<std::string, KeySet> stored_key_of;
  std::unordered_map<std::string, std::vector<std::string>> groups;
  uploaded.reserve(stored.size());
  for (std::size_t i = 0; i < stored.size(); ++i) {
    const CorpusImage& item = stored[i];
    const auto it = cfg.stored_keys.find(item.image_id);
    const KeySet keys = it != cfg.stored_keys.end() ? it->second
                                                    : derive_keyset(cfg.stored_key_seed, i);
    stored_key_of.emplace(item.image_id, keys);
    groups[item.group_id].push_back(item.image_id);
    uploaded.push_back(materialize(item.image, cfg.stored_kind, keys, cfg.jpeg_quality));
  }

  // (2) codebook over the canonical patch set.
  std::vector<std::vector<ScdVector>> patches;
  std::vector<ScdVector> all;
  for (const auto& img : uploaded) {
    patches.push_back(block_descriptors(img));
    all.insert(all.end(), patches.back().begin(), patches.back().end());
  }
  report.codebook = kmeans(canonicalize_patch_set(std::move(all)), cfg.clustering);

  // (3) describe and index.
  std::vector<WordHistogram> hists;
  for (const auto& p : patches) hists.push_back(word_histogram(p, report.codebook));
  report.stats = compute_corpus_stats(hists);
  std::vector<IndexEntry> entries;
  for (std::size_t i = 0; i < stored.size(); ++i) {
    entries.push_back(
        IndexEntry{stored[i].image_id, stored[i].owner_id, weight(hists[i], report.stats)});
  }
  report.index = Index(std::move(entries));

  // (4) queries.
  std::vector<double> aps;
  for (std::size_t j = 0; j < queries.size(); ++j) {
    const CorpusImage& q = queries[j];
    const auto group = groups.find(q.group_id);
    if (group == groups.end()) {
      throw Error(Errc::malformed, "query '" + q.image_id + "' names group '" + q.group_id +
                                       "' with no stored images");
    }
    const KeySet query_keys = derive_keyset(cfg.query_key_seed, j);
    if (const auto sk = stored_key_of.find(q.image_id);
        sk != stored_key_of.end() && sk->second == query_keys) {
      ++report.key_collisions;
    }
    const ImageBuffer query_img = materialize(q.image, cfg.query_kind, query_keys, cfg.jpeg_quality);
    const WeightedDescriptor qd = describe(query_img, report.codebook, report.stats);

    std::unordered_set<std::string> relevant(group->second.begin(), group->second.end());
    std::vector<std::string> ranking;
    for (const auto& hit : report.index.query(qd, report.index.size())) {
      if (!cfg.count_self_match && hit.image_id == q.image_id) continue;
      ranking.push_back(hit.image_id);
    }
    if (!cfg.count_self_match) relevant.erase(q.image_id);
    if (relevant.empty()) {
      report.skipped.push_back(q.image_id);
      continue;
    }
    const double ap = average_precision(ranking, relevant, relevant.size(), ranking.size());
    report.queries.push_back(QueryOutcome{q.image_id, relevant.size(), ranking.size(), ap});
    aps.push_back(ap);
  }
  if (aps.empty()) throw Error(Errc::empty_corpus, "no query had any relevant stored image");
  report.map = mean_ap(aps);
  return report;
}

std::string config_json(const ScenarioConfig& cfg) {
  nlohmann::json doc = {
      {"stored_kind", kind_name(cfg.stored_kind)},
      {"query_kind", kind_name(cfg.query_kind)},
      {"codebook_size", cfg.clustering.m},
      {"clustering_seed", format_hex64(cfg.clustering.seed)},
      {"max_iters", cfg.clustering.max_iters},
      {"tol", format_hexfloat(cfg.clustering.tol)},
      {"stored_key_seed", format_hex64(cfg.stored_key_seed)},
      {"query_key_seed", format_hex64(cfg.query_key_seed)},
      {"explicit_stored_keys", cfg.stored_keys.size()},
      {"count_self_match", cfg.count_self_match},
      {"jpeg_quality", cfg.jpeg_quality ? nlohmann::json(*cfg.jpeg_quality) : nlohmann::json()},
      {"log_base", "e"},
  };
  return doc.dump();
}

std::string report_tsv(const ScenarioReport& report) {
  const std::string scenario = std::string(kind_name(report.config.stored_kind)) + "-" +
                               kind_name(report.config.query_kind);
  std::ostringstream out;
  char num[64];
  for (const auto& q : report.queries) {
    std::snprintf(num, sizeof num, "%.17g", q.ap);
    out << scenario << '\t' << q.query_id << '\t' << q.relevant << '\t' << q.ranked << '\t'
        << num << '\n';
  }
  std::snprintf(num, sizeof num, "%.17g", report.map);
  out << scenario << "\tmAP\t" << report.queries.size() << '\t' << report.index.size() << '\t'
      << num << '\n';
  return out.str();
}

}  // namespace etcir
