#include "etcir/etcir.h"

#include <cstdio>
#include <filesystem>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "etcir/codec.hpp"
#include "etcir/error.hpp"
#include "etcir/eval.hpp"
#include "etcir/formats.hpp"

namespace fs = std::filesystem;

struct etcir_image {
  etcir::ImageBuffer img;
  std::vector<std::uint8_t> rgb;  // interleaved copy handed out by etcir_image_rgb
};

struct etcir_manifest {
  std::vector<etcir::ManifestRow> rows;
  std::vector<std::string> paths;
};

struct etcir_codebook {
  etcir::CodebookFile file;
  std::string text;
  std::string sha256;
};

struct etcir_index {
  etcir::DescriptorStore store;
};

struct etcir_hits {
  std::vector<etcir::RankedHit> hits;
  std::string tsv;
};

struct etcir_report {
  etcir::ScenarioReport report;
  std::string tsv;
  std::string config;
  std::string codebook_sha256;
  std::string store_sha256;
};

namespace {

thread_local std::string g_last_error;

etcir_status to_status(etcir::Errc code) {
  using etcir::Errc;
  switch (code) {
    case Errc::invalid_argument: return ETCIR_E_INVALID_ARGUMENT;
    case Errc::dimension_too_small: return ETCIR_E_DIMENSION;
    case Errc::malformed: return ETCIR_E_MALFORMED;
    case Errc::insufficient_descriptors: return ETCIR_E_INSUFFICIENT_DESCRIPTORS;
    case Errc::empty_corpus: return ETCIR_E_EMPTY_CORPUS;
    case Errc::duplicate_id: return ETCIR_E_DUPLICATE_ID;
    case Errc::length_mismatch: return ETCIR_E_LENGTH_MISMATCH;
    case Errc::hash_mismatch: return ETCIR_E_HASH_MISMATCH;
    case Errc::parse: return ETCIR_E_PARSE;
    case Errc::io: return ETCIR_E_IO;
  }
  return ETCIR_E_INTERNAL;
}

template <typename Fn>
etcir_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    g_last_error.clear();
    return ETCIR_OK;
  } catch (const etcir::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ETCIR_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ETCIR_E_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw etcir::Error(etcir::Errc::invalid_argument, what);
}

etcir_image* wrap(etcir::ImageBuffer img) {
  auto* h = new etcir_image{std::move(img), {}};
  h->rgb = h->img.rgb_bytes();
  return h;
}

etcir::ClusteringConfig to_clustering(const etcir_clustering& c) {
  etcir::ClusteringConfig cfg;
  cfg.m = c.codebook_size;
  cfg.seed = c.seed;
  cfg.max_iters = c.max_iters;
  cfg.tol = c.tol;
  return cfg;
}

etcir_codebook* wrap(etcir::CodebookFile file) {
  auto* h = new etcir_codebook{std::move(file), {}, {}};
  h->text = etcir::codebook_json(h->file);
  h->sha256 = etcir::sha256_hex(h->text);
  return h;
}

std::vector<etcir::CorpusImage> load_corpus(const std::vector<etcir::ManifestRow>& rows) {
  std::vector<etcir::CorpusImage> corpus;
  corpus.reserve(rows.size());
  for (const auto& r : rows) {
    corpus.push_back(
        etcir::CorpusImage{r.image_id, r.group_id, r.owner_id, etcir::read_image(r.path)});
  }
  return corpus;
}

std::string format_distance(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  return buf;
}

}  // namespace

extern "C" {

const char* etcir_version(void) { return "1.0.0"; }

const char* etcir_status_string(etcir_status status) {
  switch (status) {
    case ETCIR_OK: return "ok";
    case ETCIR_E_INVALID_ARGUMENT: return "invalid argument";
    case ETCIR_E_DIMENSION: return "image dimension error";
    case ETCIR_E_MALFORMED: return "malformed data";
    case ETCIR_E_INSUFFICIENT_DESCRIPTORS: return "insufficient patch descriptors";
    case ETCIR_E_EMPTY_CORPUS: return "empty corpus";
    case ETCIR_E_DUPLICATE_ID: return "duplicate id";
    case ETCIR_E_LENGTH_MISMATCH: return "length mismatch";
    case ETCIR_E_HASH_MISMATCH: return "codebook hash mismatch";
    case ETCIR_E_PARSE: return "parse error";
    case ETCIR_E_IO: return "i/o error";
    case ETCIR_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* etcir_last_error(void) { return g_last_error.c_str(); }

// ---- images ----------------------------------------------------------------

etcir_status etcir_image_from_rgb(uint32_t width, uint32_t height, const uint8_t* rgb,
                                  size_t len, etcir_image** out) {
  return guarded([&] {
    require(out != nullptr && rgb != nullptr, "null argument");
    require(width <= (1u << 20) && height <= (1u << 20), "image too large");
    *out = wrap(etcir::ImageBuffer::from_rgb_bytes(static_cast<int>(width),
                                                   static_cast<int>(height), {rgb, len}));
  });
}

etcir_status etcir_image_read(const char* path, etcir_image** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = wrap(etcir::read_image(path));
  });
}

etcir_status etcir_image_write(const etcir_image* img, const char* path, int jpeg_quality) {
  return guarded([&] {
    require(img != nullptr && path != nullptr, "null argument");
    etcir::write_image(img->img, path, jpeg_quality);
  });
}

uint32_t etcir_image_width(const etcir_image* img) {
  return img ? static_cast<uint32_t>(img->img.width()) : 0;
}

uint32_t etcir_image_height(const etcir_image* img) {
  return img ? static_cast<uint32_t>(img->img.height()) : 0;
}

const uint8_t* etcir_image_rgb(const etcir_image* img, size_t* len) {
  if (img == nullptr) return nullptr;
  if (len != nullptr) *len = img->rgb.size();
  return img->rgb.data();
}

int etcir_image_equal(const etcir_image* a, const etcir_image* b) {
  return a != nullptr && b != nullptr && a->img == b->img;
}

etcir_status etcir_image_crop16(const etcir_image* img, etcir_image** out) {
  return guarded([&] {
    require(img != nullptr && out != nullptr, "null argument");
    *out = wrap(etcir::crop16(img->img));
  });
}

void etcir_image_free(etcir_image* img) { delete img; }

// ---- keys and encryption ---------------------------------------------------

etcir_keyset etcir_keyset_derive(uint64_t master_seed, uint64_t index) {
  const auto k = etcir::derive_keyset(master_seed, index);
  return etcir_keyset{k.k1, k.k2};
}

etcir_status etcir_keyset_read(const char* path, etcir_keyset* out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    const auto k = etcir::load_keyset(path);
    *out = etcir_keyset{k.k1, k.k2};
  });
}

etcir_status etcir_keyset_write(const char* path, const etcir_keyset* keys) {
  return guarded([&] {
    require(path != nullptr && keys != nullptr, "null argument");
    etcir::save_keyset(path, etcir::KeySet{keys->k1, keys->k2});
  });
}

etcir_status etcir_encrypt(const etcir_image* img, const etcir_keyset* keys, etcir_image** out) {
  return guarded([&] {
    require(img != nullptr && keys != nullptr && out != nullptr, "null argument");
    *out = wrap(etcir::encrypt(img->img, etcir::KeySet{keys->k1, keys->k2}));
  });
}

etcir_status etcir_decrypt(const etcir_image* etc, const etcir_keyset* keys, etcir_image** out) {
  return guarded([&] {
    require(etc != nullptr && keys != nullptr && out != nullptr, "null argument");
    try {
      *out = wrap(etcir::decrypt(etc->img, etcir::KeySet{keys->k1, keys->k2}));
    } catch (const etcir::Error& e) {
      if (e.code() != etcir::Errc::malformed) throw;
      throw etcir::Error(etcir::Errc::dimension_too_small, e.what());
    }
  });
}

// ---- manifests -------------------------------------------------------------

etcir_status etcir_manifest_read(const char* path, etcir_manifest** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    auto* h = new etcir_manifest{etcir::load_manifest(path), {}};
    for (const auto& r : h->rows) h->paths.push_back(r.path.string());
    *out = h;
  });
}

size_t etcir_manifest_size(const etcir_manifest* m) { return m ? m->rows.size() : 0; }

const char* etcir_manifest_path(const etcir_manifest* m, size_t i) {
  return m && i < m->rows.size() ? m->paths[i].c_str() : nullptr;
}

const char* etcir_manifest_image_id(const etcir_manifest* m, size_t i) {
  return m && i < m->rows.size() ? m->rows[i].image_id.c_str() : nullptr;
}

const char* etcir_manifest_group_id(const etcir_manifest* m, size_t i) {
  return m && i < m->rows.size() ? m->rows[i].group_id.c_str() : nullptr;
}

const char* etcir_manifest_owner_id(const etcir_manifest* m, size_t i) {
  return m && i < m->rows.size() ? m->rows[i].owner_id.c_str() : nullptr;
}

void etcir_manifest_free(etcir_manifest* m) { delete m; }

etcir_status etcir_encrypt_manifest(const char* manifest_path, uint64_t master_seed,
                                    const char* out_dir, const char* keys_dir,
                                    const char* out_manifest) {
  return guarded([&] {
    require(manifest_path && out_dir && keys_dir && out_manifest, "null argument");
    const auto rows = etcir::load_manifest(manifest_path);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    fs::create_directories(keys_dir, ec);
    std::vector<etcir::ManifestRow> encrypted;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto keys = etcir::derive_keyset(master_seed, i);
      const fs::path image_out = fs::path(out_dir) / (rows[i].image_id + ".png");
      etcir::write_image(etcir::encrypt(etcir::read_image(rows[i].path), keys), image_out);
      etcir::save_keyset(fs::path(keys_dir) / (rows[i].image_id + ".key.json"), keys);
      etcir::ManifestRow row = rows[i];
      row.path = fs::absolute(image_out);
      encrypted.push_back(std::move(row));
    }
    etcir::write_file_atomic(out_manifest, etcir::manifest_tsv(encrypted));
  });
}

// ---- codebook --------------------------------------------------------------

void etcir_clustering_defaults(etcir_clustering* cfg) {
  if (cfg == nullptr) return;
  const etcir::ClusteringConfig d;
  *cfg = etcir_clustering{static_cast<uint32_t>(d.m), d.seed,
                          static_cast<uint32_t>(d.max_iters), d.tol};
}

etcir_status etcir_codebook_build(const char* manifest_path, const etcir_clustering* cfg,
                                  etcir_codebook** out) {
  return guarded([&] {
    require(manifest_path != nullptr && cfg != nullptr && out != nullptr, "null argument");
    const auto rows = etcir::load_manifest(manifest_path);
    if (rows.empty()) throw etcir::Error(etcir::Errc::empty_corpus, "manifest has no images");

    std::vector<std::vector<etcir::ScdVector>> per_image;
    std::vector<etcir::ScdVector> all;
    for (const auto& r : rows) {
      per_image.push_back(etcir::block_descriptors(etcir::read_image(r.path)));
      all.insert(all.end(), per_image.back().begin(), per_image.back().end());
    }
    etcir::CodebookFile file;
    file.codebook =
        etcir::kmeans(etcir::canonicalize_patch_set(std::move(all)), to_clustering(*cfg));
    std::vector<etcir::WordHistogram> hists;
    for (const auto& p : per_image) hists.push_back(etcir::word_histogram(p, file.codebook));
    file.stats = etcir::compute_corpus_stats(hists);
    *out = wrap(std::move(file));
  });
}

etcir_status etcir_codebook_read(const char* path, etcir_codebook** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    std::string text = etcir::read_text_file(path);
    auto file = etcir::parse_codebook_json(text);
    auto* h = new etcir_codebook{std::move(file), std::move(text), {}};
    h->sha256 = etcir::sha256_hex(h->text);
    *out = h;
  });
}

etcir_status etcir_codebook_write(const etcir_codebook* cb, const char* path) {
  return guarded([&] {
    require(cb != nullptr && path != nullptr, "null argument");
    etcir::write_file_atomic(path, cb->text);
  });
}

size_t etcir_codebook_size(const etcir_codebook* cb) { return cb ? cb->file.codebook.size() : 0; }

size_t etcir_codebook_iterations(const etcir_codebook* cb) {
  return cb ? cb->file.codebook.iterations : 0;
}

const char* etcir_codebook_sha256(const etcir_codebook* cb) {
  return cb ? cb->sha256.c_str() : nullptr;
}

void etcir_codebook_free(etcir_codebook* cb) { delete cb; }

// ---- index and query -------------------------------------------------------

etcir_status etcir_index_build(const char* manifest_path, const etcir_codebook* cb,
                               etcir_index** out) {
  return guarded([&] {
    require(manifest_path != nullptr && cb != nullptr && out != nullptr, "null argument");
    const auto rows = etcir::load_manifest(manifest_path);
    if (rows.empty()) throw etcir::Error(etcir::Errc::empty_corpus, "manifest has no images");

    std::vector<etcir::WordHistogram> hists;
    for (const auto& r : rows) {
      hists.push_back(etcir::image_word_histogram(etcir::read_image(r.path), cb->file.codebook));
    }
    etcir::DescriptorStore store;
    store.codebook_sha256 = cb->sha256;
    store.stats = etcir::compute_corpus_stats(hists);
    std::vector<etcir::IndexEntry> entries;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      entries.push_back(etcir::IndexEntry{rows[i].image_id, rows[i].owner_id,
                                          etcir::weight(hists[i], store.stats)});
    }
    store.index = etcir::build_index(std::move(entries));
    *out = new etcir_index{std::move(store)};
  });
}

etcir_status etcir_index_read(const char* path, etcir_index** out) {
  return guarded([&] {
    require(path != nullptr && out != nullptr, "null argument");
    *out = new etcir_index{etcir::parse_store_json(etcir::read_text_file(path))};
  });
}

etcir_status etcir_index_write(const etcir_index* idx, const char* path) {
  return guarded([&] {
    require(idx != nullptr && path != nullptr, "null argument");
    etcir::write_file_atomic(path, etcir::store_json(idx->store));
  });
}

size_t etcir_index_size(const etcir_index* idx) { return idx ? idx->store.index.size() : 0; }

void etcir_index_free(etcir_index* idx) { delete idx; }

etcir_status etcir_index_query(const etcir_index* idx, const etcir_codebook* cb,
                               const etcir_image* query, size_t k, etcir_hits** out) {
  return guarded([&] {
    require(idx && cb && query && out, "null argument");
    if (idx->store.codebook_sha256 != cb->sha256) {
      throw etcir::Error(etcir::Errc::hash_mismatch,
                         "index was built with codebook " + idx->store.codebook_sha256 +
                             ", got " + cb->sha256);
    }
    const auto qd = etcir::describe(query->img, cb->file.codebook, idx->store.stats);
    auto* h = new etcir_hits{idx->store.index.query(qd, k), {}};
    for (const auto& hit : h->hits) {
      h->tsv += std::to_string(hit.rank) + '\t' + hit.image_id + '\t' + hit.owner_id + '\t' +
                format_distance(hit.distance) + '\n';
    }
    *out = h;
  });
}

size_t etcir_hits_count(const etcir_hits* hits) { return hits ? hits->hits.size() : 0; }

const char* etcir_hits_image_id(const etcir_hits* hits, size_t i) {
  return hits && i < hits->hits.size() ? hits->hits[i].image_id.c_str() : nullptr;
}

const char* etcir_hits_owner_id(const etcir_hits* hits, size_t i) {
  return hits && i < hits->hits.size() ? hits->hits[i].owner_id.c_str() : nullptr;
}

double etcir_hits_distance(const etcir_hits* hits, size_t i) {
  return hits && i < hits->hits.size() ? hits->hits[i].distance : -1.0;
}

size_t etcir_hits_rank(const etcir_hits* hits, size_t i) {
  return hits && i < hits->hits.size() ? hits->hits[i].rank : 0;
}

const char* etcir_hits_tsv(const etcir_hits* hits) { return hits ? hits->tsv.c_str() : nullptr; }

void etcir_hits_free(etcir_hits* hits) { delete hits; }

// ---- evaluation ------------------------------------------------------------

void etcir_eval_config_defaults(etcir_eval_config* cfg) {
  if (cfg == nullptr) return;
  const etcir::ScenarioConfig d;
  *cfg = etcir_eval_config{};
  cfg->stored_kind = ETCIR_PLAIN;
  cfg->query_kind = ETCIR_PLAIN;
  etcir_clustering_defaults(&cfg->clustering);
  cfg->stored_key_seed = d.stored_key_seed;
  cfg->query_key_seed = d.query_key_seed;
  cfg->keys_dir = nullptr;
  cfg->count_self_match = d.count_self_match ? 1 : 0;
  cfg->jpeg_quality = 0;
}

etcir_status etcir_evaluate(const char* manifest_path, const char* query_manifest,
                            const etcir_eval_config* cfg, etcir_report** out) {
  return guarded([&] {
    require(manifest_path != nullptr && cfg != nullptr && out != nullptr, "null argument");
    const auto stored = load_corpus(etcir::load_manifest(manifest_path));
    const auto queries =
        query_manifest ? load_corpus(etcir::load_manifest(query_manifest)) : stored;

    etcir::ScenarioConfig sc;
    sc.stored_kind = cfg->stored_kind == ETCIR_ETC ? etcir::ImageKind::etc : etcir::ImageKind::plain;
    sc.query_kind = cfg->query_kind == ETCIR_ETC ? etcir::ImageKind::etc : etcir::ImageKind::plain;
    sc.clustering = to_clustering(cfg->clustering);
    sc.stored_key_seed = cfg->stored_key_seed;
    sc.query_key_seed = cfg->query_key_seed;
    sc.count_self_match = cfg->count_self_match != 0;
    if (cfg->jpeg_quality != 0) sc.jpeg_quality = cfg->jpeg_quality;
    if (cfg->keys_dir != nullptr) {
      for (const auto& item : stored) {
        const fs::path key_path = fs::path(cfg->keys_dir) / (item.image_id + ".key.json");
        if (fs::exists(key_path)) sc.stored_keys[item.image_id] = etcir::load_keyset(key_path);
      }
    }

    auto* h = new etcir_report{etcir::run_scenario(stored, queries, sc), {}, {}, {}, {}};
    h->tsv = etcir::report_tsv(h->report);
    h->config = etcir::config_json(sc);
    const std::string cb_text =
        etcir::codebook_json(etcir::CodebookFile{h->report.codebook, h->report.stats});
    h->codebook_sha256 = etcir::sha256_hex(cb_text);
    h->store_sha256 = etcir::sha256_hex(etcir::store_json(
        etcir::DescriptorStore{h->codebook_sha256, h->report.stats, h->report.index}));
    *out = h;
  });
}

double etcir_report_map(const etcir_report* r) { return r ? r->report.map : 0.0; }

size_t etcir_report_query_count(const etcir_report* r) { return r ? r->report.queries.size() : 0; }

const char* etcir_report_query_id(const etcir_report* r, size_t i) {
  return r && i < r->report.queries.size() ? r->report.queries[i].query_id.c_str() : nullptr;
}

double etcir_report_ap(const etcir_report* r, size_t i) {
  return r && i < r->report.queries.size() ? r->report.queries[i].ap : -1.0;
}

size_t etcir_report_skipped(const etcir_report* r) { return r ? r->report.skipped.size() : 0; }

size_t etcir_report_key_collisions(const etcir_report* r) {
  return r ? r->report.key_collisions : 0;
}

const char* etcir_report_tsv(const etcir_report* r) { return r ? r->tsv.c_str() : nullptr; }

const char* etcir_report_config_json(const etcir_report* r) {
  return r ? r->config.c_str() : nullptr;
}

const char* etcir_report_codebook_sha256(const etcir_report* r) {
  return r ? r->codebook_sha256.c_str() : nullptr;
}

const char* etcir_report_store_sha256(const etcir_report* r) {
  return r ? r->store_sha256.c_str() : nullptr;
}

void etcir_report_free(etcir_report* r) { delete r; }

// ---- synthetic corpus ------------------------------------------------------

etcir_status etcir_synth_corpus(const char* out_dir, uint32_t groups, uint32_t per_group,
                                uint32_t width, uint32_t height, uint64_t seed) {
  return guarded([&] {
    require(out_dir != nullptr, "null argument");
    require(width <= 8192 && height <= 8192, "synthetic images are limited to 8192x8192");
    etcir::SyntheticSpec spec;
    spec.groups = groups;
    spec.per_group = per_group;
    spec.width = static_cast<int>(width);
    spec.height = static_cast<int>(height);
    spec.seed = seed;
    const auto corpus = etcir::synthetic_corpus(spec);

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw etcir::Error(etcir::Errc::io, "cannot create " + std::string(out_dir));
    std::vector<etcir::ManifestRow> rows;
    for (const auto& item : corpus) {
      const std::string file = item.image_id + ".png";
      etcir::write_image(item.image, fs::path(out_dir) / file);
      rows.push_back(etcir::ManifestRow{file, item.image_id, item.group_id, item.owner_id});
    }
    etcir::write_file_atomic(fs::path(out_dir) / "manifest.tsv", etcir::manifest_tsv(rows));
  });
}

}  // extern "C"
