/*
 * etcir C API: block-scrambling (EtC) image encryption and
 * encryption-invariant image retrieval.
 *
 * All objects are opaque handles created by the library and released with the
 * matching *_free function. Every fallible call returns an etcir_status; on
 * failure etcir_last_error() holds a message for the calling thread. Strings
 * returned by accessors are owned by the handle and stay valid until it is
 * freed.
 */
#ifndef ETCIR_ETCIR_H
#define ETCIR_ETCIR_H

#include <stddef.h>
#include <stdint.h>

#if defined(ETCIR_BUILDING_LIBRARY)
#define ETCIR_API __attribute__((visibility("default")))
#else
#define ETCIR_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum etcir_status {
  ETCIR_OK = 0,
  ETCIR_E_INVALID_ARGUMENT = 1,
  ETCIR_E_DIMENSION = 2,       /* image smaller than 16x16, or not block aligned */
  ETCIR_E_MALFORMED = 3,       /* inconsistent data (grid shape, unknown group) */
  ETCIR_E_INSUFFICIENT_DESCRIPTORS = 4,
  ETCIR_E_EMPTY_CORPUS = 5,
  ETCIR_E_DUPLICATE_ID = 6,
  ETCIR_E_LENGTH_MISMATCH = 7,
  ETCIR_E_HASH_MISMATCH = 8,   /* index used with a codebook it was not built from */
  ETCIR_E_PARSE = 9,
  ETCIR_E_IO = 10,
  ETCIR_E_INTERNAL = 11
} etcir_status;

typedef struct etcir_image etcir_image;
typedef struct etcir_manifest etcir_manifest;
typedef struct etcir_codebook etcir_codebook;
typedef struct etcir_index etcir_index;
typedef struct etcir_hits etcir_hits;
typedef struct etcir_report etcir_report;

ETCIR_API const char* etcir_version(void);
ETCIR_API const char* etcir_status_string(etcir_status status);
ETCIR_API const char* etcir_last_error(void);

/* ---- images ------------------------------------------------------------ */

/* rgb holds width*height interleaved RGB triples, row-major. */
ETCIR_API etcir_status etcir_image_from_rgb(uint32_t width, uint32_t height, const uint8_t* rgb,
                                            size_t len, etcir_image** out);
/* PNG, JPEG or binary PPM; alpha is dropped. */
ETCIR_API etcir_status etcir_image_read(const char* path, etcir_image** out);
/* Format from the extension (.png, .ppm, .jpg). jpeg_quality is used for .jpg only. */
ETCIR_API etcir_status etcir_image_write(const etcir_image* img, const char* path,
                                         int jpeg_quality);
ETCIR_API uint32_t etcir_image_width(const etcir_image* img);
ETCIR_API uint32_t etcir_image_height(const etcir_image* img);
ETCIR_API const uint8_t* etcir_image_rgb(const etcir_image* img, size_t* len);
ETCIR_API int etcir_image_equal(const etcir_image* a, const etcir_image* b);
ETCIR_API etcir_status etcir_image_crop16(const etcir_image* img, etcir_image** out);
ETCIR_API void etcir_image_free(etcir_image* img);

/* ---- keys and encryption ------------------------------------------------ */

typedef struct etcir_keyset {
  uint64_t k1; /* block permutation */
  uint64_t k2; /* per-block rotation / inversion */
} etcir_keyset;

/* Key set of image `index` under a master seed. */
ETCIR_API etcir_keyset etcir_keyset_derive(uint64_t master_seed, uint64_t index);
/* Key file: {"k1": "<16 hex>", "k2": "<16 hex>"}. */
ETCIR_API etcir_status etcir_keyset_read(const char* path, etcir_keyset* out);
ETCIR_API etcir_status etcir_keyset_write(const char* path, const etcir_keyset* keys);

/* Output is cropped to multiples of 16. */
ETCIR_API etcir_status etcir_encrypt(const etcir_image* img, const etcir_keyset* keys,
                                     etcir_image** out);
ETCIR_API etcir_status etcir_decrypt(const etcir_image* etc, const etcir_keyset* keys,
                                     etcir_image** out);

/* ---- manifests ----------------------------------------------------------- */

/* TSV rows: path, image id, group id, owner id; '#' starts a comment line. */
ETCIR_API etcir_status etcir_manifest_read(const char* path, etcir_manifest** out);
ETCIR_API size_t etcir_manifest_size(const etcir_manifest* m);
ETCIR_API const char* etcir_manifest_path(const etcir_manifest* m, size_t i);
ETCIR_API const char* etcir_manifest_image_id(const etcir_manifest* m, size_t i);
ETCIR_API const char* etcir_manifest_group_id(const etcir_manifest* m, size_t i);
ETCIR_API const char* etcir_manifest_owner_id(const etcir_manifest* m, size_t i);
ETCIR_API void etcir_manifest_free(etcir_manifest* m);

/*
 * Encrypts every manifest image with etcir_keyset_derive(master_seed, row) and
 * writes <out_dir>/<image id>.png, <keys_dir>/<image id>.key.json and a
 * manifest of the encrypted images at out_manifest.
 */
ETCIR_API etcir_status etcir_encrypt_manifest(const char* manifest_path, uint64_t master_seed,
                                              const char* out_dir, const char* keys_dir,
                                              const char* out_manifest);

/* ---- codebook ------------------------------------------------------------ */

typedef struct etcir_clustering {
  uint32_t codebook_size; /* M */
  uint64_t seed;
  uint32_t max_iters;
  double tol;
} etcir_clustering;

ETCIR_API void etcir_clustering_defaults(etcir_clustering* cfg);

/* k-means over every 16x16 block descriptor of the manifest's images. */
ETCIR_API etcir_status etcir_codebook_build(const char* manifest_path,
                                            const etcir_clustering* cfg,
                                            etcir_codebook** out);
ETCIR_API etcir_status etcir_codebook_read(const char* path, etcir_codebook** out);
ETCIR_API etcir_status etcir_codebook_write(const etcir_codebook* cb, const char* path);
ETCIR_API size_t etcir_codebook_size(const etcir_codebook* cb);
ETCIR_API size_t etcir_codebook_iterations(const etcir_codebook* cb);
/* SHA-256 of the serialized codebook file. */
ETCIR_API const char* etcir_codebook_sha256(const etcir_codebook* cb);
ETCIR_API void etcir_codebook_free(etcir_codebook* cb);

/* ---- index and query ----------------------------------------------------- */

ETCIR_API etcir_status etcir_index_build(const char* manifest_path, const etcir_codebook* cb,
                                         etcir_index** out);
ETCIR_API etcir_status etcir_index_read(const char* path, etcir_index** out);
ETCIR_API etcir_status etcir_index_write(const etcir_index* idx, const char* path);
ETCIR_API size_t etcir_index_size(const etcir_index* idx);
ETCIR_API void etcir_index_free(etcir_index* idx);

/* Describes `query` with cb and the index's corpus statistics, then returns
 * the k nearest stored images. Fails with ETCIR_E_HASH_MISMATCH when cb is
 * not the codebook the index was built with. */
ETCIR_API etcir_status etcir_index_query(const etcir_index* idx, const etcir_codebook* cb,
                                         const etcir_image* query, size_t k, etcir_hits** out);

ETCIR_API size_t etcir_hits_count(const etcir_hits* hits);
ETCIR_API const char* etcir_hits_image_id(const etcir_hits* hits, size_t i);
ETCIR_API const char* etcir_hits_owner_id(const etcir_hits* hits, size_t i);
ETCIR_API double etcir_hits_distance(const etcir_hits* hits, size_t i);
ETCIR_API size_t etcir_hits_rank(const etcir_hits* hits, size_t i);
/* rank, image id, owner id, distance (17 significant digits), one hit per line. */
ETCIR_API const char* etcir_hits_tsv(const etcir_hits* hits);
ETCIR_API void etcir_hits_free(etcir_hits* hits);

/* ---- evaluation ---------------------------------------------------------- */

typedef enum etcir_kind { ETCIR_PLAIN = 0, ETCIR_ETC = 1 } etcir_kind;

typedef struct etcir_eval_config {
  etcir_kind stored_kind;
  etcir_kind query_kind;
  etcir_clustering clustering;
  uint64_t stored_key_seed;
  uint64_t query_key_seed;
  /* Optional directory of <image id>.key.json files overriding derived
   * stored keys. NULL to derive every key from stored_key_seed. */
  const char* keys_dir;
  int count_self_match;
  int jpeg_quality; /* 0 keeps the lossless path */
} etcir_eval_config;

ETCIR_API void etcir_eval_config_defaults(etcir_eval_config* cfg);

/* query_manifest may be NULL, in which case every stored image is a query. */
ETCIR_API etcir_status etcir_evaluate(const char* manifest_path, const char* query_manifest,
                                      const etcir_eval_config* cfg, etcir_report** out);
ETCIR_API double etcir_report_map(const etcir_report* r);
ETCIR_API size_t etcir_report_query_count(const etcir_report* r);
ETCIR_API const char* etcir_report_query_id(const etcir_report* r, size_t i);
ETCIR_API double etcir_report_ap(const etcir_report* r, size_t i);
ETCIR_API size_t etcir_report_skipped(const etcir_report* r);
ETCIR_API size_t etcir_report_key_collisions(const etcir_report* r);
ETCIR_API const char* etcir_report_tsv(const etcir_report* r);
ETCIR_API const char* etcir_report_config_json(const etcir_report* r);
/* SHA-256 of the scenario's codebook file and descriptor store. */
ETCIR_API const char* etcir_report_codebook_sha256(const etcir_report* r);
ETCIR_API const char* etcir_report_store_sha256(const etcir_report* r);
ETCIR_API void etcir_report_free(etcir_report* r);

/* ---- synthetic corpus ---------------------------------------------------- */

/* Writes groups*per_group PNG images and <out_dir>/manifest.tsv. */
ETCIR_API etcir_status etcir_synth_corpus(const char* out_dir, uint32_t groups,
                                          uint32_t per_group, uint32_t width, uint32_t height,
                                          uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif /* ETCIR_ETCIR_H */
