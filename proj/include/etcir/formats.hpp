#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "etcir/codebook.hpp"
#include "etcir/descriptor.hpp"
#include "etcir/etc_crypto.hpp"
#include "etcir/retrieval.hpp"

namespace etcir {

// ---- files -----------------------------------------------------------------

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

// Writes to a sibling temporary file, then renames over the target.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file_atomic(const std::filesystem::path& path, std::string_view text);

std::string sha256_hex(std::span<const std::uint8_t> bytes);
std::string sha256_hex(std::string_view text);

// ---- numbers ---------------------------------------------------------------

// Exact, locale-independent hex-float text ("0x1.8p+1", "-0x0p+0").
std::string format_hexfloat(double value);
double parse_hexfloat(std::string_view text);

// 64-bit value as 16 lowercase, zero-padded hex digits.
std::string format_hex64(std::uint64_t value);
std::uint64_t parse_hex64(std::string_view text);

// ---- key file --------------------------------------------------------------

// {"k1": "<16 hex>", "k2": "<16 hex>"} followed by a newline.
std::string key_json(const KeySet& keys);
KeySet parse_key_json(std::string_view text);
KeySet load_keyset(const std::filesystem::path& path);
void save_keyset(const std::filesystem::path& path, const KeySet& keys);

// ---- manifest --------------------------------------------------------------

struct ManifestRow {
  std::filesystem::path path;  // resolved against the manifest's directory
  std::string image_id;
  std::string group_id;
  std::string owner_id;
};

// Tab-separated: path, image id, group id, owner id. Blank lines and lines
// starting with '#' are ignored. Image ids must be unique.
std::vector<ManifestRow> parse_manifest(std::string_view text,
                                        const std::filesystem::path& base_dir);
// Also checks that every image path exists.
std::vector<ManifestRow> load_manifest(const std::filesystem::path& path);
std::string manifest_tsv(std::span<const ManifestRow> rows);

// ---- codebook file ---------------------------------------------------------

struct CodebookFile {
  Codebook codebook;
  CorpusStats stats;  // of the corpus the codebook was built from
};

std::string codebook_json(const CodebookFile& file);
CodebookFile parse_codebook_json(std::string_view text);

// ---- descriptor store ------------------------------------------------------

struct DescriptorStore {
  std::string codebook_sha256;
  CorpusStats stats;
  Index index;
};

std::string store_json(const DescriptorStore& store);
DescriptorStore parse_store_json(std::string_view text);

}  // namespace etcir
