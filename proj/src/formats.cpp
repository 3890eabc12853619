#include "etcir/formats.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <set>
#include <sstream>

#include "etcir/error.hpp"

namespace etcir {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;
constexpr const char* kCodebookFormat = "etcir-codebook";
constexpr const char* kStoreFormat = "etcir-descriptor-store";
constexpr const char* kLogBase = "e";

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = text.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      return out;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

json parse_json(std::string_view text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(Errc::parse, std::string(what) + ": " + e.what());
  }
}

template <typename T>
T field(const json& obj, const char* key, const char* what) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw Error(Errc::parse, std::string(what) + ": missing field '" + key + "'");
  }
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(Errc::parse, std::string(what) + ": field '" + key + "': " + e.what());
  }
}

void check_header(const json& doc, const char* format, const char* what) {
  if (field<std::string>(doc, "format", what) != format) {
    throw Error(Errc::parse, std::string(what) + ": not a " + format + " file");
  }
  const int version = field<int>(doc, "version", what);
  if (version != kFormatVersion) {
    throw Error(Errc::parse, std::string(what) + ": unsupported version " +
                                 std::to_string(version));
  }
}

json stats_to_json(const CorpusStats& stats) {
  return json{{"n", stats.n}, {"df", stats.df}, {"log_base", kLogBase}};
}

CorpusStats stats_from_json(const json& j, std::size_t m, const char* what) {
  CorpusStats stats;
  stats.n = field<std::uint64_t>(j, "n", what);
  stats.df = field<std::vector<std::uint64_t>>(j, "df", what);
  if (field<std::string>(j, "log_base", what) != kLogBase) {
    throw Error(Errc::parse, std::string(what) + ": only natural-log weighting is supported");
  }
  if (stats.df.size() != m) {
    throw Error(Errc::parse, std::string(what) + ": df length does not match codebook size");
  }
  for (auto df : stats.df) {
    if (df > stats.n) throw Error(Errc::parse, std::string(what) + ": df exceeds N");
  }
  return stats;
}

json vector_to_json(std::span<const double> values) {
  json arr = json::array();
  for (double v : values) arr.push_back(format_hexfloat(v));
  return arr;
}

std::vector<double> vector_from_json(const json& arr, const char* what) {
  if (!arr.is_array()) throw Error(Errc::parse, std::string(what) + ": expected an array");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_string()) throw Error(Errc::parse, std::string(what) + ": expected hex-float strings");
    out.push_back(parse_hexfloat(v.get<std::string>()));
  }
  return out;
}

}  // namespace

// ---- files -----------------------------------------------------------------

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::io, "failed reading " + path.string());
  return bytes;
}

std::string read_text_file(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::io, "cannot create " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(Errc::io, "failed writing " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Error(Errc::io, "cannot rename onto " + path.string());
  }
}

void write_file_atomic(const fs::path& path, std::string_view text) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()),
                                    text.size()));
}

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::io, "SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

std::string sha256_hex(std::string_view text) {
  return sha256_hex(
      std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

// ---- numbers ---------------------------------------------------------------

std::string format_hexfloat(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::hex);
  std::string body(buf, res.ptr);
  if (!body.empty() && body.front() == '-') return "-0x" + body.substr(1);
  return "0x" + body;
}

double parse_hexfloat(std::string_view text) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  if (text.size() < 3 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X')) {
    throw Error(Errc::parse, "expected hex-float text, got '" + std::string(text) + "'");
  }
  text.remove_prefix(2);
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value,
                                   std::chars_format::hex);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(Errc::parse, "invalid hex-float '" + std::string(text) + "'");
  }
  return negative ? -value : value;
}

std::string format_hex64(std::uint64_t value) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(value));
  return std::string(buf, 16);
}

std::uint64_t parse_hex64(std::string_view text) {
  if (text.size() != 16) {
    throw Error(Errc::parse, "expected 16 hex digits, got '" + std::string(text) + "'");
  }
  std::uint64_t value = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value, 16);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw Error(Errc::parse, "invalid hex digits '" + std::string(text) + "'");
  }
  return value;
}

// ---- key file --------------------------------------------------------------

std::string key_json(const KeySet& keys) {
  return "{\"k1\": \"" + format_hex64(keys.k1) + "\", \"k2\": \"" + format_hex64(keys.k2) +
         "\"}\n";
}

KeySet parse_key_json(std::string_view text) {
  const json doc = parse_json(text, "key file");
  return KeySet{parse_hex64(field<std::string>(doc, "k1", "key file")),
                parse_hex64(field<std::string>(doc, "k2", "key file"))};
}

KeySet load_keyset(const fs::path& path) {
  try {
    return parse_key_json(read_text_file(path));
  } catch (const Error& e) {
    if (e.code() == Errc::io) throw;
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

void save_keyset(const fs::path& path, const KeySet& keys) {
  write_file_atomic(path, key_json(keys));
}

// ---- manifest --------------------------------------------------------------

std::vector<ManifestRow> parse_manifest(std::string_view text, const fs::path& base_dir) {
  std::vector<ManifestRow> rows;
  std::set<std::string, std::less<>> ids;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    const auto cols = split(line, '\t');
    const std::string where = "manifest line " + std::to_string(line_no);
    if (cols.size() != 4) {
      throw Error(Errc::parse, where + ": expected 4 tab-separated columns, got " +
                                   std::to_string(cols.size()));
    }
    for (auto c : cols) {
      if (c.empty()) throw Error(Errc::parse, where + ": empty column");
    }
    ManifestRow row;
    const fs::path p{std::string(cols[0])};
    row.path = p.is_absolute() ? p : base_dir / p;
    row.image_id = cols[1];
    row.group_id = cols[2];
    row.owner_id = cols[3];
    if (!ids.insert(row.image_id).second) {
      throw Error(Errc::duplicate_id, where + ": duplicate image id '" + row.image_id + "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<ManifestRow> load_manifest(const fs::path& path) {
  auto rows = parse_manifest(read_text_file(path), path.parent_path());
  for (const auto& row : rows) {
    if (!fs::exists(row.path)) {
      throw Error(Errc::io, path.string() + ": image for '" + row.image_id +
                                "' not found at " + row.path.string());
    }
  }
  return rows;
}

std::string manifest_tsv(std::span<const ManifestRow> rows) {
  std::ostringstream out;
  out << "# path\timage_id\tgroup_id\towner_id\n";
  for (const auto& r : rows) {
    out << r.path.string() << '\t' << r.image_id << '\t' << r.group_id << '\t' << r.owner_id
        << '\n';
  }
  return out.str();
}

// ---- codebook file ---------------------------------------------------------

std::string codebook_json(const CodebookFile& file) {
  const Codebook& cb = file.codebook;
  json words = json::array();
  for (const auto& w : cb.words) words.push_back(vector_to_json(w.coeffs));
  json doc = {
      {"format", kCodebookFormat},
      {"version", kFormatVersion},
      {"m", cb.size()},
      {"dim", kScdLength},
      {"provenance",
       {{"algorithm", "kmeans++/lloyd"},
        {"seed", format_hex64(cb.seed)},
        {"iterations", cb.iterations},
        {"max_iters", cb.max_iters},
        {"tol", format_hexfloat(cb.tol)}}},
      {"corpus_stats", stats_to_json(file.stats)},
      {"words", std::move(words)},
  };
  return doc.dump() + "\n";
}

CodebookFile parse_codebook_json(std::string_view text) {
  constexpr const char* what = "codebook file";
  const json doc = parse_json(text, what);
  check_header(doc, kCodebookFormat, what);
  const auto m = field<std::size_t>(doc, "m", what);
  if (field<std::size_t>(doc, "dim", what) != kScdLength) {
    throw Error(Errc::parse, "codebook file: word dimension must be 256");
  }
  const json& prov = doc.at("provenance");
  CodebookFile file;
  file.codebook.seed = parse_hex64(field<std::string>(prov, "seed", what));
  file.codebook.iterations = field<std::size_t>(prov, "iterations", what);
  file.codebook.max_iters = field<std::size_t>(prov, "max_iters", what);
  file.codebook.tol = parse_hexfloat(field<std::string>(prov, "tol", what));

  const json& words = doc.at("words");
  if (!words.is_array() || words.size() != m || m == 0) {
    throw Error(Errc::parse, "codebook file: expected m >= 1 words");
  }
  for (const auto& w : words) {
    const auto values = vector_from_json(w, what);
    if (values.size() != kScdLength) throw Error(Errc::parse, "codebook file: word of wrong length");
    ScdVector v;
    std::copy(values.begin(), values.end(), v.coeffs.begin());
    file.codebook.words.push_back(v);
  }
  file.stats = stats_from_json(doc.at("corpus_stats"), m, what);
  return file;
}

// ---- descriptor store ------------------------------------------------------

std::string store_json(const DescriptorStore& store) {
  json entries = json::array();
  for (const auto& e : store.index.entries()) {
    entries.push_back({{"image_id", e.image_id},
                       {"owner_id", e.owner_id},
                       {"values", vector_to_json(e.descriptor.values)}});
  }
  json doc = {
      {"format", kStoreFormat},
      {"version", kFormatVersion},
      {"codebook_sha256", store.codebook_sha256},
      {"m", store.stats.df.size()},
      {"corpus_stats", stats_to_json(store.stats)},
      {"entries", std::move(entries)},
  };
  return doc.dump() + "\n";
}

DescriptorStore parse_store_json(std::string_view text) {
  constexpr const char* what = "descriptor store";
  const json doc = parse_json(text, what);
  check_header(doc, kStoreFormat, what);
  const auto m = field<std::size_t>(doc, "m", what);
  DescriptorStore store;
  store.codebook_sha256 = field<std::string>(doc, "codebook_sha256", what);
  store.stats = stats_from_json(doc.at("corpus_stats"), m, what);

  std::vector<IndexEntry> entries;
  for (const auto& e : doc.at("entries")) {
    IndexEntry entry;
    entry.image_id = field<std::string>(e, "image_id", what);
    entry.owner_id = field<std::string>(e, "owner_id", what);
    entry.descriptor.values = vector_from_json(e.at("values"), what);
    if (entry.descriptor.values.size() != m) {
      throw Error(Errc::parse, "descriptor store: entry '" + entry.image_id +
                                   "' has the wrong dimension");
    }
    entries.push_back(std::move(entry));
  }
  store.index = Index(std::move(entries));
  return store;
}

}  // namespace etcir
