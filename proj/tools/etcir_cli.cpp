// etcir command-line tool. Talks to the library exclusively through the C API.
//
// Exit codes: 0 success, 1 usage error, 2 validation error, 3 I/O error.

#include <CLI11.hpp>
#include <cerrno>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "etcir/etcir.h"

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kValidation = 2, kIo = 3 };

struct CliFailure {
  int exit_code;
  std::string message;
};

int exit_code_for(etcir_status status) {
  switch (status) {
    case ETCIR_OK: return kOk;
    case ETCIR_E_INVALID_ARGUMENT: return kUsage;
    case ETCIR_E_IO: return kIo;
    default: return kValidation;
  }
}

void check(etcir_status status) {
  if (status != ETCIR_OK) {
    throw CliFailure{exit_code_for(status),
                     std::string(etcir_status_string(status)) + ": " + etcir_last_error()};
  }
}

template <typename T, void (*Free)(T*)>
struct HandleDeleter {
  void operator()(T* p) const { Free(p); }
};
using Image = std::unique_ptr<etcir_image, HandleDeleter<etcir_image, etcir_image_free>>;
using Codebook =
    std::unique_ptr<etcir_codebook, HandleDeleter<etcir_codebook, etcir_codebook_free>>;
using IndexHandle = std::unique_ptr<etcir_index, HandleDeleter<etcir_index, etcir_index_free>>;
using Hits = std::unique_ptr<etcir_hits, HandleDeleter<etcir_hits, etcir_hits_free>>;
using Report = std::unique_ptr<etcir_report, HandleDeleter<etcir_report, etcir_report_free>>;

// Decimal or 0x-prefixed hexadecimal.
std::uint64_t parse_seed(const std::string& text, const char* flag) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 0);
  if (text.empty() || text[0] == '-' || errno != 0 || end == nullptr || *end != '\0') {
    throw CliFailure{kUsage, std::string(flag) + ": not an unsigned 64-bit integer: " + text};
  }
  return v;
}

bool parse_bool(const std::string& text, const char* flag) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw CliFailure{kUsage, std::string(flag) + ": expected true or false"};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw CliFailure{kIo, "cannot write " + path};
}

Image read_image(const std::string& path) {
  etcir_image* img = nullptr;
  check(etcir_image_read(path.c_str(), &img));
  return Image(img);
}

// ---- subcommands -------------------------------------------------------------

struct EncryptArgs {
  std::string input, output, key, key_out, master_seed, manifest, out_dir, keys_dir,
      out_manifest;
  std::uint64_t key_index = 0;
};

void run_encrypt(const EncryptArgs& a) {
  if (!a.manifest.empty()) {
    if (a.master_seed.empty() || a.out_dir.empty() || a.keys_dir.empty()) {
      throw CliFailure{kUsage,
                       "--manifest requires --master-key-seed, --out-dir and --keys-dir"};
    }
    const std::string out_manifest =
        a.out_manifest.empty() ? a.out_dir + "/manifest.tsv" : a.out_manifest;
    check(etcir_encrypt_manifest(a.manifest.c_str(),
                                 parse_seed(a.master_seed, "--master-key-seed"),
                                 a.out_dir.c_str(), a.keys_dir.c_str(), out_manifest.c_str()));
    std::cout << out_manifest << '\n';
    return;
  }
  if (a.input.empty() || a.output.empty()) {
    throw CliFailure{kUsage, "encrypt needs INPUT and OUTPUT (or --manifest)"};
  }
  if (a.key.empty() == a.master_seed.empty()) {
    throw CliFailure{kUsage, "give exactly one of --key or --master-key-seed"};
  }

  etcir_keyset keys{};
  std::string key_path;
  if (!a.key.empty()) {
    check(etcir_keyset_read(a.key.c_str(), &keys));
  } else {
    keys = etcir_keyset_derive(parse_seed(a.master_seed, "--master-key-seed"), a.key_index);
    key_path = a.key_out.empty() ? a.output + ".key.json" : a.key_out;
  }

  Image plain = read_image(a.input);
  etcir_image* etc = nullptr;
  check(etcir_encrypt(plain.get(), &keys, &etc));
  Image guard(etc);
  check(etcir_image_write(etc, a.output.c_str(), 95));
  if (!key_path.empty()) {
    check(etcir_keyset_write(key_path.c_str(), &keys));
    std::cout << key_path << '\n';
  }
}

void run_decrypt(const std::string& input, const std::string& output, const std::string& key) {
  etcir_keyset keys{};
  check(etcir_keyset_read(key.c_str(), &keys));
  Image etc = read_image(input);
  etcir_image* plain = nullptr;
  check(etcir_decrypt(etc.get(), &keys, &plain));
  Image guard(plain);
  check(etcir_image_write(plain, output.c_str(), 95));
}

struct ClusteringArgs {
  std::uint32_t codebook_size = 256;
  std::string seed = "0";
  std::uint32_t max_iters = 100;
  double tol = 1e-9;

  etcir_clustering to_c() const {
    etcir_clustering c;
    etcir_clustering_defaults(&c);
    c.codebook_size = codebook_size;
    c.seed = parse_seed(seed, "--seed");
    c.max_iters = max_iters;
    c.tol = tol;
    return c;
  }
};

void run_build_codebook(const std::string& manifest, const ClusteringArgs& cargs,
                        const std::string& out) {
  const etcir_clustering cfg = cargs.to_c();
  etcir_codebook* cb = nullptr;
  check(etcir_codebook_build(manifest.c_str(), &cfg, &cb));
  Codebook guard(cb);
  check(etcir_codebook_write(cb, out.c_str()));
  std::cout << "codebook\t" << out << "\tM=" << etcir_codebook_size(cb)
            << "\titerations=" << etcir_codebook_iterations(cb)
            << "\tsha256=" << etcir_codebook_sha256(cb) << '\n';
}

Codebook read_codebook(const std::string& path) {
  etcir_codebook* cb = nullptr;
  check(etcir_codebook_read(path.c_str(), &cb));
  return Codebook(cb);
}

void run_index(const std::string& manifest, const std::string& codebook, const std::string& out) {
  Codebook cb = read_codebook(codebook);
  etcir_index* idx = nullptr;
  check(etcir_index_build(manifest.c_str(), cb.get(), &idx));
  IndexHandle guard(idx);
  check(etcir_index_write(idx, out.c_str()));
  std::cout << "index\t" << out << "\tentries=" << etcir_index_size(idx) << '\n';
}

void run_query(const std::string& index, const std::string& codebook, const std::string& image,
               std::size_t top_k) {
  Codebook cb = read_codebook(codebook);
  etcir_index* idx = nullptr;
  check(etcir_index_read(index.c_str(), &idx));
  IndexHandle idx_guard(idx);
  Image query = read_image(image);
  etcir_hits* hits = nullptr;
  check(etcir_index_query(idx, cb.get(), query.get(), top_k, &hits));
  Hits guard(hits);
  std::cout << etcir_hits_tsv(hits);
}

struct EvaluateArgs {
  std::string manifest, query_manifest, scenario = "all", master_seed = "0x5eed0001",
                                        query_seed = "0x5eed0002", keys_dir,
                                        count_self_match = "true", report, config_out;
  int jpeg_quality = 0;
};

void run_evaluate(const EvaluateArgs& a, const ClusteringArgs& cargs) {
  struct Pairing {
    const char* name;
    etcir_kind stored;
    etcir_kind query;
  };
  static constexpr Pairing kPairings[] = {
      {"plain-plain", ETCIR_PLAIN, ETCIR_PLAIN},
      {"etc-etc", ETCIR_ETC, ETCIR_ETC},
      {"plain-etc", ETCIR_PLAIN, ETCIR_ETC},
      {"etc-plain", ETCIR_ETC, ETCIR_PLAIN},
  };
  std::vector<Pairing> selected;
  for (const auto& p : kPairings) {
    if (a.scenario == "all" || a.scenario == p.name) selected.push_back(p);
  }
  if (selected.empty()) {
    throw CliFailure{kUsage, "--scenario must be all, plain-plain, etc-etc, plain-etc or etc-plain"};
  }
  if (a.jpeg_quality < 0 || a.jpeg_quality > 100) {
    throw CliFailure{kUsage, "--jpeg-quality must be in [1, 100]"};
  }

  etcir_eval_config cfg;
  etcir_eval_config_defaults(&cfg);
  cfg.clustering = cargs.to_c();
  cfg.stored_key_seed = parse_seed(a.master_seed, "--master-key-seed");
  cfg.query_key_seed = parse_seed(a.query_seed, "--query-key-seed");
  cfg.keys_dir = a.keys_dir.empty() ? nullptr : a.keys_dir.c_str();
  cfg.count_self_match = parse_bool(a.count_self_match, "--count-self-match") ? 1 : 0;
  cfg.jpeg_quality = a.jpeg_quality;

  std::string tsv = "# scenario\tquery_id\tG\tN\tAP\n";
  std::string configs = "[";
  std::string summary = "# scenario\tM\tqueries\tmAP\n";
  for (std::size_t i = 0; i < selected.size(); ++i) {
    cfg.stored_kind = selected[i].stored;
    cfg.query_kind = selected[i].query;
    etcir_report* report = nullptr;
    check(etcir_evaluate(a.manifest.c_str(),
                         a.query_manifest.empty() ? nullptr : a.query_manifest.c_str(), &cfg,
                         &report));
    Report guard(report);
    tsv += etcir_report_tsv(report);
    configs += (i ? "," : "") + std::string(etcir_report_config_json(report));
    char num[64];
    std::snprintf(num, sizeof num, "%.17g", etcir_report_map(report));
    summary += std::string(selected[i].name) + '\t' +
               std::to_string(cfg.clustering.codebook_size) + '\t' +
               std::to_string(etcir_report_query_count(report)) + '\t' + num + '\n';
  }
  configs += "]\n";

  if (!a.report.empty()) write_text(a.report, tsv);
  if (!a.config_out.empty()) write_text(a.config_out, configs);
  std::cout << "# config " << configs;
  if (a.report.empty()) std::cout << tsv;
  std::cout << summary;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"etcir: EtC image encryption and encryption-invariant retrieval"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(etcir_version()));

  EncryptArgs enc;
  auto* encrypt = app.add_subcommand("encrypt", "Encrypt an image (or a manifest) into EtC form");
  encrypt->add_option("input", enc.input, "Plain image");
  encrypt->add_option("output", enc.output, "EtC image to write (.png or .ppm)");
  encrypt->add_option("--key", enc.key, "Existing key file to encrypt with");
  encrypt->add_option("--master-key-seed", enc.master_seed, "Master seed for key derivation");
  encrypt->add_option("--key-index", enc.key_index, "Image index under the master seed");
  encrypt->add_option("--key-out", enc.key_out, "Where to write the derived key file");
  encrypt->add_option("--manifest", enc.manifest, "Encrypt every image of a manifest");
  encrypt->add_option("--out-dir", enc.out_dir, "Output directory for --manifest");
  encrypt->add_option("--keys-dir", enc.keys_dir, "Key file directory for --manifest");
  encrypt->add_option("--out-manifest", enc.out_manifest, "Manifest of the encrypted images");

  std::string dec_in, dec_out, dec_key;
  auto* decrypt = app.add_subcommand("decrypt", "Decrypt an EtC image");
  decrypt->add_option("input", dec_in, "EtC image")->required();
  decrypt->add_option("output", dec_out, "Decrypted image")->required();
  decrypt->add_option("--key", dec_key, "Key file")->required();

  ClusteringArgs clustering;
  const auto add_clustering = [&clustering](CLI::App* cmd) {
    cmd->add_option("--codebook-size", clustering.codebook_size, "Codebook size M")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", clustering.seed, "k-means seed");
    cmd->add_option("--max-iters", clustering.max_iters, "Lloyd iteration cap")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tol", clustering.tol, "Convergence threshold on centroid movement");
  };

  std::string cb_manifest, cb_out;
  auto* build = app.add_subcommand("build-codebook", "Build the visual-word codebook");
  build->add_option("--manifest", cb_manifest, "Stored-image manifest")->required();
  build->add_option("--out", cb_out, "Codebook file to write")->required();
  add_clustering(build);

  std::string ix_manifest, ix_codebook, ix_out;
  auto* index = app.add_subcommand("index", "Describe and index the stored images");
  index->add_option("--manifest", ix_manifest, "Stored-image manifest")->required();
  index->add_option("--codebook", ix_codebook, "Codebook file")->required();
  index->add_option("--out", ix_out, "Descriptor store to write")->required();

  std::string q_index, q_codebook, q_image;
  std::size_t top_k = 10;
  auto* query = app.add_subcommand("query", "Rank stored images against a query image");
  query->add_option("--index", q_index, "Descriptor store")->required();
  query->add_option("--codebook", q_codebook, "Codebook the store was built with")->required();
  query->add_option("--image", q_image, "Query image (plain or EtC)")->required();
  query->add_option("--top-k", top_k, "Number of hits")->check(CLI::PositiveNumber);

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Run the mixed plain/EtC retrieval scenarios");
  evaluate->add_option("--manifest", ev.manifest, "Stored-image manifest")->required();
  evaluate->add_option("--query-manifest", ev.query_manifest,
                       "Query manifest (default: every stored image)");
  evaluate->add_option("--scenario", ev.scenario,
                       "all | plain-plain | etc-etc | plain-etc | etc-plain (stored-query)");
  evaluate->add_option("--master-key-seed", ev.master_seed, "Seed for stored-image keys");
  evaluate->add_option("--query-key-seed", ev.query_seed, "Seed for query keys");
  evaluate->add_option("--keys-dir", ev.keys_dir, "Explicit <image id>.key.json stored keys");
  evaluate->add_option("--count-self-match", ev.count_self_match,
                       "Count a stored query as its own hit (true|false)");
  evaluate->add_option("--jpeg-quality", ev.jpeg_quality, "JPEG-code every image (1-100)");
  evaluate->add_option("--report", ev.report, "Write the per-query TSV here");
  evaluate->add_option("--config-out", ev.config_out, "Write the configuration echo here");
  add_clustering(evaluate);

  std::string syn_dir;
  std::uint32_t syn_groups = 10, syn_per_group = 4, syn_w = 104, syn_h = 72;
  std::string syn_seed = "2024";
  auto* synth = app.add_subcommand("synth", "Write a synthetic grouped test corpus");
  synth->add_option("--out-dir", syn_dir, "Output directory")->required();
  synth->add_option("--groups", syn_groups, "Number of groups")->check(CLI::PositiveNumber);
  synth->add_option("--per-group", syn_per_group, "Images per group")->check(CLI::PositiveNumber);
  synth->add_option("--width", syn_w, "Image width");
  synth->add_option("--height", syn_h, "Image height");
  synth->add_option("--seed", syn_seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*encrypt) {
      run_encrypt(enc);
    } else if (*decrypt) {
      run_decrypt(dec_in, dec_out, dec_key);
    } else if (*build) {
      run_build_codebook(cb_manifest, clustering, cb_out);
    } else if (*index) {
      run_index(ix_manifest, ix_codebook, ix_out);
    } else if (*query) {
      run_query(q_index, q_codebook, q_image, top_k);
    } else if (*evaluate) {
      run_evaluate(ev, clustering);
    } else if (*synth) {
      check(etcir_synth_corpus(syn_dir.c_str(), syn_groups, syn_per_group, syn_w, syn_h,
                               parse_seed(syn_seed, "--seed")));
      std::cout << syn_dir << "/manifest.tsv\n";
    }
  } catch (const CliFailure& f) {
    std::cerr << "etcir: " << f.message << '\n';
    return f.exit_code;
  }
  return kOk;
}
