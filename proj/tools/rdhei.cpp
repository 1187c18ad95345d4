// Command-line front end: owner, hider and receiver operations for both
// schemes, plus capacity, quality metrics and the batch report.
//
// Exit status: 0 ok, 2 bad parameter or no capacity, 3 corrupted carrier or
// wrong key, 4 I/O or file format, 1 anything else.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rdhei/rdhei.hpp"

namespace {

using namespace rdhei;

enum Exit : int { kOk = 0, kInternal = 1, kParameter = 2, kCorrupt = 3, kIo = 4 };

struct Options {
  std::string input;
  std::string input2;
  std::string out;
  std::string csv;
  std::string key_e1, key_e2, key_h, key_m, key_p;
  std::string block = "8x8";
  std::string zeta = "0.5";
  std::string coder = "arith";
  std::string seed = "0x5EED0001";
  std::string scheme = "vrbe";
  std::string payload;
  std::optional<std::uint64_t> payload_bits;
  std::vector<std::string> blocks;
  std::vector<std::string> zetas;
  std::vector<std::string> coders;
  std::vector<std::string> schemes;
  unsigned threads = 0;
  bool pruned = false;
};

Key need_key(const std::string& hex, const char* flag) {
  if (hex.empty()) {
    throw ParameterError(std::string("missing ") + flag + " (or its environment variable)");
  }
  return Key::from_hex(hex);
}

BlockShape parse_block(const std::string& s) {
  const auto x = s.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument(s);
    std::size_t u1 = 0, u2 = 0;
    const int n1 = std::stoi(s.substr(0, x), &u1);
    const int n2 = std::stoi(s.substr(x + 1), &u2);
    if (u1 != x || u2 != s.size() - x - 1 || n1 < 1 || n2 < 1) throw std::invalid_argument(s);
    return {n1, n2};
  } catch (const std::exception&) {
    throw ParameterError("invalid block size '" + s + "' (expected N1xN2)");
  }
}

std::uint64_t parse_seed(const std::string& s) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 0);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParameterError("invalid seed '" + s + "'");
  }
}

ScanMode scan_mode(const Options& o) { return o.pruned ? ScanMode::kPruned : ScanMode::kExact; }

VraeConfig vrae_config(const Options& o) {
  VraeConfig c;
  c.block = parse_block(o.block);
  c.zeta = Zeta::parse(o.zeta);
  c.seed = parse_seed(o.seed);
  c.backend = parse_backend(o.coder);
  c.scan = scan_mode(o);
  return c;
}

const std::string& need_out(const Options& o) {
  if (o.out.empty()) throw ParameterError("missing --out");
  return o.out;
}

// Payload file bytes, MSB first, optionally cut to --payload-bits.
BitString load_payload(const Options& o) {
  if (o.payload.empty()) throw ParameterError("missing --payload");
  BitString bits = bytes_to_bits(read_file(o.payload));
  if (o.payload_bits) {
    if (*o.payload_bits > bits.size()) {
      throw ParameterError("--payload-bits " + std::to_string(*o.payload_bits) +
                           " exceeds the " + std::to_string(bits.size()) +
                           " bits in " + o.payload);
    }
    bits.resize(static_cast<std::size_t>(*o.payload_bits));
  }
  return bits;
}

std::string meta_path(const std::string& image) { return image + ".meta"; }

void write_meta(const std::string& image, std::uint64_t payload_bits) {
  std::ofstream out(meta_path(image));
  out << "payload_bits " << payload_bits << "\n";
  if (!out) throw IoError("cannot write " + meta_path(image));
}

// --payload-bits wins; otherwise the sidecar written by embed.
std::uint64_t payload_length(const Options& o) {
  if (o.payload_bits) return *o.payload_bits;
  std::ifstream in(meta_path(o.input));
  if (!in) {
    throw ParameterError("payload length unknown: pass --payload-bits or provide " +
                         meta_path(o.input));
  }
  std::string key;
  std::uint64_t n = 0;
  if (!(in >> key >> n) || key != "payload_bits") {
    throw FormatError("malformed " + meta_path(o.input), 0);
  }
  return n;
}

void save_payload(const Options& o, const BitString& bits) {
  write_file(need_out(o), bits_to_bytes(bits));
  std::cout << "extracted " << bits.size() << " bits -> " << o.out << "\n";
}

void report_room(int threshold, const RoomLayout& layout, const GrayImage& img) {
  std::cout << "t_opt " << threshold << "\n"
            << "capacity_bits " << layout.room_bits << "\n"
            << "er_bpp " << format_double(static_cast<double>(layout.room_bits) /
                                          static_cast<double>(img.size()))
            << "\n";
}

// ---- commands ---------------------------------------------------------------

void cmd_vrbe_prepare(const Options& o) {
  const GrayImage x = read_pgm_file(o.input);
  const auto prep = vrbe_prepare(x, need_key(o.key_e1, "--key-e1"),
                                 need_key(o.key_e2, "--key-e2"), parse_backend(o.coder),
                                 scan_mode(o));
  write_pgm_file(need_out(o), prep.image);
  report_room(prep.threshold, prep.layout, x);
}

void cmd_vrbe_embed(const Options& o) {
  const GrayImage y = read_pgm_file(o.input);
  const BitString s = load_payload(o);
  const GrayImage z = vrbe_embed(y, s, need_key(o.key_e2, "--key-e2"), need_key(o.key_h, "--key-h"));
  write_pgm_file(need_out(o), z);
  write_meta(o.out, s.size());
  std::cout << "embedded " << s.size() << " bits\n";
}

void cmd_vrbe_extract(const Options& o) {
  const GrayImage z = read_pgm_file(o.input);
  save_payload(o, vrbe_extract(z, need_key(o.key_e2, "--key-e2"), need_key(o.key_h, "--key-h"),
                               payload_length(o)));
}

void cmd_vrbe_recover(const Options& o) {
  const GrayImage z = read_pgm_file(o.input);
  write_pgm_file(need_out(o), vrbe_recover(z, need_key(o.key_e1, "--key-e1"),
                                           need_key(o.key_e2, "--key-e2"),
                                           parse_backend(o.coder)));
}

void cmd_vrae_encrypt(const Options& o) {
  const GrayImage x = read_pgm_file(o.input);
  const VraeConfig c = vrae_config(o);
  const auto enc = vrae_encrypt(x, need_key(o.key_m, "--key-m"), need_key(o.key_p, "--key-p"),
                                c.block, c.zeta);
  if (enc.arnold.trivial()) {
    std::cerr << "warning: block grid rows and columns are coprime; the block "
                 "permutation is the identity\n";
  }
  write_pgm_file(need_out(o), enc.image);
  const auto grid = partition(x, c.block.rows, c.block.cols);
  std::cout << "blocks " << grid.block_count() << "\n"
            << "abnormal_pixels " << abnormal_count(x, enc.shifts, grid) << "\n";
}

void cmd_vrae_embed(const Options& o) {
  const GrayImage y = read_pgm_file(o.input);
  const BitString s = load_payload(o);
  const auto m = vrae_embed(y, s, need_key(o.key_h, "--key-h"), vrae_config(o));
  write_pgm_file(need_out(o), m.image);
  write_meta(o.out, s.size());
  std::cout << "embedded " << s.size() << " bits\n";
  report_room(m.threshold, m.layout, y);
}

void cmd_vrae_extract(const Options& o) {
  const GrayImage z = read_pgm_file(o.input);
  save_payload(o, vrae_extract(z, need_key(o.key_h, "--key-h"), vrae_config(o), payload_length(o)));
}

void cmd_vrae_recover(const Options& o) {
  const GrayImage z = read_pgm_file(o.input);
  write_pgm_file(need_out(o), vrae_recover(z, need_key(o.key_m, "--key-m"),
                                           need_key(o.key_p, "--key-p"), vrae_config(o)));
}

// Room the vacating party would create on this image: the plain image for
// VRBE, the encrypted image for VRAE.
void cmd_capacity(const Options& o) {
  const GrayImage img = read_pgm_file(o.input);
  ErgaParams p;
  if (o.scheme == "vrbe") {
    p = ErgaParams::whole(parse_backend(o.coder));
    p.scan = scan_mode(o);
  } else if (o.scheme == "vrae") {
    p = vrae_config(o).erga();
  } else {
    throw ParameterError("unknown scheme '" + o.scheme + "' (expected vrbe|vrae)");
  }
  const VacatedImage v = vacate(img, p);
  report_room(v.threshold, v.layout, img);
}

void cmd_metrics(const Options& o) {
  const GrayImage a = read_pgm_file(o.input);
  const GrayImage b = read_pgm_file(o.input2);
  std::cout << "psnr " << format_double(psnr(a, b)) << "\n"
            << "ssim " << format_double(ssim(a, b)) << "\n";
}

std::vector<CaseConfig> bench_grid(const Options& o) {
  const std::vector<std::string> schemes =
      o.schemes.empty() ? std::vector<std::string>{"vrbe", "vrae"} : o.schemes;
  const std::vector<std::string> coders =
      o.coders.empty() ? std::vector<std::string>{"arith", "huffman"} : o.coders;
  const std::vector<std::string> blocks =
      o.blocks.empty() ? std::vector<std::string>{"4x4", "6x6", "8x8"} : o.blocks;
  const std::vector<std::string> zetas =
      o.zetas.empty() ? std::vector<std::string>{"0.25", "0.5", "0.75", "1", "none"} : o.zetas;
  const std::uint64_t seed = parse_seed(o.seed);
  std::vector<CaseConfig> out;
  for (const auto& s : schemes) {
    if (s != "vrbe" && s != "vrae") throw ParameterError("unknown scheme '" + s + "'");
    for (const auto& c : coders) {
      const Backend be = parse_backend(c);
      if (s == "vrbe") {
        out.push_back(CaseConfig::vrbe(be));
        out.back().scan = scan_mode(o);
        continue;
      }
      for (const auto& b : blocks) {
        const BlockShape shape = parse_block(b);
        for (const auto& z : zetas) {
          out.push_back(CaseConfig::vrae(be, shape.rows, shape.cols, Zeta::parse(z)));
          out.back().seed = seed;
          out.back().scan = scan_mode(o);
        }
      }
    }
  }
  return out;
}

void cmd_bench(const Options& o) {
  BenchOptions bo;
  // Keys are optional here; unset ones come from a fixed test bundle.
  const KeyBundle fallback = bo.keys;
  auto key_or = [](const std::string& hex, const Key& k) { return hex.empty() ? k : Key::from_hex(hex); };
  bo.keys = {key_or(o.key_e1, fallback.e1), key_or(o.key_e2, fallback.e2),
             key_or(o.key_h, fallback.h), key_or(o.key_m, fallback.m),
             key_or(o.key_p, fallback.p)};
  bo.threads = o.threads;
  const auto rows = bench(o.input, bench_grid(o), bo);
  std::size_t failed = 0;
  for (const auto& r : rows) failed += !r.roundtrip_ok;
  if (o.csv.empty() || o.csv == "-") {
    write_report(std::cout, rows);
  } else {
    std::ofstream out(o.csv, std::ios::binary);
    if (!out) throw IoError("cannot create " + o.csv);
    write_report(out, rows);
    if (!out) throw IoError("write failed for " + o.csv);
  }
  std::cerr << rows.size() << " rows, " << failed << " failed\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reversible data hiding in encrypted grayscale images"};
  app.require_subcommand(1);
  Options o;

  auto key_opt = [&](CLI::App* c, const char* name, std::string& dst, const char* env) {
    c->add_option(name, dst, "64 hex characters")->envname(env);
  };
  auto keys = [&](CLI::App* c, std::initializer_list<char> which) {
    for (char k : which) {
      switch (k) {
        case '1': key_opt(c, "--key-e1", o.key_e1, "RDHEI_KEY_E1"); break;
        case '2': key_opt(c, "--key-e2", o.key_e2, "RDHEI_KEY_E2"); break;
        case 'h': key_opt(c, "--key-h", o.key_h, "RDHEI_KEY_H"); break;
        case 'm': key_opt(c, "--key-m", o.key_m, "RDHEI_KEY_M"); break;
        case 'p': key_opt(c, "--key-p", o.key_p, "RDHEI_KEY_P"); break;
        default: break;
      }
    }
  };
  auto input = [&](CLI::App* c) { c->add_option("input", o.input, "input PGM")->required(); };
  auto out = [&](CLI::App* c) { c->add_option("--out,-o", o.out, "output file"); };
  auto coder = [&](CLI::App* c) {
    c->add_option("--coder", o.coder, "arith|huffman")->capture_default_str();
    c->add_flag("--pruned-scan", o.pruned, "scan thresholds with early exit");
  };
  auto grid = [&](CLI::App* c) {
    c->add_option("--block", o.block, "block size N1xN2")->capture_default_str();
    c->add_option("--seed", o.seed, "reference selection seed")->capture_default_str();
  };
  auto zeta = [&](CLI::App* c) {
    c->add_option("--zeta", o.zeta, "scale factor in [0,1] or none")->capture_default_str();
  };
  auto payload_in = [&](CLI::App* c) {
    c->add_option("--payload", o.payload, "payload file (bits MSB first)");
    c->add_option("--payload-bits", o.payload_bits, "use only the first N bits");
  };
  auto payload_len = [&](CLI::App* c) {
    c->add_option("--payload-bits", o.payload_bits, "payload length (default: <input>.meta)");
  };

  struct Cmd {
    CLI::App* app;
    void (*run)(const Options&);
  };
  std::vector<Cmd> cmds;
  auto sub = [&](const char* name, const char* help, void (*run)(const Options&)) {
    CLI::App* c = app.add_subcommand(name, help);
    cmds.push_back({c, run});
    return c;
  };

  auto* c = sub("vrbe-prepare", "owner: vacate room, then encrypt", cmd_vrbe_prepare);
  input(c), out(c), keys(c, {'1', '2'}), coder(c);
  c = sub("vrbe-embed", "hider: write payload into a prepared image", cmd_vrbe_embed);
  input(c), out(c), keys(c, {'2', 'h'}), payload_in(c);
  c = sub("vrbe-extract", "receiver: read the payload", cmd_vrbe_extract);
  input(c), out(c), keys(c, {'2', 'h'}), payload_len(c);
  c = sub("vrbe-recover", "receiver: rebuild the original image", cmd_vrbe_recover);
  input(c), out(c), keys(c, {'1', '2'}), coder(c);
  c = sub("vrae-encrypt", "owner: block modulation and permutation", cmd_vrae_encrypt);
  input(c), out(c), keys(c, {'m', 'p'}), grid(c), zeta(c);
  c = sub("vrae-embed", "hider: vacate room in the encrypted image and embed", cmd_vrae_embed);
  input(c), out(c), keys(c, {'h'}), grid(c), coder(c), payload_in(c);
  c = sub("vrae-extract", "receiver: read the payload", cmd_vrae_extract);
  input(c), out(c), keys(c, {'h'}), grid(c), payload_len(c);
  c = sub("vrae-recover", "receiver: rebuild the original image", cmd_vrae_recover);
  input(c), out(c), keys(c, {'m', 'p'}), grid(c), zeta(c), coder(c);
  c = sub("capacity", "room the vacating step would create", cmd_capacity);
  input(c), grid(c), coder(c);
  c->add_option("--scheme", o.scheme, "vrbe (plain input) | vrae (encrypted input)")
      ->capture_default_str();
  c = sub("metrics", "PSNR and SSIM between two images", cmd_metrics);
  input(c);
  c->add_option("other", o.input2, "second PGM")->required();
  c = sub("bench", "run every config on every PGM in a directory", cmd_bench);
  c->add_option("input", o.input, "directory of PGM files")->required();
  keys(c, {'1', '2', 'h', 'm', 'p'});
  c->add_option("--csv", o.csv, "report file (default stdout)");
  c->add_option("--scheme", o.schemes, "vrbe|vrae (repeatable)");
  c->add_option("--coder", o.coders, "arith|huffman (repeatable)");
  c->add_option("--block", o.blocks, "N1xN2 (repeatable)");
  c->add_option("--zeta", o.zetas, "float|none (repeatable)");
  c->add_option("--seed", o.seed, "reference selection seed")->capture_default_str();
  c->add_option("--threads", o.threads, "worker threads (0: all cores)");
  c->add_flag("--pruned-scan", o.pruned, "scan thresholds with early exit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kParameter;
  }

  try {
    for (const auto& cmd : cmds) {
      if (cmd.app->parsed()) cmd.run(o);
    }
    return kOk;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kIo;
  } catch (const CorruptionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kCorrupt;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParameter;
  } catch (const CapacityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kParameter;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInternal;
  }
}
