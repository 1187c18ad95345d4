#pragma once

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "rdhei/io.hpp"
#include "rdhei/keystream.hpp"
#include "rdhei/metrics.hpp"
#include "rdhei/schemes.hpp"

namespace rdhei {

// Seeded random bit string used as benchmark payload.
inline BitString random_bits(std::size_t n, std::uint64_t seed) {
  BitString out(n);
  SplitMix64 gen(seed);
  std::uint64_t word = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (i % 64 == 0) word = gen.next();
    out[i] = static_cast<std::uint8_t>((word >> (i % 64)) & 1u);
  }
  return out;
}

struct CaseConfig {
  Scheme scheme = Scheme::kVrbe;
  Backend backend = Backend::kArithmetic;
  BlockShape block{8, 8};  // VRAE only
  Zeta zeta = Zeta(0.5);   // VRAE only
  std::uint64_t seed = kDefaultReferenceSeed;
  ScanMode scan = ScanMode::kExact;

  static CaseConfig vrbe(Backend backend) {
    CaseConfig c;
    c.scheme = Scheme::kVrbe;
    c.backend = backend;
    return c;
  }

  static CaseConfig vrae(Backend backend, int n1, int n2, Zeta zeta) {
    CaseConfig c;
    c.scheme = Scheme::kVrae;
    c.backend = backend;
    c.block = {n1, n2};
    c.zeta = zeta;
    return c;
  }

  VraeConfig vrae_config() const { return {block, zeta, seed, backend, scan}; }

  std::string block_label() const {
    if (scheme == Scheme::kVrbe) return "";
    return std::to_string(block.rows) + "x" + std::to_string(block.cols);
  }
  std::string zeta_label() const { return scheme == Scheme::kVrbe ? "" : zeta.to_string(); }
};

struct ReportRow {
  std::string image;
  CaseConfig config;
  int threshold = 0;
  std::uint64_t ec_bits = 0;
  double er_bpp = 0;
  double psnr_encrypted = 0;
  double ssim_encrypted = 0;
  double psnr_marked = 0;
  double ssim_marked = 0;
  std::optional<std::uint64_t> abnormal;  // VRAE only
  bool roundtrip_ok = false;
  std::string error;  // non-empty when the run threw
};

// Layout as seen by the receiver, kept for accounting checks.
struct CaseResult {
  ReportRow row;
  long long predicted_ec = 0;
  RoomLayout layout;
  std::uint64_t payload_bits = 0;
  bool payload_ok = false;
  bool image_ok = false;
};

struct CaseOptions {
  bool quality = true;  // PSNR / SSIM columns
};

// Owner -> hider -> receiver with a payload that fills the room.
inline CaseResult run_case(const GrayImage& plain, const std::string& id,
                           const CaseConfig& cfg, const KeyBundle& keys,
                           std::uint64_t payload_seed, CaseOptions opt = {}) {
  CaseResult res;
  res.row.image = id;
  res.row.config = cfg;
  GrayImage encrypted;
  GrayImage marked;
  BitString payload;
  BitString extracted;
  GrayImage recovered;

  if (cfg.scheme == Scheme::kVrbe) {
    const VrbePrepared prep = vrbe_prepare(plain, keys.e1, keys.e2, cfg.backend, cfg.scan);
    encrypted = prep.image;
    res.row.threshold = prep.threshold;
    res.predicted_ec = prep.ec;
    res.layout = vrbe_room(prep.image, keys.e2).layout;
    payload = random_bits(res.layout.room_bits, payload_seed);
    marked = vrbe_embed(prep.image, payload, keys.e2, keys.h);
    extracted = vrbe_extract(marked, keys.e2, keys.h, payload.size());
    recovered = vrbe_recover(marked, keys.e1, keys.e2, cfg.backend);
  } else {
    const VraeConfig vc = cfg.vrae_config();
    const VraeEncrypted enc = vrae_encrypt(plain, keys.m, keys.p, vc.block, vc.zeta);
    encrypted = enc.image;
    res.row.abnormal =
        abnormal_count(plain, enc.shifts, partition(plain, vc.block.rows, vc.block.cols));
    const VraeMarked vacated = vrae_vacate(enc.image, vc);
    res.row.threshold = vacated.threshold;
    res.predicted_ec = vacated.ec;
    res.layout = vrae_room(vacated.image, vc).layout;
    payload = random_bits(res.layout.room_bits, payload_seed);
    marked = vrae_fill(vacated, payload, keys.h, vc);
    extracted = vrae_extract(marked, keys.h, vc, payload.size());
    const GrayImage restored = vrae_restore_encrypted(marked, vc);
    recovered = restored == enc.image ? vrae_decrypt(restored, keys.m, keys.p, vc.block, vc.zeta)
                                      : GrayImage();
  }

  res.payload_bits = payload.size();
  res.payload_ok = extracted == payload;
  res.image_ok = recovered == plain;
  res.row.ec_bits = res.layout.room_bits;
  res.row.er_bpp = static_cast<double>(res.layout.room_bits) / static_cast<double>(plain.size());
  if (opt.quality) {
    res.row.psnr_encrypted = psnr(plain, encrypted);
    res.row.ssim_encrypted = ssim(plain, encrypted);
    res.row.psnr_marked = psnr(plain, marked);
    res.row.ssim_marked = ssim(plain, marked);
  }
  res.row.roundtrip_ok = res.payload_ok && res.image_ok;
  return res;
}

// ---- CSV ------------------------------------------------------------------

inline const char* report_header() {
  return "image,scheme,backend,block,zeta,t_opt,ec_bits,er_bpp,psnr_encrypted,"
         "ssim_encrypted,psnr_marked,ssim_marked,abnormal_pixels,roundtrip_ok,error";
}

// RFC 4180: quote fields holding a comma, quote or line break.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline void write_report_row(std::ostream& os, const ReportRow& r) {
  const bool failed = !r.error.empty();
  auto num = [&](double v) { return failed ? std::string() : format_double(v); };
  os << csv_field(r.image) << ',' << to_string(r.config.scheme) << ','
     << to_string(r.config.backend) << ',' << r.config.block_label() << ','
     << r.config.zeta_label() << ',' << (failed ? "" : std::to_string(r.threshold)) << ','
     << (failed ? "" : std::to_string(r.ec_bits)) << ',' << num(r.er_bpp) << ','
     << num(r.psnr_encrypted) << ',' << num(r.ssim_encrypted) << ',' << num(r.psnr_marked)
     << ',' << num(r.ssim_marked) << ','
     << (r.abnormal && !failed ? std::to_string(*r.abnormal) : "") << ','
     << (r.roundtrip_ok ? "true" : "false") << ',' << csv_field(r.error) << "\r\n";
}

inline void write_report(std::ostream& os, const std::vector<ReportRow>& rows) {
  os << report_header() << "\r\n";
  for (const auto& r : rows) write_report_row(os, r);
}

// ---- batch ----------------------------------------------------------------

struct BenchOptions {
  KeyBundle keys = KeyBundle::from_seed(0xB5EED);
  std::uint64_t payload_seed = 0x9A71;
  unsigned threads = 0;  // 0: hardware concurrency
  CaseOptions quality{};
};

inline std::vector<std::filesystem::path> list_pgm_files(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    std::string ext = e.path().extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (ext == ".pgm") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// One row per (image, config). Failures become rows with the error text;
// the batch always runs to the end.
inline std::vector<ReportRow> bench(const std::filesystem::path& dir,
                                    const std::vector<CaseConfig>& configs,
                                    const BenchOptions& opt = {}) {
  const auto files = list_pgm_files(dir);
  const std::size_t jobs = files.size() * configs.size();
  std::vector<ReportRow> rows(jobs);
  std::vector<std::optional<GrayImage>> images(files.size());
  std::vector<std::string> load_errors(files.size());
  for (std::size_t f = 0; f < files.size(); ++f) {
    try {
      images[f] = read_pgm_file(files[f].string());
    } catch (const std::exception& e) {
      load_errors[f] = e.what();
    }
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs; j = next++) {
      const std::size_t f = j / configs.size();
      const CaseConfig& cfg = configs[j % configs.size()];
      ReportRow& row = rows[j];
      row.image = files[f].filename().string();
      row.config = cfg;
      if (!images[f]) {
        row.error = load_errors[f];
        continue;
      }
      try {
        row = run_case(*images[f], row.image, cfg, opt.keys, opt.payload_seed + j,
                       opt.quality)
                  .row;
      } catch (const std::exception& e) {
        row.error = e.what();
      }
    }
  };
  unsigned n = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  n = static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

}  // namespace rdhei
