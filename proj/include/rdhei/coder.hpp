#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rdhei/bits.hpp"
#include "rdhei/error.hpp"
#include "rdhei/huffman.hpp"
#include "rdhei/predictor.hpp"
#include "rdhei/range_coder.hpp"

namespace rdhei {

enum class Backend { kArithmetic, kHuffman };

inline std::string to_string(Backend b) {
  return b == Backend::kArithmetic ? "arith" : "huffman";
}

inline Backend parse_backend(const std::string& s) {
  if (s == "arith" || s == "arithmetic") return Backend::kArithmetic;
  if (s == "huffman") return Backend::kHuffman;
  throw ParameterError("unknown coder '" + s + "' (expected arith|huffman)");
}

inline constexpr int kMinThreshold = 1;
inline constexpr int kMaxThreshold = 255;
// 2T + 1 symbols must fit under the 8-bit codeword limit.
inline constexpr int kMaxHuffmanThreshold = 127;

// Field widths derived from the image size.
struct ImageSize {
  int rows = 0;
  int cols = 0;

  std::uint64_t pixels() const noexcept {
    return static_cast<std::uint64_t>(rows) * static_cast<std::uint64_t>(cols);
  }
  // Width of each symbol count field.
  int count_bits() const noexcept { return ceil_log2(pixels()); }
  // Width of the L field, and of the CD2 length field.
  int length_bits() const noexcept { return 3 + count_bits(); }
};

// 2T + 1 symbols: errors -T .. T-1 map to 0 .. 2T-1, everything else is the
// joint symbol 2T.
struct SymbolModel {
  int threshold = 1;
  std::vector<std::uint64_t> counts;

  std::size_t symbols() const noexcept { return counts.size(); }
  std::uint64_t joint() const noexcept { return counts.back(); }
  std::uint64_t independent() const noexcept {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i + 1 < counts.size(); ++i) t += counts[i];
    return t;
  }
  std::uint64_t total() const noexcept { return independent() + joint(); }

  friend bool operator==(const SymbolModel&, const SymbolModel&) = default;
};

constexpr std::uint32_t symbol_of(int e, int threshold) noexcept {
  return (e >= -threshold && e < threshold)
             ? static_cast<std::uint32_t>(e + threshold)
             : static_cast<std::uint32_t>(2 * threshold);
}

inline void check_threshold(int threshold) {
  if (threshold < kMinThreshold || threshold > kMaxThreshold) {
    throw ParameterError("threshold " + std::to_string(threshold) +
                         " outside [1, 255]");
  }
}

inline SymbolModel classify(const Peh& peh, int threshold) {
  check_threshold(threshold);
  SymbolModel m{threshold, {}};
  m.counts.reserve(static_cast<std::size_t>(2 * threshold + 1));
  std::uint64_t independent = 0;
  for (int e = -threshold; e < threshold; ++e) {
    m.counts.push_back(peh[e]);
    independent += peh[e];
  }
  m.counts.push_back(peh.total() - independent);
  return m;
}

// CD1 + CD2 for one threshold. AD is assembled by the caller.
struct CodedStream {
  Backend backend = Backend::kArithmetic;
  SymbolModel model;
  BitString cd1;
  BitString cd2;
  HuffmanTable huffman;  // Huffman backend only

  std::uint64_t ad_bits() const noexcept { return 8 * model.joint(); }
  // L: total length of CD and AD.
  std::uint64_t total_bits() const noexcept {
    return cd1.size() + cd2.size() + ad_bits();
  }
};

// Closed-form CD1 length for the arithmetic backend.
inline std::uint64_t arith_cd1_bits(int threshold, ImageSize size) {
  return 11 + static_cast<std::uint64_t>(2 * threshold + 2) * size.count_bits();
}

// Closed-form CD1 length for the Huffman backend.
inline std::uint64_t huffman_cd1_bits(const HuffmanTable& table) {
  std::uint64_t bits = 8 + 3 * table.size();
  for (int l : table.lengths()) bits += static_cast<std::uint64_t>(l);
  return bits;
}

inline std::uint64_t huffman_cd2_bits(const SymbolModel& m, const HuffmanTable& table) {
  std::uint64_t bits = 0;
  for (std::size_t s = 0; s < m.symbols(); ++s) {
    bits += m.counts[s] * static_cast<std::uint64_t>(table.length(s));
  }
  return bits;
}

// Net room with the arithmetic backend given the measured CD2 length.
inline long long arith_ec(const SymbolModel& m, std::uint64_t cd2_bits,
                          ImageSize size) {
  const long long cd_prime =
      static_cast<long long>(2 * m.threshold + 2) * size.count_bits() +
      static_cast<long long>(cd2_bits);
  return 8 * static_cast<long long>(m.independent()) - 11 - size.length_bits() -
         cd_prime;
}

// Net room with the Huffman backend.
inline long long huffman_ec(const SymbolModel& m, const HuffmanTable& table,
                            ImageSize size) {
  long long cd_prime = 0;
  for (std::size_t s = 0; s < m.symbols(); ++s) {
    cd_prime += static_cast<long long>(m.counts[s] + 1) * table.length(s);
  }
  return 8 * (static_cast<long long>(m.independent()) - 1) -
         3 * (2 * m.threshold + 1) - size.length_bits() - cd_prime;
}

inline BitString arith_encode_errors(std::span<const std::int16_t> errors,
                                     const SymbolModel& m) {
  const FrequencyTable table(m.counts);
  RangeEncoder enc(table);
  for (int e : errors) enc.encode(symbol_of(e, m.threshold));
  return enc.finish();
}

// Encodes the error stream at a fixed threshold.
inline CodedStream encode_stream(std::span<const std::int16_t> errors,
                                 const Peh& peh, int threshold, ImageSize size,
                                 Backend backend) {
  CodedStream out;
  out.backend = backend;
  out.model = classify(peh, threshold);
  const SymbolModel& m = out.model;
  if (m.total() != errors.size()) {
    throw ParameterError("histogram does not match error stream");
  }
  if (backend == Backend::kArithmetic) {
    out.cd2 = arith_encode_errors(errors, m);
    append_uint(out.cd1, static_cast<std::uint64_t>(threshold), 8);
    for (auto c : m.counts) append_uint(out.cd1, c, size.count_bits());
    if (out.cd2.size() >= (std::uint64_t{1} << size.length_bits())) {
      throw CapacityError("compressed stream too long for its length field");
    }
    append_uint(out.cd1, out.cd2.size(), size.length_bits());
  } else {
    if (threshold > kMaxHuffmanThreshold) {
      throw ParameterError("Huffman threshold must be <= 127");
    }
    out.huffman = build_huffman(m.counts);
    append_uint(out.cd1, static_cast<std::uint64_t>(threshold), 8);
    for (std::size_t s = 0; s < m.symbols(); ++s) {
      append_uint(out.cd1, static_cast<std::uint64_t>(out.huffman.length(s) - 1), 3);
      out.huffman.encode(out.cd1, s);
    }
    out.cd2.reserve(huffman_cd2_bits(m, out.huffman));
    for (int e : errors) out.huffman.encode(out.cd2, symbol_of(e, threshold));
  }
  return out;
}

// Parsed CD1 + decoded CD2.
struct DecodedStream {
  SymbolModel model;
  std::vector<std::uint32_t> symbols;
  std::uint64_t cd_bits = 0;  // CD1 + CD2
};

inline DecodedStream decode_stream(BitReader& in, std::size_t symbol_count,
                                   ImageSize size, Backend backend) {
  const std::size_t start = in.position();
  DecodedStream out;
  const int threshold = static_cast<int>(in.read_uint(8));
  if (threshold < kMinThreshold ||
      (backend == Backend::kHuffman && threshold > kMaxHuffmanThreshold)) {
    throw CorruptionError("threshold " + std::to_string(threshold) +
                          " out of range");
  }
  out.model.threshold = threshold;
  const std::size_t nsym = static_cast<std::size_t>(2 * threshold + 1);
  if (backend == Backend::kArithmetic) {
    out.model.counts.reserve(nsym);
    for (std::size_t s = 0; s < nsym; ++s) {
      out.model.counts.push_back(in.read_uint(size.count_bits()));
    }
    if (out.model.total() != symbol_count) {
      throw CorruptionError("symbol counts do not match the embedding pixels");
    }
    const std::uint64_t cd2_bits = in.read_uint(size.length_bits());
    if (cd2_bits > in.remaining()) {
      throw CorruptionError("compressed stream overruns the carrier");
    }
    const auto cd2 = in.read_span(static_cast<std::size_t>(cd2_bits));
    out.symbols = arith_decode(cd2, out.model.counts, symbol_count);
  } else {
    std::vector<int> lengths;
    std::vector<std::uint32_t> codes;
    for (std::size_t s = 0; s < nsym; ++s) {
      const int l = static_cast<int>(in.read_uint(3)) + 1;
      lengths.push_back(l);
      codes.push_back(static_cast<std::uint32_t>(in.read_uint(l)));
    }
    HuffmanTable table(std::move(lengths), std::move(codes));
    if (!table.prefix_free()) throw CorruptionError("Huffman table is not prefix-free");
    const HuffmanDecoder dec(table);
    out.symbols.reserve(symbol_count);
    for (std::size_t i = 0; i < symbol_count; ++i) {
      out.symbols.push_back(static_cast<std::uint32_t>(dec.decode(in)));
    }
    out.model.counts.assign(nsym, 0);
  }
  std::vector<std::uint64_t> seen(nsym, 0);
  for (auto s : out.symbols) ++seen[s];
  if (backend == Backend::kArithmetic && seen != out.model.counts) {
    throw StreamError("decoded symbols disagree with the model counts");
  }
  out.model.counts = std::move(seen);
  out.cd_bits = in.position() - start;
  return out;
}

// EC for one threshold; nullopt when the threshold is not admissible.
inline std::optional<long long> ec(std::span<const std::int16_t> errors,
                                   const Peh& peh, int threshold, ImageSize size,
                                   Backend backend) {
  check_threshold(threshold);
  const SymbolModel m = classify(peh, threshold);
  if (backend == Backend::kArithmetic) {
    return arith_ec(m, arith_encode_errors(errors, m).size(), size);
  }
  if (threshold > kMaxHuffmanThreshold) return std::nullopt;
  return huffman_ec(m, build_huffman(m.counts), size);
}

enum class ScanMode {
  kExact,   // encode at every threshold
  kPruned,  // encode only thresholds whose entropy estimate is near the best
};

struct ThresholdChoice {
  int threshold = 0;
  long long ec = std::numeric_limits<long long>::min();
  CodedStream stream;
};

namespace detail {

inline double entropy_bits(const SymbolModel& m) {
  const double total = static_cast<double>(m.total());
  double bits = 0;
  for (auto c : m.counts) {
    if (c) bits -= static_cast<double>(c) * std::log2(static_cast<double>(c) / total);
  }
  return bits;
}

}  // namespace detail

// Exhaustive argmax of EC over T in [1, 255]; ties go to the smallest T.
// Throws CapacityError when no threshold leaves positive room.
inline ThresholdChoice optimize_threshold(std::span<const std::int16_t> errors,
                                          const Peh& peh, ImageSize size,
                                          Backend backend,
                                          ScanMode mode = ScanMode::kExact) {
  const int max_t =
      backend == Backend::kHuffman ? kMaxHuffmanThreshold : kMaxThreshold;
  int best_t = 0;
  long long best = std::numeric_limits<long long>::min();

  std::vector<int> candidates;
  if (mode == ScanMode::kPruned && backend == Backend::kArithmetic) {
    std::vector<double> estimate(static_cast<std::size_t>(max_t) + 1);
    double top = -std::numeric_limits<double>::infinity();
    for (int t = 1; t <= max_t; ++t) {
      const SymbolModel m = classify(peh, t);
      estimate[static_cast<std::size_t>(t)] =
          static_cast<double>(arith_ec(m, 0, size)) - detail::entropy_bits(m);
      top = std::max(top, estimate[static_cast<std::size_t>(t)]);
    }
    for (int t = 1; t <= max_t; ++t) {
      if (estimate[static_cast<std::size_t>(t)] >= top - 64 - 0.001 * std::abs(top)) {
        candidates.push_back(t);
      }
    }
  } else {
    for (int t = 1; t <= max_t; ++t) candidates.push_back(t);
  }

  for (int t : candidates) {
    const auto v = ec(errors, peh, t, size, backend);
    if (v && *v > best) {
      best = *v;
      best_t = t;
    }
  }
  if (best_t == 0 || best <= 0) {
    throw CapacityError("no room: best net capacity is " +
                        (best_t == 0 ? std::string("undefined") : std::to_string(best)) +
                        " bits");
  }
  ThresholdChoice out;
  out.threshold = best_t;
  out.ec = best;
  out.stream = encode_stream(errors, peh, best_t, size, backend);
  return out;
}

}  // namespace rdhei
