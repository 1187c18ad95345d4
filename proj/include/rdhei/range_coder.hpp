#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "rdhei/bits.hpp"
#include "rdhei/error.hpp"

namespace rdhei {

// Static multi-symbol range coder.
//
// 32-bit low/range registers, byte-wise renormalization whenever the range
// drops below 2^24, carries propagated into the bytes already written.
// Interval bounds are range * cum / total computed in 64 bits, so the only
// coding loss is integer rounding. The terminal flush emits the fewest bytes
// (at most 4) that pin a value inside the final interval; the decoder reads
// zero bits past the end of the stream, so trailing zero bits are dropped.
class FrequencyTable {
 public:
  static constexpr std::uint64_t kMaxTotal = std::uint64_t{1} << 24;

  explicit FrequencyTable(std::span<const std::uint64_t> counts)
      : cum_(counts.size() + 1, 0) {
    for (std::size_t i = 0; i < counts.size(); ++i) cum_[i + 1] = cum_[i] + counts[i];
    if (total() == 0) throw ParameterError("frequency table is empty");
    if (total() > kMaxTotal) {
      throw ParameterError("frequency total exceeds 2^24 symbols");
    }
  }

  std::size_t symbols() const noexcept { return cum_.size() - 1; }
  std::uint64_t total() const noexcept { return cum_.back(); }
  std::uint64_t low(std::size_t s) const noexcept { return cum_[s]; }
  std::uint64_t freq(std::size_t s) const noexcept { return cum_[s + 1] - cum_[s]; }

  // Symbol whose cumulative interval contains `target`.
  std::size_t find(std::uint64_t target) const noexcept {
    auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
    return static_cast<std::size_t>(it - cum_.begin()) - 1;
  }

 private:
  std::vector<std::uint64_t> cum_;
};

class RangeEncoder {
 public:
  explicit RangeEncoder(const FrequencyTable& table) : table_(table) {}

  void encode(std::size_t symbol) {
    const std::uint64_t f = table_.freq(symbol);
    if (f == 0) throw Error("range coder: symbol has zero frequency");
    const std::uint64_t t = table_.total();
    const std::uint64_t lo = range_ * table_.low(symbol) / t;
    const std::uint64_t hi = range_ * (table_.low(symbol) + f) / t;
    low_ += lo;
    range_ = hi - lo;
    if (low_ >> 32) {
      propagate_carry();
      low_ &= 0xFFFFFFFFull;
    }
    while (range_ < kTop) {
      out_.push_back(static_cast<std::uint8_t>(low_ >> 24));
      low_ = (low_ << 8) & 0xFFFFFFFFull;
      range_ <<= 8;
    }
  }

  // Finishes the stream and returns it as bits.
  BitString finish() {
    // Pick the value in [low, low + range) with the most trailing zero bytes.
    for (int k = 0; k <= 4; ++k) {
      const int shift = 32 - 8 * k;
      const std::uint64_t unit = std::uint64_t{1} << shift;
      const std::uint64_t v = (low_ + unit - 1) / unit * unit;
      if (v < low_ + range_) {
        if (v >> 32) propagate_carry();
        for (int i = 0; i < k; ++i) {
          out_.push_back(static_cast<std::uint8_t>(v >> (24 - 8 * i)));
        }
        break;
      }
    }
    BitString bits = bytes_to_bits(out_);
    while (!bits.empty() && bits.back() == 0) bits.pop_back();
    return bits;
  }

 private:
  static constexpr std::uint64_t kTop = std::uint64_t{1} << 24;

  void propagate_carry() {
    for (auto it = out_.rbegin(); it != out_.rend(); ++it) {
      if (++*it != 0) return;
    }
    throw Error("range coder: carry out of stream");
  }

  const FrequencyTable& table_;
  std::uint64_t low_ = 0;
  std::uint64_t range_ = 0xFFFFFFFFull;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  RangeDecoder(const FrequencyTable& table, std::span<const std::uint8_t> bits)
      : table_(table), bytes_(bits_to_bytes(bits)) {
    for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | next_byte();
    if (code_ >= range_) throw StreamError("range decoder: invalid stream head");
  }

  std::size_t decode() {
    const std::uint64_t t = table_.total();
    const std::uint64_t target = ((code_ + 1) * t - 1) / range_;
    const std::size_t s = table_.find(target);
    if (s >= table_.symbols()) throw StreamError("range decoder: symbol out of range");
    const std::uint64_t lo = range_ * table_.low(s) / t;
    const std::uint64_t hi = range_ * (table_.low(s) + table_.freq(s)) / t;
    if (code_ < lo || code_ >= hi) {
      throw StreamError("range decoder: inconsistent stream");
    }
    code_ -= lo;
    range_ = hi - lo;
    while (range_ < kTop) {
      code_ = (code_ << 8) | next_byte();
      range_ <<= 8;
    }
    return s;
  }

  // Bytes consumed beyond the stream end (zero padding).
  std::size_t overrun() const noexcept {
    return pos_ > bytes_.size() ? pos_ - bytes_.size() : 0;
  }

 private:
  static constexpr std::uint64_t kTop = std::uint64_t{1} << 24;

  std::uint64_t next_byte() noexcept {
    const std::uint64_t b = pos_ < bytes_.size() ? bytes_[pos_] : 0;
    ++pos_;
    return b;
  }

  const FrequencyTable& table_;
  std::vector<std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  std::uint64_t code_ = 0;
  std::uint64_t range_ = 0xFFFFFFFFull;
};

inline BitString arith_encode(std::span<const std::uint32_t> symbols,
                              std::span<const std::uint64_t> counts) {
  const FrequencyTable table(counts);
  RangeEncoder enc(table);
  for (auto s : symbols) {
    if (s >= table.symbols()) throw ParameterError("symbol outside the model");
    enc.encode(s);
  }
  return enc.finish();
}

inline std::vector<std::uint32_t> arith_decode(std::span<const std::uint8_t> bits,
                                               std::span<const std::uint64_t> counts,
                                               std::size_t count) {
  const FrequencyTable table(counts);
  RangeDecoder dec(table, bits);
  std::vector<std::uint32_t> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    out.push_back(static_cast<std::uint32_t>(dec.decode()));
  }
  return out;
}

}  // namespace rdhei
