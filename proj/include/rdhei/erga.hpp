#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rdhei/bits.hpp"
#include "rdhei/block_grid.hpp"
#include "rdhei/coder.hpp"
#include "rdhei/error.hpp"
#include "rdhei/image.hpp"
#include "rdhei/predictor.hpp"

namespace rdhei {

// Linear bit positions over the embedding pixels: all plane-0 bits in raster
// order, then plane 1, ..., plane 7. Reference and pass-through pixels are
// never addressed.
class BitCursor {
 public:
  BitCursor(const BlockGrid& grid, const ReferencePlan& plan) {
    const int cols = grid.image_cols();
    std::vector<std::uint8_t> is_ref(static_cast<std::size_t>(grid.image_rows()) * cols, 0);
    for (int b = 0; b < grid.block_count(); ++b) {
      const GridPos p = grid.position(b);
      const InBlockPos ref = plan.refs[static_cast<std::size_t>(b)];
      is_ref[static_cast<std::size_t>(grid.origin_row(p) + ref.row) * cols +
             static_cast<std::size_t>(grid.origin_col(p) + ref.col)] = 1;
    }
    for (int r = 0; r < grid.covered_rows(); ++r) {
      for (int c = 0; c < grid.covered_cols(); ++c) {
        const std::size_t i = static_cast<std::size_t>(r) * cols + c;
        if (!is_ref[i]) pixels_.push_back(static_cast<std::uint32_t>(i));
      }
    }
  }

  std::size_t embedding_pixels() const noexcept { return pixels_.size(); }
  std::size_t capacity() const noexcept { return 8 * pixels_.size(); }

  int get(const GrayImage& image, std::size_t pos) const noexcept {
    const auto plane = static_cast<int>(pos / pixels_.size());
    return bit(image[pixels_[pos % pixels_.size()]], plane);
  }

  void set(GrayImage& image, std::size_t pos, int b) const noexcept {
    const auto plane = static_cast<int>(pos / pixels_.size());
    auto& px = image[pixels_[pos % pixels_.size()]];
    px = set_bit(px, plane, b);
  }

  BitString read(const GrayImage& image, std::size_t pos, std::size_t n) const {
    check_range(pos, n);
    BitString out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(get(image, pos + i));
    return out;
  }

  void write(GrayImage& image, std::size_t pos,
             std::span<const std::uint8_t> bits) const {
    check_range(pos, bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) set(image, pos + i, bits[i]);
  }

  std::uint64_t read_uint(const GrayImage& image, std::size_t pos, int width) const {
    check_range(pos, static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i) {
      v = (v << 1) | static_cast<std::uint64_t>(get(image, pos + static_cast<std::size_t>(i)));
    }
    return v;
  }

 private:
  void check_range(std::size_t pos, std::size_t n) const {
    if (pos > capacity() || n > capacity() - pos) {
      throw CapacityError("bit range [" + std::to_string(pos) + ", " +
                          std::to_string(pos + n) + ") exceeds carrier capacity " +
                          std::to_string(capacity()));
    }
  }

  std::vector<std::uint32_t> pixels_;
};

struct ErgaParams {
  bool whole_image = true;
  BlockShape block{};  // ignored in whole-image mode
  std::uint64_t seed = kDefaultReferenceSeed;
  Backend backend = Backend::kArithmetic;
  ScanMode scan = ScanMode::kExact;

  // One block spanning the image; reference at its top-left pixel.
  static ErgaParams whole(Backend backend) {
    ErgaParams p;
    p.whole_image = true;
    p.backend = backend;
    return p;
  }

  static ErgaParams blocks(int n1, int n2, std::uint64_t seed, Backend backend) {
    ErgaParams p;
    p.whole_image = false;
    p.block = {n1, n2};
    p.seed = seed;
    p.backend = backend;
    return p;
  }
};

// Grid, references and bit positions shared by every party.
class CarrierGeometry {
 public:
  CarrierGeometry(int rows, int cols, const ErgaParams& params)
      : size_{rows, cols},
        grid_(make_grid(rows, cols, params)),
        plan_(params.whole_image ? fixed_references(grid_, {0, 0})
                                 : select_references(params.seed, grid_)),
        predictor_(grid_, plan_),
        cursor_(grid_, plan_) {}

  ImageSize size() const noexcept { return size_; }
  const BlockGrid& grid() const noexcept { return grid_; }
  const ReferencePlan& plan() const noexcept { return plan_; }
  const ImagePredictor& predictor() const noexcept { return predictor_; }
  const BitCursor& cursor() const noexcept { return cursor_; }
  int length_bits() const noexcept { return size_.length_bits(); }

  // Reads L and checks that the described data fits the carrier.
  std::uint64_t read_length(const GrayImage& carrier) const {
    const std::uint64_t len = cursor_.read_uint(carrier, 0, length_bits());
    if (len + static_cast<std::uint64_t>(length_bits()) > cursor_.capacity()) {
      throw CorruptionError("embedded length " + std::to_string(len) +
                            " exceeds carrier capacity");
    }
    return len;
  }

  void write_length(GrayImage& carrier, std::uint64_t len) const {
    BitString bits;
    append_uint(bits, len, length_bits());
    cursor_.write(carrier, 0, bits);
  }

 private:
  static BlockGrid make_grid(int rows, int cols, const ErgaParams& params) {
    if (rows < 2 || cols < 2) {
      throw ParameterError("image must be at least 2x2");
    }
    if (params.whole_image) return whole_image_grid(rows, cols);
    if (params.block.area() < 2) {
      throw ParameterError("blocks need at least two pixels");
    }
    return BlockGrid(rows, cols, params.block);
  }

  ImageSize size_;
  BlockGrid grid_;
  ReferencePlan plan_;
  ImagePredictor predictor_;
  BitCursor cursor_;
};

// Where things live in the linear bit stream of a carrier.
struct RoomLayout {
  int length_bits = 0;       // l(L)
  std::uint64_t data_bits = 0;  // L = l(CD) + l(AD)
  std::uint64_t room_begin = 0;
  std::uint64_t room_bits = 0;
  std::uint64_t total_bits = 0;  // 8 * embedding pixels
};

inline RoomLayout make_layout(const CarrierGeometry& geo, std::uint64_t data_bits) {
  RoomLayout out;
  out.length_bits = geo.length_bits();
  out.data_bits = data_bits;
  out.total_bits = geo.cursor().capacity();
  out.room_begin = static_cast<std::uint64_t>(out.length_bits) + data_bits;
  if (out.room_begin > out.total_bits) {
    throw CorruptionError("embedded data exceeds carrier capacity");
  }
  out.room_bits = out.total_bits - out.room_begin;
  return out;
}

struct VacatedImage {
  GrayImage carrier;
  RoomLayout layout;
  Backend backend = Backend::kArithmetic;
  ReferencePlan plan;
  int threshold = 0;
  long long ec = 0;  // predicted net room; equals layout.room_bits
  std::uint64_t cd1_bits = 0;
  std::uint64_t cd2_bits = 0;
  std::uint64_t ad_bits = 0;
};

// Runs prediction and entropy coding, then writes L and CD || AD into the
// lowest positions of the bit stream. Remaining positions keep their values.
inline VacatedImage vacate(const GrayImage& image, const ErgaParams& params) {
  const CarrierGeometry geo(image.rows(), image.cols(), params);
  const auto errors = geo.predictor().errors(image);
  const Peh peh = build_peh(std::span<const std::int16_t>(errors));
  ThresholdChoice choice =
      optimize_threshold(errors, peh, geo.size(), params.backend, params.scan);

  const CodedStream& cs = choice.stream;
  const auto values = geo.predictor().values(image);
  const std::uint32_t joint = static_cast<std::uint32_t>(2 * choice.threshold);
  BitString data;
  data.reserve(cs.total_bits());
  append_bits(data, cs.cd1);
  append_bits(data, cs.cd2);
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (symbol_of(errors[i], choice.threshold) == joint) append_uint(data, values[i], 8);
  }

  VacatedImage out;
  out.carrier = image;
  out.layout = make_layout(geo, data.size());
  geo.write_length(out.carrier, data.size());
  geo.cursor().write(out.carrier, static_cast<std::size_t>(out.layout.length_bits), data);
  out.backend = params.backend;
  out.plan = geo.plan();
  out.threshold = choice.threshold;
  out.ec = choice.ec;
  out.cd1_bits = cs.cd1.size();
  out.cd2_bits = cs.cd2.size();
  out.ad_bits = cs.ad_bits();
  if (static_cast<long long>(out.layout.room_bits) != out.ec) {
    throw Error("internal: measured room " + std::to_string(out.layout.room_bits) +
                " differs from predicted " + std::to_string(out.ec));
  }
  return out;
}

inline std::uint64_t capacity(const VacatedImage& v) noexcept {
  return v.layout.room_bits;
}

// Rebuilds the image that was passed to vacate(). The free room may hold
// anything.
inline GrayImage restore(const GrayImage& carrier, const ErgaParams& params) {
  const CarrierGeometry geo(carrier.rows(), carrier.cols(), params);
  const std::uint64_t len = geo.read_length(carrier);
  const BitString data = geo.cursor().read(
      carrier, static_cast<std::size_t>(geo.length_bits()), static_cast<std::size_t>(len));
  BitReader in(data);
  const std::size_t count = geo.predictor().embedding_pixel_count();
  const DecodedStream ds = decode_stream(in, count, geo.size(), params.backend);
  const std::uint64_t joint_count = ds.model.joint();
  if (in.remaining() != 8 * joint_count) {
    throw CorruptionError("auxiliary data length does not match the joint pixels");
  }

  GrayImage out = carrier;
  std::uint8_t* px = out.pixels().data();
  const int threshold = ds.model.threshold;
  const auto joint = static_cast<std::uint32_t>(2 * threshold);
  std::size_t k = 0;
  for (int b = 0; b < geo.grid().block_count(); ++b) {
    std::uint8_t* base = px + geo.predictor().block_origin(b);
    for (const auto& step : geo.predictor().steps_for(b)) {
      const std::uint32_t sym = ds.symbols[k++];
      int v;
      if (sym == joint) {
        v = static_cast<int>(in.read_uint(8));
      } else {
        v = static_cast<int>(sym) - threshold + predict_value(step, base);
      }
      if (v < 0 || v > 255) throw CorruptionError("recovered pixel out of range");
      base[step.target] = static_cast<std::uint8_t>(v);
    }
  }
  return out;
}

}  // namespace rdhei
