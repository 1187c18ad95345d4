#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rdhei/arnold.hpp"
#include "rdhei/bits.hpp"
#include "rdhei/block_grid.hpp"
#include "rdhei/erga.hpp"
#include "rdhei/error.hpp"
#include "rdhei/image.hpp"
#include "rdhei/keystream.hpp"
#include "rdhei/modulation.hpp"

namespace rdhei {

// Owner, hider and receiver operations for the two protocols:
//   VRBE  room vacated by the owner on the plain image, then stream-ciphered
//   VRAE  image encrypted by block modulation + permutation, room vacated by
//         the hider on the ciphertext
// Payload length is out of band; extract must be told |S|.

enum class Scheme { kVrbe, kVrae };

inline std::string to_string(Scheme s) { return s == Scheme::kVrbe ? "vrbe" : "vrae"; }

struct KeyBundle {
  Key e1;  // VRBE image cipher
  Key e2;  // VRBE length cipher
  Key h;   // payload cipher (both schemes)
  Key m;   // VRAE modulation
  Key p;   // VRAE permutation

  // Reproducible bundle for tests and benchmarks. Not for real use.
  static KeyBundle from_seed(std::uint64_t seed) {
    return {Key::from_seed(seed), Key::from_seed(seed + 1), Key::from_seed(seed + 2),
            Key::from_seed(seed + 3), Key::from_seed(seed + 4)};
  }
};

// The carrier free room, as seen by whoever can read L.
struct RoomInfo {
  RoomLayout layout;
  std::uint64_t capacity() const noexcept { return layout.room_bits; }
};

namespace detail {

inline void check_payload_fits(std::uint64_t payload_bits, const RoomLayout& layout) {
  if (payload_bits > layout.room_bits) {
    throw CapacityError("payload of " + std::to_string(payload_bits) +
                        " bits exceeds capacity of " + std::to_string(layout.room_bits) +
                        " bits");
  }
}

inline void write_payload(GrayImage& carrier, const CarrierGeometry& geo,
                          const RoomLayout& layout, const BitString& payload,
                          const Key& kh) {
  check_payload_fits(payload.size(), layout);
  geo.cursor().write(carrier, static_cast<std::size_t>(layout.room_begin),
                     xor_bits(payload, kh));
}

inline BitString read_payload(const GrayImage& carrier, const CarrierGeometry& geo,
                              const RoomLayout& layout, std::uint64_t payload_bits,
                              const Key& kh) {
  check_payload_fits(payload_bits, layout);
  return xor_bits(geo.cursor().read(carrier, static_cast<std::size_t>(layout.room_begin),
                                    static_cast<std::size_t>(payload_bits)),
                  kh);
}

// VRBE stores L XOR K_E2 at the head of the bit stream.
inline BitString vrbe_length_field(const GrayImage& carrier, const CarrierGeometry& geo,
                                   const Key& ke2) {
  return xor_bits(
      geo.cursor().read(carrier, 0, static_cast<std::size_t>(geo.length_bits())), ke2);
}

inline std::uint64_t parse_length(const BitString& bits) {
  BitReader in(bits);
  return in.read_uint(static_cast<int>(bits.size()));
}

}  // namespace detail

// ---- VRBE -----------------------------------------------------------------

inline CarrierGeometry vrbe_geometry(const GrayImage& image) {
  return CarrierGeometry(image.rows(), image.cols(), ErgaParams::whole(Backend::kArithmetic));
}

struct VrbePrepared {
  GrayImage image;  // Y_R
  int threshold = 0;
  long long ec = 0;  // predicted net room at the chosen threshold
  RoomLayout layout;
};

inline VrbePrepared vrbe_prepare(const GrayImage& plain, const Key& ke1, const Key& ke2,
                                 Backend backend, ScanMode scan = ScanMode::kExact) {
  ErgaParams params = ErgaParams::whole(backend);
  params.scan = scan;
  const VacatedImage v = vacate(plain, params);
  const CarrierGeometry geo = vrbe_geometry(plain);

  VrbePrepared out{xor_image(v.carrier, ke1), v.threshold, v.ec, v.layout};
  BitString length;
  append_uint(length, v.layout.data_bits, v.layout.length_bits);
  geo.cursor().write(out.image, 0, xor_bits(length, ke2));
  return out;
}

// Room of a prepared or marked VRBE image. Needs K_E2 only.
inline RoomInfo vrbe_room(const GrayImage& carrier, const Key& ke2) {
  const CarrierGeometry geo = vrbe_geometry(carrier);
  const std::uint64_t len = detail::parse_length(detail::vrbe_length_field(carrier, geo, ke2));
  return {make_layout(geo, len)};
}

inline GrayImage vrbe_embed(const GrayImage& prepared, const BitString& payload,
                            const Key& ke2, const Key& kh) {
  const CarrierGeometry geo = vrbe_geometry(prepared);
  const RoomInfo room = vrbe_room(prepared, ke2);
  GrayImage out = prepared;
  detail::write_payload(out, geo, room.layout, payload, kh);
  return out;
}

inline BitString vrbe_extract(const GrayImage& marked, const Key& ke2, const Key& kh,
                              std::uint64_t payload_bits) {
  const CarrierGeometry geo = vrbe_geometry(marked);
  const RoomInfo room = vrbe_room(marked, ke2);
  return detail::read_payload(marked, geo, room.layout, payload_bits, kh);
}

// L is read through K_E2 before the image is deciphered, then put back in
// plain form so restore() sees the layout vacate() wrote.
inline GrayImage vrbe_recover(const GrayImage& marked, const Key& ke1, const Key& ke2,
                              Backend backend) {
  const CarrierGeometry geo = vrbe_geometry(marked);
  const BitString length = detail::vrbe_length_field(marked, geo, ke2);
  GrayImage carrier = xor_image(marked, ke1);
  geo.cursor().write(carrier, 0, length);
  return restore(carrier, ErgaParams::whole(backend));
}

// ---- VRAE -----------------------------------------------------------------

struct VraeConfig {
  BlockShape block{8, 8};
  Zeta zeta = Zeta(0.5);
  std::uint64_t seed = kDefaultReferenceSeed;
  Backend backend = Backend::kArithmetic;
  ScanMode scan = ScanMode::kExact;

  ErgaParams erga() const {
    ErgaParams p = ErgaParams::blocks(block.rows, block.cols, seed, backend);
    p.scan = scan;
    return p;
  }
};

struct VraeEncrypted {
  GrayImage image;                   // Y
  std::vector<std::uint8_t> shifts;  // R', snake order
  ArnoldParams arnold;
};

inline VraeEncrypted vrae_encrypt(const GrayImage& plain, const Key& km, const Key& kp,
                                  BlockShape block, const Zeta& zeta) {
  const BlockGrid grid = partition(plain, block.rows, block.cols);
  ModulatedImage mod = modulate(plain, grid, km, zeta);
  const ArnoldParams ap = derive_arnold_params(kp, grid);
  return {permute_blocks(mod.image, grid, ap), std::move(mod.shifts), ap};
}

inline GrayImage vrae_decrypt(const GrayImage& encrypted, const Key& km, const Key& kp,
                              BlockShape block, const Zeta& zeta) {
  const BlockGrid grid = partition(encrypted, block.rows, block.cols);
  const ArnoldParams ap = derive_arnold_params(kp, grid);
  return demodulate(unpermute_blocks(encrypted, grid, ap), grid, km, zeta);
}

struct VraeMarked {
  GrayImage image;  // room vacated, then Z once the payload is written
  int threshold = 0;
  long long ec = 0;
  RoomLayout layout;
};

inline VraeMarked vrae_vacate(const GrayImage& encrypted, const VraeConfig& cfg) {
  VacatedImage v = vacate(encrypted, cfg.erga());
  return {std::move(v.carrier), v.threshold, v.ec, v.layout};
}

// Writes S XOR K_H at the head of the room.
inline GrayImage vrae_fill(const VraeMarked& vacated, const BitString& payload,
                           const Key& kh, const VraeConfig& cfg) {
  const GrayImage& y = vacated.image;
  const CarrierGeometry geo(y.rows(), y.cols(), cfg.erga());
  GrayImage out = y;
  detail::write_payload(out, geo, vacated.layout, payload, kh);
  return out;
}

inline VraeMarked vrae_embed(const GrayImage& encrypted, const BitString& payload,
                             const Key& kh, const VraeConfig& cfg) {
  VraeMarked out = vrae_vacate(encrypted, cfg);
  out.image = vrae_fill(out, payload, kh, cfg);
  return out;
}

// L is stored in the clear, so the room is public given the grid and seed.
inline RoomInfo vrae_room(const GrayImage& marked, const VraeConfig& cfg) {
  const CarrierGeometry geo(marked.rows(), marked.cols(), cfg.erga());
  return {make_layout(geo, geo.read_length(marked))};
}

inline BitString vrae_extract(const GrayImage& marked, const Key& kh, const VraeConfig& cfg,
                              std::uint64_t payload_bits) {
  const CarrierGeometry geo(marked.rows(), marked.cols(), cfg.erga());
  const RoomInfo room = vrae_room(marked, cfg);
  return detail::read_payload(marked, geo, room.layout, payload_bits, kh);
}

// restore() gives back Y; the owner keys then undo permutation and
// modulation.
inline GrayImage vrae_restore_encrypted(const GrayImage& marked, const VraeConfig& cfg) {
  return restore(marked, cfg.erga());
}

inline GrayImage vrae_recover(const GrayImage& marked, const Key& km, const Key& kp,
                              const VraeConfig& cfg) {
  return vrae_decrypt(vrae_restore_encrypted(marked, cfg), km, kp, cfg.block, cfg.zeta);
}

}  // namespace rdhei
