#pragma once

#include <array>
#include <cstdint>

// Counter-based random numbers (Philox 4x32-10, Salmon et al. SC'11).
// Every draw in the toolkit is a pure function of (key, counter), so
// ensembles can be evaluated in any order, on any number of threads,
// and still produce identical results.

namespace orw::rng {

namespace detail {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void philox_round(std::array<std::uint32_t, 4>& ctr,
                         const std::array<std::uint32_t, 2>& key) {
  const std::uint64_t p0 = std::uint64_t{kPhiloxM0} * ctr[0];
  const std::uint64_t p1 = std::uint64_t{kPhiloxM1} * ctr[2];
  ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
         static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
         static_cast<std::uint32_t>(p0)};
}

}  // namespace detail

inline std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                               std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round != 0) {
      key[0] += detail::kWeyl0;
      key[1] += detail::kWeyl1;
    }
    detail::philox_round(ctr, key);
  }
  return ctr;
}

/// 64-bit keyed PRF of a 128-bit counter (c0, c1).
inline std::uint64_t prf64(std::uint64_t key, std::uint64_t c0, std::uint64_t c1 = 0) {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(c0), static_cast<std::uint32_t>(c0 >> 32),
      static_cast<std::uint32_t>(c1), static_cast<std::uint32_t>(c1 >> 32)};
  const std::array<std::uint32_t, 2> k = {static_cast<std::uint32_t>(key),
                                          static_cast<std::uint32_t>(key >> 32)};
  const auto out = philox4x32(ctr, k);
  return (std::uint64_t{out[1]} << 32) | out[0];
}

// Fixed counter-word tags keeping independent streams (environment seeds,
// per-level orientations, per-trajectory walk keys) out of each other's way.
inline constexpr std::uint64_t kDomainEnvironment = 0x0e5f'0001;
inline constexpr std::uint64_t kDomainWalk = 0x0e5f'0002;
inline constexpr std::uint64_t kDomainLevel = 0x0e5f'0003;

/// Uniform draw in {0,1,2} (multiply-shift; bias < 2^-62, far below any
/// statistical resolution used here).
inline std::uint32_t uniform3(std::uint64_t bits) {
  return static_cast<std::uint32_t>((static_cast<unsigned __int128>(bits) * 3) >> 64);
}

/// Uniform draw in {0,1,2,3}.
inline std::uint32_t uniform4(std::uint64_t bits) {
  return static_cast<std::uint32_t>(bits >> 62);
}

/// Uniform double in [0,1) with 53 random bits.
inline double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

}  // namespace orw::rng
