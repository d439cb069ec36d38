#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>

#include "dwym/state.hpp"

namespace dwym {

inline constexpr std::uint32_t kSnapshotVersion = 1;

struct SnapshotError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Binary layout, all little-endian:
///
///   "DWYM"  u32 version  u32 D  u32 N  u32 extent[D]  f64 spacing[D]  f64 q  f64 m
///   payload: phi, pi, a, p as (re, im) f64 pairs, site-major
///   u32 CRC-32 of the payload bytes
void snapshot_write(const GaugeFieldState& state, const std::filesystem::path& path);

/// Throws SnapshotError on "bad magic", version mismatch, truncation, checksum
/// failure, or "param mismatch" when `expected_n` is given and differs.
GaugeFieldState snapshot_read(const std::filesystem::path& path,
                              std::optional<int> expected_n = std::nullopt);

}  // namespace dwym
