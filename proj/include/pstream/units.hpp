#pragma once
#include <cmath>
#include <cstdint>

namespace pstream {

/// Event timestamps and durations inside a bin, integer picoseconds.
using Picoseconds = std::int64_t;

inline Picoseconds to_ps(double seconds) { return std::llround(seconds * 1e12); }
inline double to_seconds(Picoseconds t) { return static_cast<double>(t) * 1e-12; }

namespace constants {
inline constexpr double planck_times_c = 1.98645e-25; // J*m
inline constexpr double helium_neon_wavelength = 632.8e-9;
} // namespace constants

} // namespace pstream
