#pragma once
#include <pstream/interferometer.hpp>
#include <pstream/source.hpp>
#include <pstream/units.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace pstream {

/// SPCM parameters. Amplitude is carried as metadata only.
struct DetectorConfig {
  double dead_time = 22e-9;        ///< s, non-paralyzable
  double dark_rate = 27.0;         ///< counts/s
  double pulse_duration = 10e-9;   ///< s
  double pulse_amplitude = 4.0;    ///< V
  double resolving_time = 350e-12; ///< s, timestamp grid
  double efficiency = 1.0;

  void validate() const;
};

/// A -> D1, B -> D2.
enum class Channel : std::uint8_t { A, B };

struct Pulse {
  Picoseconds start = 0;
  Picoseconds duration = 0;

  Picoseconds end() const { return start + duration; }
};

/// Electrical output of one detector over one bin.
struct PulseTrain {
  Channel channel = Channel::A;
  std::vector<Pulse> pulses;
  Picoseconds bin_length = 0;

  std::size_t size() const { return pulses.size(); }

  /// Throws ContractError unless starts are strictly increasing, pulses are
  /// disjoint and inside [0, bin_length), and consecutive starts are at least
  /// `min_gap` apart.
  void check(Picoseconds min_gap = 0) const;
};

/// Homogeneous Poisson process on [0, duration), exponential gaps.
std::vector<Picoseconds> generate_dark_events(double rate, double duration, std::uint64_t seed);

/// Non-paralyzable dead time: keep an event iff it is at least `dead_time`
/// after the last kept one. Input must be sorted (ties allowed).
std::vector<Picoseconds> dead_time_filter(std::span<const Picoseconds> events,
                                          Picoseconds dead_time);

PulseTrain shape_pulses(std::span<const Picoseconds> events, const DetectorConfig &cfg,
                        Channel channel = Channel::A, Picoseconds bin_length = 0);

struct DetectorPair {
  DetectorConfig d1;
  DetectorConfig d2;
};

struct DetectedBin {
  PulseTrain d1;
  PulseTrain d2;
};

/// Runs one bin of the source through BS2 and both detectors.
///
/// Occupied slots get distinct uniformly drawn positions inside the bin; the
/// slot start is the arrival time. Single photons go to D1 with probability
/// `optics.d1_probability()`; pair and higher slots send two photons, each
/// routed independently, at the same instant. Timestamps are floored to the
/// resolving-time grid, dark events are merged, then the dead-time filter and
/// pulse shaping run per channel.
DetectedBin detect_bin(const PhotonBatch &batch, const OpticalState &optics,
                       const DetectorPair &detectors, Picoseconds slot_width, std::uint64_t seed);

/// Both detectors share `cfg`; slot width equals its dead time.
DetectedBin detect_bin(const PhotonBatch &batch, const OpticalState &optics,
                       const DetectorConfig &cfg, std::uint64_t seed);

} // namespace pstream
