#pragma once
#include <pstream/detection.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace pstream {

/// Coincidence counting module (FPGA AND gate plus counters).
struct CcmConfig {
  double overlap_threshold = 5e-9; ///< s, minimum overlap counted as coincident
  double delay_tau = 0.0;          ///< s, added to channel B start times
  double accumulation_bin = 1.0;   ///< s
  double step = 0.1;               ///< s, counter readout period

  void validate(double pulse_duration) const;
  /// Number of steps that tile one accumulation bin; ConfigError if they don't.
  std::uint64_t steps_per_bin() const;
};

struct Match {
  std::size_t a;
  std::size_t b;

  bool operator==(const Match &) const = default;
};

struct CoincidenceResult {
  std::uint64_t count = 0;
  std::vector<Match> matches;
};

/// Greedy one-to-one overlap matching. A-pulses are visited in time order and
/// each takes the earliest unmatched B-pulse (shifted by delay_tau) whose
/// overlap with it is at least overlap_threshold.
CoincidenceResult coincide(const PulseTrain &a, const PulseTrain &b, const CcmConfig &cfg);

/// Singles and coincidences of one counter step or one accumulated bin.
struct CountRecord {
  std::uint64_t bin_index = 0;
  std::uint64_t n_a = 0;
  std::uint64_t n_b = 0;
  std::uint64_t n_c = 0;
  bool partial = false; ///< bin closed before all its steps arrived

  bool operator==(const CountRecord &) const = default;
};

CountRecord count_step(const PulseTrain &a, const PulseTrain &b, const CcmConfig &cfg,
                       std::uint64_t step_index);

/// Sums consecutive steps into accumulation bins; a trailing incomplete bin
/// is emitted with `partial` set.
std::vector<CountRecord> accumulate(std::span<const CountRecord> steps, const CcmConfig &cfg);

} // namespace pstream
