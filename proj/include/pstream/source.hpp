#pragma once
#include <cstdint>
#include <optional>

namespace pstream {

/// Attenuated He/Ne source.
struct SourceConfig {
  double input_power = 136e-6;       ///< W, before the ND filter stack
  double wavelength = 632.8e-9;      ///< m
  double od_total = 0.0;             ///< summed optical density of the stack
  double dead_time = 22e-9;          ///< s, slot width of the occupancy model
  std::optional<double> mean_photon_override; ///< sets <n> directly

  void validate() const;

  /// <n> per slot: the override if present, otherwise the detected flux
  /// (after attenuation) times the slot width.
  double mean_photon() const;
};

/// Occupancy classes of the slots inside one accumulation bin.
struct PhotonBatch {
  std::uint64_t bin_index = 0;
  std::uint64_t n_single_slots = 0;
  std::uint64_t n_pair_slots = 0;
  std::uint64_t n_higher_slots = 0;
  std::uint64_t slots_per_bin = 1;

  std::uint64_t occupied_slots() const { return n_single_slots + n_pair_slots + n_higher_slots; }
};

/// p_in * 10^-od.
double attenuated_power(double p_in, double od);

/// Photons per second carried by `power` at `wavelength`.
double photon_flux(double power, double wavelength);

/// Counts per dead-time slot: single_count / (accumulation / dead_time).
double mean_photon_number(double single_count, double accumulation, double dead_time);

double poisson_pmf(unsigned n, double mean);

/// P(X >= n), summed from the series so it stays accurate when tiny.
double poisson_tail(unsigned n, double mean);

/// P(2)/P(1) = mean/2.
double pair_fraction(double mean);

/// Draws single, pair and >=3 slot counts as independent Poisson variates with
/// means slots*P(1), slots*P(2), slots*P(>=3). Redraws in the (rare, small-bin
/// only) case where the three exceed the slot count.
PhotonBatch sample_batch(double mean, std::uint64_t slots_per_bin, std::uint64_t seed,
                         std::uint64_t bin_index = 0);

} // namespace pstream
