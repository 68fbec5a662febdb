#include <pstream/errors.hpp>
#include <pstream/rng.hpp>
#include <pstream/source.hpp>
#include <pstream/units.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace pstream {

void SourceConfig::validate() const {
  if (!(input_power >= 0))
    throw ConfigError("source.input_power must be >= 0");
  if (!(od_total >= 0))
    throw ConfigError("source.od_total must be >= 0");
  if (!(wavelength > 0))
    throw ConfigError("source.wavelength must be > 0");
  if (!(dead_time > 0))
    throw ConfigError("source.dead_time must be > 0");
  if (mean_photon_override && !(*mean_photon_override >= 0 && *mean_photon_override < 1))
    throw ConfigError("source.mean_photon_override must lie in [0, 1)");
}

double SourceConfig::mean_photon() const {
  validate();
  if (mean_photon_override)
    return *mean_photon_override;
  const double n = photon_flux(attenuated_power(input_power, od_total), wavelength) * dead_time;
  if (n >= 1)
    throw ConfigError("source: <n> = " + std::to_string(n) +
                      " per slot is outside the weak-source regime; increase od_total");
  return n;
}

double attenuated_power(double p_in, double od) {
  if (!(p_in >= 0) || !(od >= 0))
    throw DomainError("attenuated_power: power and optical density must be >= 0");
  return p_in * std::pow(10.0, -od);
}

double photon_flux(double power, double wavelength) {
  if (!(wavelength > 0))
    throw DomainError("photon_flux: wavelength must be > 0");
  if (!(power >= 0))
    throw DomainError("photon_flux: power must be >= 0");
  return power * wavelength / constants::planck_times_c;
}

double mean_photon_number(double single_count, double accumulation, double dead_time) {
  if (!(accumulation > 0) || !(dead_time > 0))
    throw DomainError("mean_photon_number: accumulation and dead time must be > 0");
  if (dead_time > accumulation)
    throw DomainError("mean_photon_number: dead time exceeds accumulation time");
  if (!(single_count >= 0))
    throw DomainError("mean_photon_number: negative count");
  return single_count / (accumulation / dead_time);
}

double poisson_pmf(unsigned n, double mean) {
  if (!(mean >= 0))
    throw DomainError("poisson_pmf: mean must be >= 0");
  if (mean == 0)
    return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(mean) - mean - std::lgamma(n + 1.0));
}

double poisson_tail(unsigned n, double mean) {
  if (!(mean >= 0))
    throw DomainError("poisson_tail: mean must be >= 0");
  if (n == 0)
    return 1.0;
  if (mean == 0)
    return 0.0;
  if (mean > 1) {
    double head = 0;
    for (unsigned k = 0; k < n; ++k)
      head += poisson_pmf(k, mean);
    return std::max(0.0, 1.0 - head);
  }
  // terms shrink at least geometrically once k > mean
  double term = poisson_pmf(n, mean);
  double sum = 0;
  for (unsigned k = n; term > 0 && term > sum * 1e-18; ++k) {
    sum += term;
    term *= mean / (k + 1);
  }
  return sum;
}

double pair_fraction(double mean) {
  if (!(mean >= 0))
    throw DomainError("pair_fraction: mean must be >= 0");
  return mean / 2.0;
}

PhotonBatch sample_batch(double mean, std::uint64_t slots_per_bin, std::uint64_t seed,
                         std::uint64_t bin_index) {
  if (!(mean >= 0))
    throw DomainError("sample_batch: mean must be >= 0");
  if (mean >= 1)
    throw ConfigError("sample_batch: <n> >= 1 violates the weak-source slot model");
  if (slots_per_bin == 0)
    throw ConfigError("sample_batch: slots_per_bin must be >= 1");

  PhotonBatch batch;
  batch.bin_index = bin_index;
  batch.slots_per_bin = slots_per_bin;
  if (mean == 0)
    return batch;

  const double slots = static_cast<double>(slots_per_bin);
  const double m1 = slots * poisson_pmf(1, mean);
  const double m2 = slots * poisson_pmf(2, mean);
  const double m3 = slots * poisson_tail(3, mean);

  Rng rng(seed);
  auto draw = [&rng](double m) -> std::uint64_t {
    if (m <= 0)
      return 0;
    std::poisson_distribution<std::uint64_t> d(m);
    return d(rng);
  };
  do {
    batch.n_single_slots = draw(m1);
    batch.n_pair_slots = draw(m2);
    batch.n_higher_slots = draw(m3);
  } while (batch.occupied_slots() > slots_per_bin);
  return batch;
}

} // namespace pstream
