#include <pstream/detection.hpp>
#include <pstream/errors.hpp>
#include <pstream/rng.hpp>

#include <algorithm>
#include <bit>
#include <random>
#include <string>

namespace pstream {

void DetectorConfig::validate() const {
  if (!(dead_time > 0) || !(pulse_duration > 0) || !(resolving_time > 0))
    throw ConfigError("detector durations must be > 0");
  if (!(dark_rate >= 0))
    throw ConfigError("detector dark_rate must be >= 0");
  if (!(efficiency >= 0 && efficiency <= 1))
    throw ConfigError("detector efficiency must lie in [0, 1]");
}

void PulseTrain::check(Picoseconds min_gap) const {
  for (std::size_t i = 0; i < pulses.size(); ++i) {
    const Pulse &p = pulses[i];
    if (p.start < 0 || p.duration <= 0 || (bin_length > 0 && p.start >= bin_length))
      throw ContractError("pulse " + std::to_string(i) + " lies outside the bin");
    if (i == 0)
      continue;
    const Pulse &prev = pulses[i - 1];
    if (p.start <= prev.start)
      throw ContractError("pulse starts not strictly increasing at " + std::to_string(i));
    if (p.start < prev.end())
      throw ContractError("pulses " + std::to_string(i - 1) + " and " + std::to_string(i) +
                          " overlap within one channel");
    if (p.start - prev.start < min_gap)
      throw ContractError("pulse gap below dead time at " + std::to_string(i));
  }
}

std::vector<Picoseconds> generate_dark_events(double rate, double duration, std::uint64_t seed) {
  if (!(rate >= 0))
    throw DomainError("generate_dark_events: rate must be >= 0");
  if (!(duration > 0))
    throw DomainError("generate_dark_events: duration must be > 0");
  std::vector<Picoseconds> events;
  if (rate == 0)
    return events;
  Rng rng(seed);
  std::exponential_distribution<double> gap(rate);
  const Picoseconds end = to_ps(duration);
  double t = gap(rng);
  while (true) {
    const Picoseconds ps = to_ps(t);
    if (ps >= end)
      break;
    events.push_back(ps);
    t += gap(rng);
  }
  return events;
}

std::vector<Picoseconds> dead_time_filter(std::span<const Picoseconds> events,
                                          Picoseconds dead_time) {
  if (!std::is_sorted(events.begin(), events.end()))
    throw ContractError("dead_time_filter: events are not sorted");
  std::vector<Picoseconds> kept;
  kept.reserve(events.size());
  for (Picoseconds t : events) {
    if (kept.empty() || t - kept.back() >= dead_time)
      kept.push_back(t);
  }
  return kept;
}

PulseTrain shape_pulses(std::span<const Picoseconds> events, const DetectorConfig &cfg,
                        Channel channel, Picoseconds bin_length) {
  PulseTrain train;
  train.channel = channel;
  train.bin_length = bin_length;
  const Picoseconds width = to_ps(cfg.pulse_duration);
  train.pulses.reserve(events.size());
  for (Picoseconds t : events)
    train.pulses.push_back({t, width});
  train.check(to_ps(cfg.dead_time));
  return train;
}

namespace {

/// k distinct slot indices from [0, n), ascending.
std::vector<std::uint64_t> distinct_slots(std::uint64_t k, std::uint64_t n, Rng &rng) {
  std::vector<std::uint64_t> out;
  out.reserve(k);
  if (k == 0)
    return out;
  if (k * 4 > n) {
    // selection sampling, O(n)
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uint64_t needed = k;
    for (std::uint64_t i = 0; i < n && needed > 0; ++i) {
      if (u(rng) * static_cast<double>(n - i) < static_cast<double>(needed)) {
        out.push_back(i);
        --needed;
      }
    }
    return out;
  }
  // rejection into a bitmap, then an in-order scan
  std::vector<std::uint64_t> bits((n + 63) / 64, 0);
  std::uniform_int_distribution<std::uint64_t> pick(0, n - 1);
  for (std::uint64_t drawn = 0; drawn < k;) {
    const std::uint64_t i = pick(rng);
    std::uint64_t &word = bits[i / 64];
    const std::uint64_t mask = std::uint64_t{1} << (i % 64);
    if (!(word & mask)) {
      word |= mask;
      ++drawn;
    }
  }
  for (std::size_t w = 0; w < bits.size(); ++w) {
    for (std::uint64_t word = bits[w]; word != 0; word &= word - 1)
      out.push_back(w * 64 + static_cast<std::uint64_t>(std::countr_zero(word)));
  }
  return out;
}

Picoseconds floor_to_grid(Picoseconds t, Picoseconds grid) { return grid > 0 ? t / grid * grid : t; }

std::vector<Picoseconds> finish_channel(std::vector<Picoseconds> photons, const DetectorConfig &cfg,
                                        Picoseconds bin_length, std::uint64_t seed) {
  const Picoseconds grid = to_ps(cfg.resolving_time);
  for (Picoseconds &t : photons)
    t = floor_to_grid(t, grid);
  std::vector<Picoseconds> dark = generate_dark_events(cfg.dark_rate, to_seconds(bin_length), seed);
  for (Picoseconds &t : dark)
    t = floor_to_grid(t, grid);
  std::vector<Picoseconds> merged;
  merged.reserve(photons.size() + dark.size());
  std::merge(photons.begin(), photons.end(), dark.begin(), dark.end(), std::back_inserter(merged));
  return dead_time_filter(merged, to_ps(cfg.dead_time));
}

} // namespace

DetectedBin detect_bin(const PhotonBatch &batch, const OpticalState &optics,
                       const DetectorPair &detectors, Picoseconds slot_width, std::uint64_t seed) {
  detectors.d1.validate();
  detectors.d2.validate();
  if (slot_width <= 0)
    throw ConfigError("detect_bin: slot width must be > 0");
  if (batch.occupied_slots() > batch.slots_per_bin)
    throw ContractError("detect_bin: batch occupies more slots than it has");

  const double p1 = optics.d1_probability();
  const Picoseconds bin_length = static_cast<Picoseconds>(batch.slots_per_bin) * slot_width;

  Rng rng(derive_seed(seed, 0));
  const std::vector<std::uint64_t> slots =
      distinct_slots(batch.occupied_slots(), batch.slots_per_bin, rng);

  // photon number per occupied slot, in random order over the sorted slots
  std::vector<std::uint8_t> occupancy;
  occupancy.reserve(slots.size());
  occupancy.insert(occupancy.end(), batch.n_single_slots, 1);
  occupancy.insert(occupancy.end(), batch.n_pair_slots + batch.n_higher_slots, 2);
  std::shuffle(occupancy.begin(), occupancy.end(), rng);

  std::bernoulli_distribution to_d1(p1);
  std::bernoulli_distribution seen_d1(detectors.d1.efficiency);
  std::bernoulli_distribution seen_d2(detectors.d2.efficiency);

  std::vector<Picoseconds> hits1;
  std::vector<Picoseconds> hits2;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Picoseconds t = static_cast<Picoseconds>(slots[i]) * slot_width;
    for (std::uint8_t photon = 0; photon < occupancy[i]; ++photon) {
      if (to_d1(rng)) {
        if (seen_d1(rng))
          hits1.push_back(t);
      } else if (seen_d2(rng)) {
        hits2.push_back(t);
      }
    }
  }

  DetectedBin out;
  out.d1 = shape_pulses(finish_channel(std::move(hits1), detectors.d1, bin_length,
                                       derive_seed(seed, 1)),
                        detectors.d1, Channel::A, bin_length);
  out.d2 = shape_pulses(finish_channel(std::move(hits2), detectors.d2, bin_length,
                                       derive_seed(seed, 2)),
                        detectors.d2, Channel::B, bin_length);
  return out;
}

DetectedBin detect_bin(const PhotonBatch &batch, const OpticalState &optics,
                       const DetectorConfig &cfg, std::uint64_t seed) {
  return detect_bin(batch, optics, DetectorPair{cfg, cfg}, to_ps(cfg.dead_time), seed);
}

} // namespace pstream
