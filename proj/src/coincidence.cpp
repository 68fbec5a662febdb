#include <pstream/coincidence.hpp>
#include <pstream/errors.hpp>

#include <algorithm>
#include <cmath>

namespace pstream {

void CcmConfig::validate(double pulse_duration) const {
  if (!(overlap_threshold > 0) || overlap_threshold > pulse_duration)
    throw ConfigError("ccm.overlap_threshold must lie in (0, pulse_duration]");
  if (!std::isfinite(delay_tau))
    throw ConfigError("ccm.delay_tau must be finite");
  if (!(step > 0) || !(accumulation_bin > 0) || step > accumulation_bin)
    throw ConfigError("ccm.step must lie in (0, accumulation_bin]");
  steps_per_bin();
}

std::uint64_t CcmConfig::steps_per_bin() const {
  const double ratio = accumulation_bin / step;
  const double n = std::round(ratio);
  if (n < 1 || std::abs(ratio - n) > 1e-9 * n)
    throw ConfigError("ccm.step does not tile ccm.accumulation_bin");
  return static_cast<std::uint64_t>(n);
}

CoincidenceResult coincide(const PulseTrain &a, const PulseTrain &b, const CcmConfig &cfg) {
  a.check();
  b.check();
  const Picoseconds threshold = to_ps(cfg.overlap_threshold);
  const Picoseconds delay = to_ps(cfg.delay_tau);

  CoincidenceResult result;
  std::vector<bool> taken(b.size(), false);
  std::size_t first = 0; // earliest B pulse that can still match a later A pulse
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Pulse &pa = a.pulses[i];
    // A starts only grow, so a B pulse ending too early is dead for good
    while (first < b.size() && b.pulses[first].end() + delay - pa.start < threshold)
      ++first;
    for (std::size_t j = first; j < b.size(); ++j) {
      const Picoseconds b_start = b.pulses[j].start + delay;
      if (pa.end() - b_start < threshold)
        break;
      if (taken[j])
        continue;
      const Picoseconds overlap =
          std::min(pa.end(), b.pulses[j].end() + delay) - std::max(pa.start, b_start);
      if (overlap >= threshold) {
        taken[j] = true;
        result.matches.push_back({i, j});
        break;
      }
    }
  }
  result.count = result.matches.size();
  return result;
}

CountRecord count_step(const PulseTrain &a, const PulseTrain &b, const CcmConfig &cfg,
                       std::uint64_t step_index) {
  CountRecord r;
  r.bin_index = step_index;
  r.n_a = a.size();
  r.n_b = b.size();
  r.n_c = coincide(a, b, cfg).count;
  return r;
}

std::vector<CountRecord> accumulate(std::span<const CountRecord> steps, const CcmConfig &cfg) {
  const std::uint64_t per_bin = cfg.steps_per_bin();
  std::vector<CountRecord> bins;
  for (std::size_t start = 0; start < steps.size(); start += per_bin) {
    CountRecord bin;
    bin.bin_index = bins.size();
    const std::size_t stop = std::min<std::size_t>(steps.size(), start + per_bin);
    for (std::size_t s = start; s < stop; ++s) {
      bin.n_a += steps[s].n_a;
      bin.n_b += steps[s].n_b;
      bin.n_c += steps[s].n_c;
    }
    bin.partial = (stop - start) < per_bin;
    bins.push_back(bin);
  }
  return bins;
}

} // namespace pstream
