#include <pstream/errors.hpp>
#include <pstream/rng.hpp>
#include <pstream/scan.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace pstream {

double scan_voltage(const ExperimentConfig &cfg, std::uint64_t i) {
  const PztConfig &pzt = cfg.optics.pzt;
  const double u = static_cast<double>(i) / static_cast<double>(cfg.scan.n_points - 1);
  double v = pzt.voltage_min + u * (pzt.voltage_max - pzt.voltage_min);
  if (cfg.scan.jitter_volts > 0) {
    // two slow sinusoids with seeded phases, pinned to zero at both ends
    const std::uint64_t s = derive_seed(cfg.scan.seed, 0x6a69747465ULL);
    const double ph1 = 2.0 * std::numbers::pi * static_cast<double>(s & 0xffff) / 65536.0;
    const double ph2 = 2.0 * std::numbers::pi * static_cast<double>((s >> 16) & 0xffff) / 65536.0;
    const double wobble = std::sin(3.0 * std::numbers::pi * u + ph1) * 0.7 +
                          std::sin(7.0 * std::numbers::pi * u + ph2) * 0.3;
    v += cfg.scan.jitter_volts * std::sin(std::numbers::pi * u) * wobble;
  }
  return std::clamp(v, pzt.voltage_min, pzt.voltage_max);
}

OpticalState scan_optics(const ExperimentConfig &cfg, std::uint64_t i) {
  OpticalState s;
  s.intrinsic_visibility = cfg.optics.intrinsic_visibility;
  s.effective_coherence_length = cfg.optics.effective_coherence_length;
  s.laser_coherence_length = cfg.optics.laser_coherence_length;
  s.asymmetric_walkoff = cfg.scan.asymmetric_walkoff;
  s.scan_position = voltage_to_displacement(scan_voltage(cfg, i), cfg.optics.pzt);
  s.phase = pzt_phase(s.scan_position, cfg.source.wavelength);
  return s;
}

ScanPoint simulate_point(const ExperimentConfig &cfg, std::uint64_t i) {
  const OpticalState optics = scan_optics(cfg, i);
  const double mean = cfg.source.mean_photon();
  const Picoseconds slot = to_ps(cfg.source.dead_time);
  const Picoseconds step = to_ps(cfg.ccm.step);
  const auto slots_per_step = static_cast<std::uint64_t>(step / slot);
  const auto steps = static_cast<std::uint64_t>(std::llround(cfg.scan.seconds_per_point / cfg.ccm.step));
  const DetectorPair detectors{cfg.detectors[0], cfg.detectors[1]};
  const std::uint64_t point_seed = derive_seed(cfg.scan.seed, i);

  std::vector<CountRecord> step_counts;
  step_counts.reserve(steps);
  for (std::uint64_t s = 0; s < steps; ++s) {
    const PhotonBatch batch = sample_batch(mean, slots_per_step, derive_seed(point_seed, 2 * s), s);
    const DetectedBin bin = detect_bin(batch, optics, detectors, slot, derive_seed(point_seed, 2 * s + 1));
    step_counts.push_back(count_step(bin.d1, bin.d2, cfg.ccm, s));
  }

  ScanPoint p;
  p.point_index = i;
  p.voltage = scan_voltage(cfg, i);
  p.x = optics.scan_position;
  p.phase = optics.phase;
  p.envelope = optics.envelope_value();
  for (const CountRecord &bin : accumulate(step_counts, cfg.ccm)) {
    p.n_a += bin.n_a;
    p.n_b += bin.n_b;
    p.n_c += bin.n_c;
  }
  return p;
}

ScanResult run_scan(const ExperimentConfig &cfg, unsigned workers) {
  cfg.validate();
  ScanResult result;
  result.config = cfg;
  result.seed = cfg.scan.seed;
  const std::uint64_t n = cfg.scan.n_points;
  result.points.resize(n);

  std::vector<std::exception_ptr> failures(n);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t i = next++; i < n; i = next++) {
      try {
        result.points[i] = simulate_point(cfg, i);
      } catch (const Error &e) {
        failures[i] = std::make_exception_ptr(ScanPointError(i, e));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  workers = std::max(1u, workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(work);
  }
  for (const std::exception_ptr &f : failures) {
    if (f)
      std::rethrow_exception(f);
  }
  return result;
}

namespace {

template <typename Get>
FringeSeries make_series(std::span<const ScanPoint> points, const char *label, Get get) {
  FringeSeries s;
  s.label = label;
  s.positions.reserve(points.size());
  s.values.reserve(points.size());
  for (const ScanPoint &p : points) {
    s.positions.push_back(p.x);
    s.values.push_back(static_cast<double>(get(p)));
  }
  return s;
}

} // namespace

FringeSeries series_a(std::span<const ScanPoint> points) {
  return make_series(points, "N_A", [](const ScanPoint &p) { return p.n_a; });
}

FringeSeries series_b(std::span<const ScanPoint> points) {
  return make_series(points, "N_B", [](const ScanPoint &p) { return p.n_b; });
}

FringeSeries series_c(std::span<const ScanPoint> points) {
  return make_series(points, "N_c", [](const ScanPoint &p) { return p.n_c; });
}

CorrelationReport analyze_scan(std::span<const ScanPoint> points, const ReportOptions &options) {
  return correlation_report(series_a(points), series_b(points), series_c(points), options);
}

std::vector<double> symmetric_grid(double half_range, std::size_t points) {
  if (points < 3 || points % 2 == 0)
    throw DomainError("symmetric_grid: need an odd number of points >= 3");
  if (!(half_range > 0))
    throw DomainError("symmetric_grid: half_range must be > 0");
  std::vector<double> grid(points);
  const auto half = static_cast<std::int64_t>(points / 2);
  for (std::int64_t k = -half; k <= half; ++k)
    grid[static_cast<std::size_t>(k + half)] = half_range * static_cast<double>(k) / static_cast<double>(half);
  return grid;
}

Fig4Curves analytic_fig4(double V, double l_eff, std::span<const double> x_grid, double wavelength) {
  Fig4Curves c;
  const std::size_t n = x_grid.size();
  c.x.assign(x_grid.begin(), x_grid.end());
  c.phase.resize(n);
  c.envelope.resize(n);
  c.intensity_a.resize(n);
  c.intensity_b.resize(n);
  c.coincidence.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.phase[i] = pzt_phase(c.x[i], wavelength);
    c.envelope[i] = envelope(c.x[i], l_eff);
    const SinglesFringe f = singles_fringe(c.phase[i], c.envelope[i], V);
    c.intensity_a[i] = f.a;
    c.intensity_b[i] = f.b;
    c.coincidence[i] = f.a * f.b;
  }
  const double peak = n ? *std::max_element(c.coincidence.begin(), c.coincidence.end()) : 0.0;
  c.coincidence_norm.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    c.coincidence_norm[i] = peak > 0 ? c.coincidence[i] / peak : 0.0;

  const FringeSeries a{c.x, c.intensity_a, "I_A"};
  const FringeSeries b{c.x, c.intensity_b, "I_B"};
  const FringeSeries coinc{c.x, c.coincidence, "coincidence"};
  c.g2 = averaged_g2(a, b, coinc, c.envelope).values;
  return c;
}

} // namespace pstream
