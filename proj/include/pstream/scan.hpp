#pragma once
#include <pstream/analysis.hpp>
#include <pstream/config.hpp>
#include <pstream/errors.hpp>

#include <cstdint>
#include <span>
#include <vector>

namespace pstream {

struct ScanPoint {
  std::uint64_t point_index = 0;
  double voltage = 0;  ///< V
  double x = 0;        ///< m
  double phase = 0;    ///< rad
  double envelope = 1; ///< G(x)
  std::uint64_t n_a = 0;
  std::uint64_t n_b = 0;
  std::uint64_t n_c = 0;

  bool operator==(const ScanPoint &) const = default;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  ExperimentConfig config;
  std::uint64_t seed = 0;
};

/// Error raised inside one scan point; keeps the original category.
class ScanPointError : public Error {
public:
  ScanPointError(std::uint64_t point, const Error &cause)
      : Error(cause.category(), "scan point " + std::to_string(point) + ": " + cause.what()),
        point_(point) {}

  std::uint64_t point() const noexcept { return point_; }

private:
  std::uint64_t point_;
};

/// Voltage applied at scan point `i` (linear ramp plus optional wobble).
double scan_voltage(const ExperimentConfig &cfg, std::uint64_t i);

/// Optical state at scan point `i`.
OpticalState scan_optics(const ExperimentConfig &cfg, std::uint64_t i);

/// Simulates one scan point: every CCM step draws a batch, detects it and
/// counts it; the steps are accumulated into bins and the bins summed.
ScanPoint simulate_point(const ExperimentConfig &cfg, std::uint64_t i);

/// Full scan. Point i uses derive_seed(cfg.scan.seed, i), so the output does
/// not depend on `workers`.
ScanResult run_scan(const ExperimentConfig &cfg, unsigned workers = 1);

/// Series views of a scan, positioned by x.
FringeSeries series_a(std::span<const ScanPoint> points);
FringeSeries series_b(std::span<const ScanPoint> points);
FringeSeries series_c(std::span<const ScanPoint> points);

CorrelationReport analyze_scan(std::span<const ScanPoint> points, const ReportOptions &options);

/// Analytic counterpart of the walk-off scan.
struct Fig4Curves {
  std::vector<double> x;
  std::vector<double> phase;
  std::vector<double> envelope;
  std::vector<double> intensity_a;       ///< (a) D1 fringe under the envelope
  std::vector<double> intensity_b;       ///< (a) D2 fringe
  std::vector<double> coincidence;       ///< (b) product of the two (a) curves
  std::vector<double> coincidence_norm;  ///< (b) scaled to its maximum
  std::vector<double> g2;                ///< (c) averaged_g2 blend
};

Fig4Curves analytic_fig4(double V, double l_eff, std::span<const double> x_grid,
                         double wavelength = 632.8e-9);

/// Odd-sized symmetric grid on [-half_range, half_range] including 0.
std::vector<double> symmetric_grid(double half_range, std::size_t points);

} // namespace pstream
