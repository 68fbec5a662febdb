#pragma once
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pstream {

/// Counts or normalized intensities sampled along the scan.
struct FringeSeries {
  std::vector<double> positions; ///< m (or s for time-based scans), increasing
  std::vector<double> values;
  std::string label;

  std::size_t size() const { return values.size(); }
};

/// Closed position interval [lo, hi].
struct Window {
  double lo;
  double hi;
};

/// Default share of samples averaged for each robust extremum.
inline constexpr double kDefaultTrim = 0.05;

/// Fringe contrast above which the classical bound is exceeded.
inline constexpr double kClassicalVisibilityBound = 0.7071;
/// Two-photon correlation below which the fringe is flagged nonclassical.
inline constexpr double kClassicalG2Bound = 0.5;

struct Extrema {
  double min;
  double max;
};

/// Means of the lowest and highest max(1, round(trim * n)) samples in window.
Extrema robust_extrema(const FringeSeries &series, std::optional<Window> window = std::nullopt,
                       double trim = kDefaultTrim);

/// (max - min) / (max + min) with robust extrema.
double visibility(const FringeSeries &series, std::optional<Window> window = std::nullopt,
                  double trim = kDefaultTrim);

/// min / max of a coincidence fringe with robust extrema.
double g2_ratio(const FringeSeries &coinc, std::optional<Window> window = std::nullopt,
                double trim = kDefaultTrim);

/// (N_c / (N_A N_B)) * (T / delta_t).
double g2_rate(double n_a, double n_b, double n_c, double T, double delta_t);

/// Two-photon correlation with the decoherence baseline blended in.
///
/// The pi-shifted twin of the scan swaps the two singles fringes and leaves
/// the coincidences unchanged, so averaging both turns the denominator into
/// ((A + B) / 2)^2. The resulting coincidence ratio is normalized by its
/// maximum over the coherent centre (G >= half of max G) to give n_c, and
///   g2(x) = G(x) n_c(x) + (1 - G(x)) / 2.
FringeSeries averaged_g2(const FringeSeries &a, const FringeSeries &b, const FringeSeries &coinc,
                         std::span<const double> envelope);

/// n_bunched / (2 n_single_per_path).
double eta21(double n_bunched, double n_single_per_path);

/// Dominant period from a Hann-windowed periodogram (evaluated at the actual,
/// possibly non-uniform positions) refined by parabolic interpolation.
/// Searches periods between 8 samples and half the scan span.
double fringe_period(const FringeSeries &series);

struct GofResult {
  double chi_square = 0;
  int dof = 0;
  double p_value = 1;
  std::size_t cells = 0;
};

/// Pearson chi-square of a histogram (index = value, last index pools the
/// upper tail) against Poisson. Cells are merged from the low end until each
/// expects at least 5 counts. Without `mean` the sample mean is used and one
/// extra degree of freedom is spent.
GofResult poisson_gof(std::span<const std::uint64_t> histogram,
                      std::optional<double> mean = std::nullopt);

double chi_square_quantile(double probability, int dof);

struct CorrelationReport {
  double visibility_a = 0;
  double visibility_b = 0;
  double g2_ratio_min_over_max = 0;
  double g2_rate = 0;
  double eta21 = 0;
  double mean_photon = 0;
  double fringe_period = 0;             ///< singles, from channel A
  double fringe_period_coincidence = 0; ///< NaN when no significant peak
  bool visibility_a_above_classical = false;
  bool visibility_b_above_classical = false;
  bool g2_below_classical = false;
};

struct ReportOptions {
  std::optional<Window> window; ///< extrema and rates; whole scan if unset
  double seconds_per_point = 1.0;
  double dead_time = 22e-9;
  double delta_t = 10e-9; ///< coincidence resolution entering g2_rate
  double trim = kDefaultTrim;
};

CorrelationReport correlation_report(const FringeSeries &n_a, const FringeSeries &n_b,
                                     const FringeSeries &n_c, const ReportOptions &options);

} // namespace pstream
