#include <pstream/analysis.hpp>
#include <pstream/errors.hpp>
#include <pstream/source.hpp>

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>

namespace pstream {

namespace {

void check_lengths(const FringeSeries &s) {
  if (s.positions.size() != s.values.size())
    throw AlignmentError("series '" + s.label + "': positions and values differ in length");
}

std::vector<double> in_window(const FringeSeries &s, std::optional<Window> window) {
  check_lengths(s);
  if (!window)
    return s.values;
  std::vector<double> out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.positions[i] >= window->lo && s.positions[i] <= window->hi)
      out.push_back(s.values[i]);
  }
  return out;
}

constexpr std::size_t kMinWindowSamples = 8;

} // namespace

Extrema robust_extrema(const FringeSeries &series, std::optional<Window> window, double trim) {
  std::vector<double> v = in_window(series, window);
  if (v.size() < kMinWindowSamples)
    throw InsufficientDataError("series '" + series.label + "': " + std::to_string(v.size()) +
                                " samples in window, need at least " +
                                std::to_string(kMinWindowSamples));
  if (!(trim >= 0 && trim < 0.5))
    throw DomainError("robust_extrema: trim must lie in [0, 0.5)");
  std::sort(v.begin(), v.end());
  const auto k = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(trim * v.size())));
  const double lo = std::accumulate(v.begin(), v.begin() + k, 0.0) / k;
  const double hi = std::accumulate(v.end() - k, v.end(), 0.0) / k;
  return {lo, hi};
}

double visibility(const FringeSeries &series, std::optional<Window> window, double trim) {
  const Extrema e = robust_extrema(series, window, trim);
  if (e.max + e.min <= 0)
    throw UndefinedRatioError("visibility: series '" + series.label + "' is identically zero");
  return (e.max - e.min) / (e.max + e.min);
}

double g2_ratio(const FringeSeries &coinc, std::optional<Window> window, double trim) {
  const Extrema e = robust_extrema(coinc, window, trim);
  if (e.max <= 0)
    throw UndefinedRatioError("g2_ratio: coincidence maximum is zero");
  return e.min / e.max;
}

double g2_rate(double n_a, double n_b, double n_c, double T, double delta_t) {
  if (!(n_a > 0) || !(n_b > 0))
    throw UndefinedRatioError("g2_rate: singles counts must be > 0");
  if (!(T > 0) || !(delta_t > 0))
    throw DomainError("g2_rate: T and delta_t must be > 0");
  if (!(n_c >= 0))
    throw DomainError("g2_rate: negative coincidence count");
  return n_c / (n_a * n_b) * (T / delta_t);
}

FringeSeries averaged_g2(const FringeSeries &a, const FringeSeries &b, const FringeSeries &coinc,
                         std::span<const double> envelope) {
  check_lengths(a);
  check_lengths(b);
  check_lengths(coinc);
  const std::size_t n = coinc.size();
  if (a.size() != n || b.size() != n || envelope.size() != n)
    throw AlignmentError("averaged_g2: inputs have different lengths");
  for (std::size_t i = 0; i < n; ++i) {
    const double x = coinc.positions[i];
    const double tol = 1e-9 * std::max(1.0, std::abs(x));
    if (std::abs(a.positions[i] - x) > tol || std::abs(b.positions[i] - x) > tol)
      throw AlignmentError("averaged_g2: position grids differ at sample " + std::to_string(i));
  }

  std::vector<double> ratio(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double mean_singles = 0.5 * (a.values[i] + b.values[i]);
    const double denom = mean_singles * mean_singles;
    ratio[i] = denom > 0 ? coinc.values[i] / denom : 0.0;
  }

  const double g_max = envelope.empty() ? 0.0 : *std::max_element(envelope.begin(), envelope.end());
  double center_max = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (envelope[i] >= 0.5 * g_max)
      center_max = std::max(center_max, ratio[i]);
  }

  FringeSeries out;
  out.positions = coinc.positions;
  out.values.resize(n);
  out.label = "g2";
  for (std::size_t i = 0; i < n; ++i) {
    const double g = envelope[i];
    if (!(g >= 0 && g <= 1))
      throw DomainError("averaged_g2: envelope must lie in [0, 1]");
    // a coincidence-free centre leaves only the baseline term
    const double nc = g > 0 && center_max > 0 ? ratio[i] / center_max : 0.0;
    out.values[i] = g * nc + (1.0 - g) * 0.5;
  }
  return out;
}

double eta21(double n_bunched, double n_single_per_path) {
  if (!(n_single_per_path > 0))
    throw UndefinedRatioError("eta21: singles per path must be > 0");
  if (!(n_bunched >= 0))
    throw DomainError("eta21: negative bunched count");
  return n_bunched / (2.0 * n_single_per_path);
}

double fringe_period(const FringeSeries &series) {
  check_lengths(series);
  const std::size_t n = series.size();
  if (n < 16)
    throw InsufficientDataError("fringe_period: need at least 16 samples");
  const auto &x = series.positions;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(x[i] > x[i - 1]))
      throw ContractError("fringe_period: positions must be strictly increasing");
  }
  const double span = x.back() - x.front();
  const double dx = span / static_cast<double>(n - 1);
  const double f_min = 2.0 / span;
  const double f_max = 1.0 / (8.0 * dx);
  if (f_max <= f_min)
    throw InsufficientDataError("fringe_period: too few samples for two periods at 8 per period");

  const double mean = std::accumulate(series.values.begin(), series.values.end(), 0.0) / n;
  std::vector<double> weighted(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = (x[i] - x.front()) / span;
    const double hann = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * u));
    weighted[i] = hann * (series.values[i] - mean);
  }

  constexpr double kOversample = 16.0;
  const double df = 1.0 / (span * kOversample);
  const auto bins = static_cast<std::size_t>((f_max - f_min) / df) + 1;
  std::vector<double> power(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    const double w = 2.0 * std::numbers::pi * (f_min + k * df);
    double re = 0, im = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double arg = w * (x[i] - x.front());
      re += weighted[i] * std::cos(arg);
      im -= weighted[i] * std::sin(arg);
    }
    power[k] = re * re + im * im;
  }

  const auto peak_it = std::max_element(power.begin(), power.end());
  const std::size_t peak = static_cast<std::size_t>(peak_it - power.begin());
  std::vector<double> sorted = power;
  std::nth_element(sorted.begin(), sorted.begin() + bins / 2, sorted.end());
  const double floor = sorted[bins / 2];
  constexpr double kMinPeakToMedian = 20.0;
  if (!(*peak_it > 0) || *peak_it < kMinPeakToMedian * floor)
    throw NoPeriodError("fringe_period: no spectral peak above the noise floor in '" +
                        series.label + "'");

  double offset = 0;
  if (peak > 0 && peak + 1 < bins) {
    const double l = power[peak - 1], c = power[peak], r = power[peak + 1];
    const double curvature = l - 2.0 * c + r;
    if (curvature < 0)
      offset = 0.5 * (l - r) / curvature;
  }
  return 1.0 / (f_min + (static_cast<double>(peak) + offset) * df);
}

double chi_square_quantile(double probability, int dof) {
  if (dof < 1)
    throw DomainError("chi_square_quantile: dof must be >= 1");
  boost::math::chi_squared dist(dof);
  return boost::math::quantile(dist, probability);
}

GofResult poisson_gof(std::span<const std::uint64_t> histogram, std::optional<double> mean) {
  const double total = std::accumulate(histogram.begin(), histogram.end(), 0.0);
  if (!(total > 0))
    throw DegenerateError("poisson_gof: empty histogram");
  double m = 0;
  if (mean) {
    m = *mean;
  } else {
    for (std::size_t k = 0; k < histogram.size(); ++k)
      m += static_cast<double>(k) * histogram[k];
    m /= total;
  }
  if (!(m >= 0))
    throw DomainError("poisson_gof: mean must be >= 0");

  struct Cell {
    double observed = 0;
    double expected = 0;
  };
  std::vector<Cell> cells;
  Cell open;
  const std::size_t last = histogram.size() - 1;
  for (std::size_t k = 0; k <= last; ++k) {
    const auto kk = static_cast<unsigned>(k);
    const double p = k == last ? poisson_tail(kk, m) : poisson_pmf(kk, m);
    open.observed += static_cast<double>(histogram[k]);
    open.expected += total * p;
    if (open.expected >= 5.0) {
      cells.push_back(open);
      open = {};
    }
  }
  if (open.observed > 0 || open.expected > 0) {
    if (cells.empty()) {
      cells.push_back(open);
    } else {
      cells.back().observed += open.observed;
      cells.back().expected += open.expected;
    }
  }

  const int dof = static_cast<int>(cells.size()) - 1 - (mean ? 0 : 1);
  if (cells.size() < 2 || dof < 1)
    throw DegenerateError("poisson_gof: all mass falls in a single cell");

  GofResult r;
  r.cells = cells.size();
  r.dof = dof;
  for (const Cell &c : cells)
    r.chi_square += (c.observed - c.expected) * (c.observed - c.expected) / c.expected;
  boost::math::chi_squared dist(dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.chi_square));
  return r;
}

CorrelationReport correlation_report(const FringeSeries &n_a, const FringeSeries &n_b,
                                     const FringeSeries &n_c, const ReportOptions &options) {
  if (n_a.size() != n_b.size() || n_a.size() != n_c.size())
    throw AlignmentError("correlation_report: series differ in length");

  CorrelationReport r;
  r.visibility_a = visibility(n_a, options.window, options.trim);
  r.visibility_b = visibility(n_b, options.window, options.trim);
  r.g2_ratio_min_over_max = g2_ratio(n_c, options.window, options.trim);

  const std::vector<double> a = in_window(n_a, options.window);
  const std::vector<double> b = in_window(n_b, options.window);
  const std::vector<double> c = in_window(n_c, options.window);
  const double sum_a = std::accumulate(a.begin(), a.end(), 0.0);
  const double sum_b = std::accumulate(b.begin(), b.end(), 0.0);
  const double sum_c = std::accumulate(c.begin(), c.end(), 0.0);
  const double points = static_cast<double>(a.size());
  const double total_time = points * options.seconds_per_point;

  r.g2_rate = g2_rate(sum_a, sum_b, sum_c, total_time, options.delta_t);
  const double singles_per_path = 0.5 * (sum_a + sum_b) / points;
  r.eta21 = eta21(robust_extrema(n_c, options.window, options.trim).max, singles_per_path);
  r.mean_photon =
      mean_photon_number((sum_a + sum_b) / points, options.seconds_per_point, options.dead_time);

  r.fringe_period = fringe_period(n_a);
  try {
    r.fringe_period_coincidence = fringe_period(n_c);
  } catch (const NoPeriodError &) {
    r.fringe_period_coincidence = std::numeric_limits<double>::quiet_NaN();
  }

  r.visibility_a_above_classical = r.visibility_a > kClassicalVisibilityBound;
  r.visibility_b_above_classical = r.visibility_b > kClassicalVisibilityBound;
  r.g2_below_classical = r.g2_ratio_min_over_max < kClassicalG2Bound;
  return r;
}

} // namespace pstream
