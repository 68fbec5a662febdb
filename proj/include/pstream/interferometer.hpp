#pragma once
#include <numbers>

namespace pstream {

/// Phase between transmitted and reflected fields of a lossless beam splitter.
inline constexpr double kBeamSplitterPhase = std::numbers::pi / 2;

/// State of the Mach-Zehnder at one PZT position.
///
/// Total fringe contrast is intrinsic_visibility * G, where G is the Gaussian
/// envelope evaluated at scan_position. With asymmetric_walkoff set, G uses the
/// short walk-off length; otherwise it uses the laser coherence length, which
/// leaves G indistinguishable from 1 over a micrometre scan.
struct OpticalState {
  double phase = 0.0;                       ///< rad, path A vs path B at BS2
  double intrinsic_visibility = 1.0;        ///< overlap quality on BS2
  double scan_position = 0.0;               ///< m, offset from zero path difference
  double effective_coherence_length = 2e-6; ///< m, walk-off envelope FWHM
  double laser_coherence_length = 0.30;     ///< m
  bool asymmetric_walkoff = false;
  static constexpr double bs_phase = kBeamSplitterPhase;

  void validate() const;
  double envelope_value() const;
  /// Probability that a photon leaves towards D1.
  double d1_probability() const;
};

struct PztConfig {
  double voltage_min = 0.0;
  double voltage_max = 100.0;
  double voltage_resolution = 1.5e-3;
  double displacement_per_volt = 8e-8; ///< m/V; +-4 um over the full range
  double scan_duration = 316.0;        ///< s

  void validate() const;
  double center_voltage() const { return 0.5 * (voltage_min + voltage_max); }
};

double pzt_phase(double x, double wavelength);

/// Quantizes `v` onto the controller's voltage grid (anchored at the range
/// centre) and converts to displacement; the centre maps to x = 0.
double voltage_to_displacement(double v, const PztConfig &cfg);

/// exp(-4 ln2 x^2 / l_eff^2): Gaussian with FWHM l_eff.
double envelope(double x, double l_eff);

/// (1 - V G cos(phi)) / 2.
double port_probability(double phi, double G, double V);

struct SinglesFringe {
  double a; ///< normalized intensity at D1
  double b; ///< normalized intensity at D2
};

SinglesFringe singles_fringe(double phi, double G, double V);

/// Probability that two independently routed photons of a bunched pair give
/// one click on each detector: 2 p (1 - p).
double pair_coincidence_probability(double phi, double G, double V);

} // namespace pstream
