#include <pstream/errors.hpp>
#include <pstream/interferometer.hpp>

#include <cmath>
#include <string>

namespace pstream {

namespace {

void check_unit(double v, const char *name) {
  if (!(v >= 0 && v <= 1))
    throw DomainError(std::string(name) + " must lie in [0, 1]");
}

} // namespace

void OpticalState::validate() const {
  check_unit(intrinsic_visibility, "intrinsic_visibility");
  if (!(effective_coherence_length > 0))
    throw DomainError("effective_coherence_length must be > 0");
  if (!(laser_coherence_length > 0))
    throw DomainError("laser_coherence_length must be > 0");
}

double OpticalState::envelope_value() const {
  return envelope(scan_position,
                  asymmetric_walkoff ? effective_coherence_length : laser_coherence_length);
}

double OpticalState::d1_probability() const {
  validate();
  return port_probability(phase, envelope_value(), intrinsic_visibility);
}

void PztConfig::validate() const {
  if (!(voltage_max > voltage_min))
    throw ConfigError("pzt.voltage_max must exceed pzt.voltage_min");
  if (!(voltage_resolution > 0))
    throw ConfigError("pzt.voltage_resolution must be > 0");
  if (!std::isfinite(displacement_per_volt))
    throw ConfigError("pzt.displacement_per_volt must be finite");
  if (!(scan_duration > 0))
    throw ConfigError("pzt.scan_duration must be > 0");
}

double pzt_phase(double x, double wavelength) {
  if (!(wavelength > 0))
    throw DomainError("pzt_phase: wavelength must be > 0");
  return 2.0 * std::numbers::pi * x / wavelength;
}

double voltage_to_displacement(double v, const PztConfig &cfg) {
  if (!(v >= cfg.voltage_min && v <= cfg.voltage_max))
    throw DomainError("voltage_to_displacement: " + std::to_string(v) + " V outside [" +
                      std::to_string(cfg.voltage_min) + ", " + std::to_string(cfg.voltage_max) +
                      "] V");
  const double center = cfg.center_voltage();
  const double steps = std::round((v - center) / cfg.voltage_resolution);
  return steps * cfg.voltage_resolution * cfg.displacement_per_volt;
}

double envelope(double x, double l_eff) {
  if (!(l_eff > 0))
    throw DomainError("envelope: l_eff must be > 0");
  const double r = x / l_eff;
  return std::exp(-4.0 * std::numbers::ln2 * r * r);
}

double port_probability(double phi, double G, double V) {
  check_unit(G, "envelope G");
  check_unit(V, "visibility V");
  return 0.5 * (1.0 - V * G * std::cos(phi));
}

SinglesFringe singles_fringe(double phi, double G, double V) {
  const double p = port_probability(phi, G, V);
  return {p, 1.0 - p};
}

double pair_coincidence_probability(double phi, double G, double V) {
  const double p = port_probability(phi, G, V);
  return 2.0 * p * (1.0 - p);
}

} // namespace pstream
