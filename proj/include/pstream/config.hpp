#pragma once
#include <pstream/coincidence.hpp>
#include <pstream/detection.hpp>
#include <pstream/interferometer.hpp>
#include <pstream/source.hpp>

#include <nlohmann/json.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>

namespace pstream {

struct OpticsConfig {
  double intrinsic_visibility = 0.882;
  double effective_coherence_length = 2e-6;
  double laser_coherence_length = 0.30;
  PztConfig pzt;
};

struct ScanConfig {
  std::uint64_t n_points = 316;
  double seconds_per_point = 1.0;
  std::uint64_t seed = 1;
  bool asymmetric_walkoff = false;
  /// Amplitude (V) of a smooth seeded wobble on the voltage ramp, mimicking a
  /// hand-driven controller. 0 disables it.
  double jitter_volts = 0.0;
};

struct ExperimentConfig {
  SourceConfig source;
  OpticsConfig optics;
  std::array<DetectorConfig, 2> detectors{}; ///< D1 (path A), D2 (path B)
  CcmConfig ccm;
  ScanConfig scan;

  void validate() const;

  /// <n> = 0.012, V = 0.882, 316 one-second points, walk-off off.
  static ExperimentConfig reference();
};

/// Parses the JSON form (snake_case keys mirroring the structs above). Unknown
/// keys are rejected with their JSON pointer; the source block must name
/// either mean_photon_override or od_total.
ExperimentConfig config_from_json(const nlohmann::json &doc);
nlohmann::json config_to_json(const ExperimentConfig &cfg);

ExperimentConfig load_config(const std::filesystem::path &path);

/// Seed precedence: explicit flag, then the PSTREAM_SEED environment variable,
/// then the config file.
std::uint64_t resolve_seed(const ExperimentConfig &cfg, std::optional<std::uint64_t> flag);

} // namespace pstream
