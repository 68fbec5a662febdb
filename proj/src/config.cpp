#include <pstream/config.hpp>
#include <pstream/errors.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <string>

namespace pstream {

using nlohmann::json;

void ExperimentConfig::validate() const {
  source.validate();
  if (!(optics.intrinsic_visibility >= 0 && optics.intrinsic_visibility <= 1))
    throw ConfigError("optics.intrinsic_visibility must lie in [0, 1]");
  if (!(optics.effective_coherence_length > 0))
    throw ConfigError("optics.effective_coherence_length must be > 0");
  if (!(optics.laser_coherence_length > 0))
    throw ConfigError("optics.laser_coherence_length must be > 0");
  optics.pzt.validate();
  for (const DetectorConfig &d : detectors) {
    d.validate();
    ccm.validate(d.pulse_duration);
  }
  if (scan.n_points < 2)
    throw ConfigError("scan.n_points must be >= 2");
  if (!(scan.seconds_per_point > 0))
    throw ConfigError("scan.seconds_per_point must be > 0");
  const double steps = scan.seconds_per_point / ccm.step;
  if (std::abs(steps - std::round(steps)) > 1e-9 * steps)
    throw ConfigError("scan.seconds_per_point must be a whole number of ccm.step");
  if (!(scan.jitter_volts >= 0))
    throw ConfigError("scan.jitter_volts must be >= 0");
  if (source.dead_time > ccm.step)
    throw ConfigError("source.dead_time exceeds ccm.step");
}

ExperimentConfig ExperimentConfig::reference() {
  ExperimentConfig cfg;
  cfg.source.mean_photon_override = 0.012;
  return cfg;
}

namespace {

/// Reads members of one JSON object, remembering which keys were consumed.
class ObjectReader {
public:
  ObjectReader(const json &obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object())
      throw ConfigError(where() + ": expected an object");
  }

  template <typename T> void read(const char *key, T &out) {
    seen_.insert(key);
    auto it = obj_.find(key);
    if (it == obj_.end())
      return;
    try {
      out = it->template get<T>();
    } catch (const json::exception &) {
      throw ConfigError(path_ + "/" + key + ": wrong type");
    }
  }

  const json *child(const char *key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  bool has(const char *key) const { return obj_.contains(key); }

  void reject_unknown() const {
    for (auto it = obj_.begin(); it != obj_.end(); ++it) {
      if (!seen_.count(it.key()))
        throw ConfigError("unknown key " + path_ + "/" + it.key());
    }
  }

  std::string sub(const char *key) const { return path_ + "/" + key; }

private:
  std::string where() const { return path_.empty() ? "/" : path_; }

  const json &obj_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_detector(const json &j, const std::string &path, DetectorConfig &d) {
  ObjectReader r(j, path);
  r.read("dead_time", d.dead_time);
  r.read("dark_rate", d.dark_rate);
  r.read("pulse_duration", d.pulse_duration);
  r.read("pulse_amplitude", d.pulse_amplitude);
  r.read("resolving_time", d.resolving_time);
  r.read("efficiency", d.efficiency);
  r.reject_unknown();
}

json detector_json(const DetectorConfig &d) {
  return {{"dead_time", d.dead_time},           {"dark_rate", d.dark_rate},
          {"pulse_duration", d.pulse_duration}, {"pulse_amplitude", d.pulse_amplitude},
          {"resolving_time", d.resolving_time}, {"efficiency", d.efficiency}};
}

} // namespace

ExperimentConfig config_from_json(const json &doc) {
  ExperimentConfig cfg;
  ObjectReader top(doc, "");

  const json *src = top.child("source");
  if (!src)
    throw ConfigError("missing /source");
  {
    ObjectReader r(*src, "/source");
    if (!r.has("mean_photon_override") && !r.has("od_total"))
      throw ConfigError("/source must set mean_photon_override or od_total");
    r.read("input_power", cfg.source.input_power);
    r.read("wavelength", cfg.source.wavelength);
    r.read("od_total", cfg.source.od_total);
    r.read("dead_time", cfg.source.dead_time);
    if (const json *m = r.child("mean_photon_override"); m && !m->is_null()) {
      if (!m->is_number())
        throw ConfigError("/source/mean_photon_override: wrong type");
      cfg.source.mean_photon_override = m->get<double>();
    }
    r.reject_unknown();
  }

  if (const json *opt = top.child("optics")) {
    ObjectReader r(*opt, "/optics");
    r.read("intrinsic_visibility", cfg.optics.intrinsic_visibility);
    r.read("effective_coherence_length", cfg.optics.effective_coherence_length);
    r.read("laser_coherence_length", cfg.optics.laser_coherence_length);
    if (const json *pzt = r.child("pzt")) {
      ObjectReader p(*pzt, "/optics/pzt");
      p.read("voltage_min", cfg.optics.pzt.voltage_min);
      p.read("voltage_max", cfg.optics.pzt.voltage_max);
      p.read("voltage_resolution", cfg.optics.pzt.voltage_resolution);
      p.read("displacement_per_volt", cfg.optics.pzt.displacement_per_volt);
      p.read("scan_duration", cfg.optics.pzt.scan_duration);
      p.reject_unknown();
    }
    r.reject_unknown();
  }

  if (const json *det = top.child("detectors")) {
    if (!det->is_array() || det->size() != 2)
      throw ConfigError("/detectors must be an array of two detector objects");
    for (std::size_t i = 0; i < 2; ++i)
      read_detector((*det)[i], "/detectors/" + std::to_string(i), cfg.detectors[i]);
  }

  if (const json *ccm = top.child("ccm")) {
    ObjectReader r(*ccm, "/ccm");
    r.read("overlap_threshold", cfg.ccm.overlap_threshold);
    r.read("delay_tau", cfg.ccm.delay_tau);
    r.read("accumulation_bin", cfg.ccm.accumulation_bin);
    r.read("step", cfg.ccm.step);
    r.reject_unknown();
  }

  if (const json *scan = top.child("scan")) {
    ObjectReader r(*scan, "/scan");
    r.read("n_points", cfg.scan.n_points);
    r.read("seconds_per_point", cfg.scan.seconds_per_point);
    r.read("seed", cfg.scan.seed);
    r.read("asymmetric_walkoff", cfg.scan.asymmetric_walkoff);
    r.read("jitter_volts", cfg.scan.jitter_volts);
    r.reject_unknown();
  }

  top.reject_unknown();
  cfg.validate();
  return cfg;
}

json config_to_json(const ExperimentConfig &cfg) {
  json source = {{"input_power", cfg.source.input_power},
                 {"wavelength", cfg.source.wavelength},
                 {"od_total", cfg.source.od_total},
                 {"dead_time", cfg.source.dead_time}};
  if (cfg.source.mean_photon_override)
    source["mean_photon_override"] = *cfg.source.mean_photon_override;
  const PztConfig &pzt = cfg.optics.pzt;
  return {
      {"source", source},
      {"optics",
       {{"intrinsic_visibility", cfg.optics.intrinsic_visibility},
        {"effective_coherence_length", cfg.optics.effective_coherence_length},
        {"laser_coherence_length", cfg.optics.laser_coherence_length},
        {"pzt",
         {{"voltage_min", pzt.voltage_min},
          {"voltage_max", pzt.voltage_max},
          {"voltage_resolution", pzt.voltage_resolution},
          {"displacement_per_volt", pzt.displacement_per_volt},
          {"scan_duration", pzt.scan_duration}}}}},
      {"detectors", json::array({detector_json(cfg.detectors[0]), detector_json(cfg.detectors[1])})},
      {"ccm",
       {{"overlap_threshold", cfg.ccm.overlap_threshold},
        {"delay_tau", cfg.ccm.delay_tau},
        {"accumulation_bin", cfg.ccm.accumulation_bin},
        {"step", cfg.ccm.step}}},
      {"scan",
       {{"n_points", cfg.scan.n_points},
        {"seconds_per_point", cfg.scan.seconds_per_point},
        {"seed", cfg.scan.seed},
        {"asymmetric_walkoff", cfg.scan.asymmetric_walkoff},
        {"jitter_volts", cfg.scan.jitter_volts}}},
  };
}

ExperimentConfig load_config(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error &e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

std::uint64_t resolve_seed(const ExperimentConfig &cfg, std::optional<std::uint64_t> flag) {
  if (flag)
    return *flag;
  if (const char *env = std::getenv("PSTREAM_SEED"); env && *env) {
    std::uint64_t seed = 0;
    const char *end = env + std::char_traits<char>::length(env);
    auto [ptr, ec] = std::from_chars(env, end, seed);
    if (ec != std::errc() || ptr != end)
      throw ConfigError(std::string("PSTREAM_SEED is not an unsigned integer: ") + env);
    return seed;
  }
  return cfg.scan.seed;
}

} // namespace pstream
