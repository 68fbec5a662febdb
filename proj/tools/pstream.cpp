// pstream: simulate and analyze attenuated-laser Mach-Zehnder coincidence scans.

#include <pstream/analysis.hpp>
#include <pstream/config.hpp>
#include <pstream/errors.hpp>
#include <pstream/io.hpp>
#include <pstream/scan.hpp>
#include <pstream/source.hpp>
#include <pstream/trace.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

namespace fs = std::filesystem;
using namespace pstream;

namespace {

constexpr double kDefaultHalfWindow = 1e-6;

ReportOptions report_options(double half_window, double seconds_per_point, double dead_time,
                             double delta_t) {
  ReportOptions o;
  if (half_window > 0)
    o.window = Window{-half_window, half_window};
  o.seconds_per_point = seconds_per_point;
  o.dead_time = dead_time;
  o.delta_t = delta_t;
  return o;
}

int cmd_simulate(const fs::path &config_path, const fs::path &out_dir,
                 std::optional<std::uint64_t> seed_flag, unsigned workers) {
  ExperimentConfig cfg = load_config(config_path);
  cfg.scan.seed = resolve_seed(cfg, seed_flag);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

  const ScanResult result = run_scan(cfg, workers);
  write_scan_csv(result.points, out_dir / "scan.csv");
  {
    std::ofstream echo(out_dir / "config.json");
    if (!echo)
      throw IoError("cannot write " + (out_dir / "config.json").string());
    echo << config_to_json(result.config).dump(2) << '\n';
  }

  const CorrelationReport report =
      analyze_scan(result.points, report_options(kDefaultHalfWindow, cfg.scan.seconds_per_point,
                                                 cfg.source.dead_time, cfg.detectors[0].pulse_duration));
  write_report_csv(report, out_dir / "report.csv");
  std::cout << "wrote " << result.points.size() << " points (seed " << result.seed << ") to "
            << out_dir.string() << '\n';
  return 0;
}

int cmd_analyze(const fs::path &scan_path, const fs::path &out, const ReportOptions &options) {
  const std::vector<ScanPoint> points = read_scan_csv(scan_path);
  const CorrelationReport report = analyze_scan(points, options);
  write_report_csv(report, out);
  write_report_csv(report, std::cout);
  return 0;
}

int cmd_fig4(double v, double l_eff, const fs::path &out, double half_range, std::size_t points,
             double wavelength) {
  const std::vector<double> grid = symmetric_grid(half_range, points);
  write_fig4_csv(analytic_fig4(v, l_eff, grid, wavelength), out);
  return 0;
}

int cmd_stats(double mean, unsigned max_n, std::optional<double> counts, double accumulation,
              double dead_time) {
  std::printf("n,P(n)\n");
  for (unsigned n = 0; n <= max_n; ++n)
    std::printf("%u,%.6e\n", n, poisson_pmf(n, mean));
  std::printf("P(>=3),%.6e\n", poisson_tail(3, mean));
  std::printf("pair_fraction,%.6g\n", pair_fraction(mean));
  const double slots = accumulation / dead_time;
  std::printf("slots_per_accumulation,%.6g\n", slots);
  std::printf("expected_single_slots,%.6g\n", slots * poisson_pmf(1, mean));
  std::printf("expected_pair_slots,%.6g\n", slots * poisson_pmf(2, mean));
  if (counts)
    std::printf("mean_photon_number,%.6g\n", mean_photon_number(*counts, accumulation, dead_time));
  return 0;
}

int cmd_ingest(const fs::path &trace_path, const fs::path &out, double sampling_period,
               std::optional<float> threshold) {
  TraceFile trace = read_trace(trace_path, sampling_period);
  if (threshold)
    trace.threshold = *threshold;
  const TraceEvents events = ingest_trace(trace);
  std::ofstream file(out, std::ios::binary);
  if (!file)
    throw IoError("cannot write " + out.string());
  file << "channel,time_s\n";
  for (double t : events.ch1)
    file << "1," << format_double(t) << '\n';
  for (double t : events.ch2)
    file << "2," << format_double(t) << '\n';
  std::cout << "ch1_events," << events.ch1.size() << "\nch2_events," << events.ch2.size() << '\n';
  return 0;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Photon-stream Mach-Zehnder coincidence simulator"};
  app.require_subcommand(1);

  fs::path config_path, out_dir;
  std::optional<std::uint64_t> seed;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  auto *simulate = app.add_subcommand("simulate", "Run a PZT scan and write scan.csv, report.csv, config.json");
  simulate->add_option("--config", config_path, "Experiment config (JSON)")->required();
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_option("--seed", seed, "Seed (overrides PSTREAM_SEED and the config)");
  simulate->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);

  fs::path scan_path, analyze_out;
  double half_window = kDefaultHalfWindow, seconds_per_point = 1.0, dead_time = 22e-9, delta_t = 10e-9;
  auto *analyze = app.add_subcommand("analyze", "Compute the correlation report of a scan CSV");
  analyze->add_option("--scan", scan_path, "Scan CSV")->required();
  analyze->add_option("--out", analyze_out, "Report CSV")->required();
  analyze->add_option("--half-window", half_window, "Centre window half-width in m (0: whole scan)");
  analyze->add_option("--seconds-per-point", seconds_per_point, "Accumulation per scan point (s)");
  analyze->add_option("--dead-time", dead_time, "Slot width for <n> (s)");
  analyze->add_option("--delta-t", delta_t, "Coincidence resolution for g2_rate (s)");

  double v = 1.0, l_eff = 2e-6, half_range = 4e-6, wavelength = 632.8e-9;
  std::size_t points = 4001;
  fs::path fig4_out;
  auto *fig4 = app.add_subcommand("fig4", "Write the analytic walk-off curves");
  fig4->add_option("--v", v, "Intrinsic visibility")->required();
  fig4->add_option("--leff", l_eff, "Envelope FWHM (m)")->required();
  fig4->add_option("--out", fig4_out, "Output CSV")->required();
  fig4->add_option("--half-range", half_range, "Grid half-width (m)");
  fig4->add_option("--points", points, "Grid points (odd)");
  fig4->add_option("--wavelength", wavelength, "Wavelength (m)");

  double mean = 0.012, accumulation = 1.0, stats_dead_time = 22e-9;
  unsigned max_n = 5;
  std::optional<double> counts;
  auto *stats = app.add_subcommand("stats", "Poisson occupancy table and <n> helpers");
  stats->add_option("--mean", mean, "Mean photon number per slot")->required();
  stats->add_option("--max-n", max_n, "Largest n in the table");
  stats->add_option("--counts", counts, "Single counts to convert to <n>");
  stats->add_option("--accumulation", accumulation, "Accumulation time (s)");
  stats->add_option("--dead-time", stats_dead_time, "Slot width (s)");

  fs::path trace_path, ingest_out;
  double sampling_period = 400e-12;
  std::optional<float> threshold;
  auto *ingest = app.add_subcommand("ingest", "Extract rising edges from an oscilloscope trace");
  ingest->add_option("--trace", trace_path, "Trace file (CSV or PSTRACE1 binary)")->required();
  ingest->add_option("--out", ingest_out, "Events CSV")->required();
  ingest->add_option("--sampling-period", sampling_period, "Sampling period for binary traces (s)");
  ingest->add_option("--threshold", threshold, "Edge threshold (V)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*simulate)
      return cmd_simulate(config_path, out_dir, seed, workers);
    if (*analyze)
      return cmd_analyze(scan_path, analyze_out,
                         report_options(half_window, seconds_per_point, dead_time, delta_t));
    if (*fig4)
      return cmd_fig4(v, l_eff, fig4_out, half_range, points, wavelength);
    if (*stats)
      return cmd_stats(mean, max_n, counts, accumulation, stats_dead_time);
    if (*ingest)
      return cmd_ingest(trace_path, ingest_out, sampling_period, threshold);
  } catch (const Error &e) {
    std::cerr << "pstream: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception &e) {
    std::cerr << "pstream: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
