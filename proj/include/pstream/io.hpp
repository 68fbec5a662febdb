#pragma once
#include <pstream/analysis.hpp>
#include <pstream/scan.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace pstream {

/// Header of the scan CSV, one row per point follows.
inline constexpr const char *kScanCsvHeader = "point,voltage_V,x_m,phase_rad,envelope,N_A,N_B,N_c";

/// Shortest round-trip decimal form of `v`.
std::string format_double(double v);

void write_scan_csv(std::span<const ScanPoint> points, std::ostream &out);
void write_scan_csv(std::span<const ScanPoint> points, const std::filesystem::path &path);
std::string scan_csv(std::span<const ScanPoint> points);

std::vector<ScanPoint> read_scan_csv(std::istream &in);
std::vector<ScanPoint> read_scan_csv(const std::filesystem::path &path);

/// Flat key,value CSV.
void write_report_csv(const CorrelationReport &report, std::ostream &out);
void write_report_csv(const CorrelationReport &report, const std::filesystem::path &path);

void write_fig4_csv(const Fig4Curves &curves, const std::filesystem::path &path);

} // namespace pstream
