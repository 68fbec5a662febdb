#include <pstream/errors.hpp>
#include <pstream/io.hpp>

#include "csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>

namespace pstream {

std::string format_double(double v) {
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc())
    throw IoError("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

namespace {

std::ofstream open_out(const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write " + path.string());
  return out;
}

void finish(std::ofstream &out, const std::filesystem::path &path) {
  out.flush();
  if (!out)
    throw IoError("write failed for " + path.string());
}

} // namespace

void write_scan_csv(std::span<const ScanPoint> points, std::ostream &out) {
  out << kScanCsvHeader << '\n';
  for (const ScanPoint &p : points) {
    out << p.point_index << ',' << format_double(p.voltage) << ',' << format_double(p.x) << ','
        << format_double(p.phase) << ',' << format_double(p.envelope) << ',' << p.n_a << ','
        << p.n_b << ',' << p.n_c << '\n';
  }
}

void write_scan_csv(std::span<const ScanPoint> points, const std::filesystem::path &path) {
  std::ofstream out = open_out(path);
  write_scan_csv(points, out);
  finish(out, path);
}

std::string scan_csv(std::span<const ScanPoint> points) {
  std::ostringstream out;
  write_scan_csv(points, out);
  return out.str();
}

std::vector<ScanPoint> read_scan_csv(std::istream &in) {
  std::vector<ScanPoint> points;
  std::string line;
  std::size_t offset = 0;
  if (!std::getline(in, line))
    throw ParseError("empty scan file", 0);
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != kScanCsvHeader)
    throw ParseError("unexpected scan header '" + line + "'", 0);
  offset = line.size() + 1;

  while (std::getline(in, line)) {
    const std::size_t line_offset = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const std::vector<std::string_view> f = detail::split_csv(line);
    if (f.size() != 8)
      throw ParseError("expected 8 fields in scan row, found " + std::to_string(f.size()), line_offset);
    ScanPoint p;
    p.point_index = detail::parse_number<std::uint64_t>(f[0], line_offset);
    p.voltage = detail::parse_number<double>(f[1], line_offset);
    p.x = detail::parse_number<double>(f[2], line_offset);
    p.phase = detail::parse_number<double>(f[3], line_offset);
    p.envelope = detail::parse_number<double>(f[4], line_offset);
    p.n_a = detail::parse_number<std::uint64_t>(f[5], line_offset);
    p.n_b = detail::parse_number<std::uint64_t>(f[6], line_offset);
    p.n_c = detail::parse_number<std::uint64_t>(f[7], line_offset);
    points.push_back(p);
  }
  return points;
}

std::vector<ScanPoint> read_scan_csv(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  return read_scan_csv(in);
}

void write_report_csv(const CorrelationReport &r, std::ostream &out) {
  auto flag = [](bool b) { return b ? "true" : "false"; };
  out << "key,value\n"
      << "visibility_A," << format_double(r.visibility_a) << '\n'
      << "visibility_B," << format_double(r.visibility_b) << '\n'
      << "g2_ratio_min_over_max," << format_double(r.g2_ratio_min_over_max) << '\n'
      << "g2_rate," << format_double(r.g2_rate) << '\n'
      << "eta21," << format_double(r.eta21) << '\n'
      << "mean_photon," << format_double(r.mean_photon) << '\n'
      << "fringe_period_m," << format_double(r.fringe_period) << '\n'
      << "fringe_period_coincidence_m," << format_double(r.fringe_period_coincidence) << '\n'
      << "visibility_A_above_classical," << flag(r.visibility_a_above_classical) << '\n'
      << "visibility_B_above_classical," << flag(r.visibility_b_above_classical) << '\n'
      << "g2_below_classical," << flag(r.g2_below_classical) << '\n';
}

void write_report_csv(const CorrelationReport &report, const std::filesystem::path &path) {
  std::ofstream out = open_out(path);
  write_report_csv(report, out);
  finish(out, path);
}

void write_fig4_csv(const Fig4Curves &c, const std::filesystem::path &path) {
  std::ofstream out = open_out(path);
  out << "x_m,phase_rad,envelope,I_A,I_B,coincidence,coincidence_norm,g2\n";
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    out << format_double(c.x[i]) << ',' << format_double(c.phase[i]) << ','
        << format_double(c.envelope[i]) << ',' << format_double(c.intensity_a[i]) << ','
        << format_double(c.intensity_b[i]) << ',' << format_double(c.coincidence[i]) << ','
        << format_double(c.coincidence_norm[i]) << ',' << format_double(c.g2[i]) << '\n';
  }
  finish(out, path);
}

} // namespace pstream
