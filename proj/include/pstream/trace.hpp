#pragma once
#include <pstream/detection.hpp>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

namespace pstream {

/// Two-channel oscilloscope capture at a fixed sampling period.
struct TraceFile {
  double t0 = 0.0;                 ///< s, time of sample 0
  double sampling_period = 400e-12; ///< s
  float threshold = 2.0f;           ///< V, for 4 V pulses
  std::vector<float> ch1;
  std::vector<float> ch2;

  std::size_t samples() const { return ch1.size(); }
  void validate() const;
};

struct TraceEvents {
  std::vector<double> ch1; ///< s, rising edges
  std::vector<double> ch2;
};

/// Rising edges: the first sample of each run strictly above threshold.
TraceEvents ingest_trace(const TraceFile &trace);

/// Renders two pulse trains as a capture of `samples` points starting at 0.
/// A sample at time t is high iff some pulse covers t (start <= t < end).
TraceFile synthesize_trace(const PulseTrain &ch1, const PulseTrain &ch2, double sampling_period,
                           std::size_t samples, float amplitude = 4.0f);

/// Magic of the packed binary form: 8 bytes, then u32 LE sample count, u32 LE
/// channel count, then little-endian f32 samples interleaved per time step.
inline constexpr std::string_view kTraceMagic = "PSTRACE1";

/// CSV form: header "time_s,ch1_V,ch2_V", uniformly spaced rows.
TraceFile parse_trace_csv(std::istream &in);
TraceFile parse_trace_binary(std::span<const std::byte> bytes, double sampling_period = 400e-12);

/// Detects the format from the leading magic bytes.
TraceFile read_trace(const std::filesystem::path &path, double sampling_period = 400e-12);

void write_trace_csv(const TraceFile &trace, const std::filesystem::path &path);
void write_trace_binary(const TraceFile &trace, const std::filesystem::path &path);

} // namespace pstream
