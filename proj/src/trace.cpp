#include <pstream/errors.hpp>
#include <pstream/io.hpp>
#include <pstream/trace.hpp>

#include "csv.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

namespace pstream {

void TraceFile::validate() const {
  if (ch1.size() != ch2.size())
    throw ParseError("trace channels differ in length", 0);
  if (!(sampling_period > 0))
    throw ParseError("trace sampling period must be > 0", 0);
}

namespace {

std::vector<double> rising_edges(const std::vector<float> &ch, const TraceFile &trace) {
  std::vector<double> edges;
  bool high = false;
  for (std::size_t i = 0; i < ch.size(); ++i) {
    const bool above = ch[i] > trace.threshold;
    if (above && !high)
      edges.push_back(trace.t0 + static_cast<double>(i) * trace.sampling_period);
    high = above;
  }
  return edges;
}

void render(const PulseTrain &train, Picoseconds period, std::vector<float> &out, float amplitude) {
  const auto n = static_cast<Picoseconds>(out.size());
  auto ceil_div = [period](Picoseconds t) { return t <= 0 ? 0 : (t + period - 1) / period; };
  for (const Pulse &p : train.pulses) {
    const Picoseconds lo = std::min(ceil_div(p.start), n);
    const Picoseconds hi = std::min(ceil_div(p.end()), n);
    for (Picoseconds i = lo; i < hi; ++i)
      out[static_cast<std::size_t>(i)] = amplitude;
  }
}

std::uint32_t read_u32_le(const std::byte *p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

void write_u32_le(std::ostream &out, std::uint32_t v) {
  const char bytes[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                         static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  out.write(bytes, 4);
}

constexpr std::size_t kHeaderBytes = 16;

} // namespace

TraceEvents ingest_trace(const TraceFile &trace) {
  trace.validate();
  return {rising_edges(trace.ch1, trace), rising_edges(trace.ch2, trace)};
}

TraceFile synthesize_trace(const PulseTrain &ch1, const PulseTrain &ch2, double sampling_period,
                           std::size_t samples, float amplitude) {
  const Picoseconds period = to_ps(sampling_period);
  if (period <= 0)
    throw DomainError("synthesize_trace: sampling period must be >= 1 ps");
  TraceFile t;
  t.sampling_period = sampling_period;
  t.threshold = amplitude / 2;
  t.ch1.assign(samples, 0.0f);
  t.ch2.assign(samples, 0.0f);
  render(ch1, period, t.ch1, amplitude);
  render(ch2, period, t.ch2, amplitude);
  return t;
}

TraceFile parse_trace_csv(std::istream &in) {
  TraceFile t;
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("empty trace file", 0);
  if (!line.empty() && line.back() == '\r')
    line.pop_back();
  if (line != "time_s,ch1_V,ch2_V")
    throw ParseError("unexpected trace header '" + line + "'", 0);
  std::size_t offset = line.size() + 1;

  double first = 0;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    const std::size_t at = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty())
      continue;
    const auto f = detail::split_csv(line);
    if (f.size() != 3)
      throw ParseError("expected 3 fields in trace row", at);
    const double time = detail::parse_number<double>(f[0], at);
    if (row == 0) {
      first = time;
      t.t0 = time;
    } else if (row == 1) {
      t.sampling_period = time - first;
      if (!(t.sampling_period > 0))
        throw ParseError("trace times must increase", at);
    } else if (std::abs(time - (first + static_cast<double>(row) * t.sampling_period)) >
               0.5 * t.sampling_period) {
      throw ParseError("trace rows are not uniformly spaced", at);
    }
    t.ch1.push_back(detail::parse_number<float>(f[1], at));
    t.ch2.push_back(detail::parse_number<float>(f[2], at));
    ++row;
  }
  return t;
}

TraceFile parse_trace_binary(std::span<const std::byte> bytes, double sampling_period) {
  if (bytes.size() < kHeaderBytes)
    throw ParseError("truncated trace header", bytes.size());
  if (std::memcmp(bytes.data(), kTraceMagic.data(), kTraceMagic.size()) != 0)
    throw ParseError("bad trace magic", 0);
  const std::uint32_t count = read_u32_le(bytes.data() + 8);
  const std::uint32_t channels = read_u32_le(bytes.data() + 12);
  if (channels != 2)
    throw ParseError("trace must have 2 channels, header says " + std::to_string(channels), 12);
  const std::size_t expected = kHeaderBytes + std::size_t{count} * channels * 4;
  if (bytes.size() != expected)
    throw ParseError("trace length mismatch: header implies " + std::to_string(expected) +
                         " bytes, file has " + std::to_string(bytes.size()),
                     std::min(bytes.size(), expected));

  TraceFile t;
  t.sampling_period = sampling_period;
  t.ch1.resize(count);
  t.ch2.resize(count);
  const std::byte *p = bytes.data() + kHeaderBytes;
  for (std::uint32_t i = 0; i < count; ++i, p += 8) {
    t.ch1[i] = std::bit_cast<float>(read_u32_le(p));
    t.ch2[i] = std::bit_cast<float>(read_u32_le(p + 4));
  }
  t.validate();
  return t;
}

TraceFile read_trace(const std::filesystem::path &path, double sampling_period) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (raw.compare(0, kTraceMagic.size(), kTraceMagic) == 0) {
    const auto *data = reinterpret_cast<const std::byte *>(raw.data());
    return parse_trace_binary({data, raw.size()}, sampling_period);
  }
  std::istringstream text(std::move(raw));
  return parse_trace_csv(text);
}

void write_trace_csv(const TraceFile &trace, const std::filesystem::path &path) {
  trace.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write " + path.string());
  out << "time_s,ch1_V,ch2_V\n";
  for (std::size_t i = 0; i < trace.samples(); ++i) {
    out << format_double(trace.t0 + static_cast<double>(i) * trace.sampling_period) << ','
        << format_double(trace.ch1[i]) << ',' << format_double(trace.ch2[i]) << '\n';
  }
  if (!out)
    throw IoError("write failed for " + path.string());
}

void write_trace_binary(const TraceFile &trace, const std::filesystem::path &path) {
  trace.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw IoError("cannot write " + path.string());
  out.write(kTraceMagic.data(), static_cast<std::streamsize>(kTraceMagic.size()));
  write_u32_le(out, static_cast<std::uint32_t>(trace.samples()));
  write_u32_le(out, 2);
  for (std::size_t i = 0; i < trace.samples(); ++i) {
    write_u32_le(out, std::bit_cast<std::uint32_t>(trace.ch1[i]));
    write_u32_le(out, std::bit_cast<std::uint32_t>(trace.ch2[i]));
  }
  if (!out)
    throw IoError("write failed for " + path.string());
}

} // namespace pstream
