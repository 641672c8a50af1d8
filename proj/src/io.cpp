#include "robar/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>

#include "robar/errors.hpp"

namespace robar {

namespace {

std::string lowercase_extension(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return "";
  std::string ext = path.substr(dot + 1);
  for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return ext;
}

TimeSeries read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::io_error, "cannot open " + path);
  TimeSeries series;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::size_t begin = line.find_first_not_of(" \t\r");
    if (begin == std::string::npos) continue;
    std::size_t end = line.find_last_not_of(" \t\r");
    std::string token = line.substr(begin, end - begin + 1);
    if (token[0] == '#') continue;
    char* parse_end = nullptr;
    const double value = std::strtod(token.c_str(), &parse_end);
    if (parse_end != token.c_str() + token.size() || !std::isfinite(value))
      throw Error(ErrorCode::parse_error,
                  path + ":" + std::to_string(line_number) + ": not a finite number: " + token);
    series.samples.push_back(value);
  }
  if (in.bad())
    throw Error(ErrorCode::io_error, "read failure on " + path);
  return series;
}

std::uint32_t read_u32(const unsigned char* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

std::uint16_t read_u16(const unsigned char* p) {
  return static_cast<std::uint16_t>(static_cast<std::uint32_t>(p[0]) |
                                    (static_cast<std::uint32_t>(p[1]) << 8));
}

TimeSeries read_wav(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorCode::io_error, "cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  if (in.bad())
    throw Error(ErrorCode::io_error, "read failure on " + path);
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw Error(ErrorCode::parse_error, path + ": not a RIFF/WAVE file");

  bool have_format = false;
  std::uint16_t channels = 0, bits = 0, codec = 0;
  std::uint32_t rate = 0;
  TimeSeries series;
  bool have_data = false;

  std::size_t offset = 12;
  while (offset + 8 <= bytes.size()) {
    const char* id = reinterpret_cast<const char*>(bytes.data() + offset);
    const std::uint32_t chunk_size = read_u32(bytes.data() + offset + 4);
    const std::size_t body = offset + 8;
    if (body + chunk_size > bytes.size())
      throw Error(ErrorCode::parse_error, path + ": truncated chunk");
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (chunk_size < 16)
        throw Error(ErrorCode::parse_error, path + ": malformed fmt chunk");
      codec = read_u16(bytes.data() + body);
      channels = read_u16(bytes.data() + body + 2);
      rate = read_u32(bytes.data() + body + 4);
      bits = read_u16(bytes.data() + body + 14);
      have_format = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      if (!have_format)
        throw Error(ErrorCode::parse_error, path + ": data chunk before fmt chunk");
      if (codec != 1)
        throw Error(ErrorCode::unsupported_format, path + ": only PCM WAV is supported");
      if (channels != 1)
        throw Error(ErrorCode::unsupported_format, path + ": only mono WAV is supported");
      if (bits != 16)
        throw Error(ErrorCode::unsupported_format, path + ": only 16-bit WAV is supported");
      const std::size_t count = chunk_size / 2;
      series.samples.resize(count);
      for (std::size_t i = 0; i < count; ++i) {
        const auto raw = static_cast<std::int16_t>(read_u16(bytes.data() + body + 2 * i));
        series.samples[i] = static_cast<double>(raw) / 32768.0;
      }
      series.sample_rate = static_cast<double>(rate);
      have_data = true;
    }
    offset = body + chunk_size + (chunk_size % 2);  // chunks are word-aligned
  }
  if (!have_data)
    throw Error(ErrorCode::parse_error, path + ": no data chunk");
  return series;
}

}  // namespace

SeriesFormat detect_format(const std::string& path) {
  return lowercase_extension(path) == "wav" ? SeriesFormat::wav : SeriesFormat::csv;
}

TimeSeries read_series(const std::string& path, SeriesFormat format) {
  TimeSeries series = format == SeriesFormat::wav ? read_wav(path) : read_csv(path);
  validate(series);
  return series;
}

std::string format_double(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error(ErrorCode::io_error, "cannot open " + path + " for writing");
  out << content;
  if (!out)
    throw Error(ErrorCode::io_error, "write failure on " + path);
}

}  // namespace robar
