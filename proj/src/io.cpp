#include "warpmesh/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace warpmesh {

std::string format_sig9(double value) {
  if (value == 0.0) value = 0.0;  // no "-0"
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.9g", value);
  return buf.data();
}

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out.put(static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xff));
  }
}

}  // namespace

void write_wav(std::ostream& out, std::span<const double> samples, const WavOptions& options) {
  constexpr std::uint16_t kChannels = 1;
  constexpr std::uint16_t kBits = 16;
  const std::uint32_t data_bytes = static_cast<std::uint32_t>(samples.size() * sizeof(std::int16_t));

  double peak = 0.0;
  for (double s : samples) peak = std::max(peak, std::abs(s));
  const double gain = peak > 0.0 ? std::pow(10.0, options.peak_dbfs / 20.0) / peak : 0.0;

  out.write("RIFF", 4);
  put_le<std::uint32_t>(out, 36 + data_bytes);
  out.write("WAVE", 4);
  out.write("fmt ", 4);
  put_le<std::uint32_t>(out, 16);
  put_le<std::uint16_t>(out, 1);  // PCM
  put_le<std::uint16_t>(out, kChannels);
  put_le<std::uint32_t>(out, options.sample_rate);
  put_le<std::uint32_t>(out, options.sample_rate * kChannels * kBits / 8);
  put_le<std::uint16_t>(out, kChannels * kBits / 8);
  put_le<std::uint16_t>(out, kBits);
  out.write("data", 4);
  put_le<std::uint32_t>(out, data_bytes);
  for (double s : samples) {
    const double scaled = std::clamp(std::round(s * gain * 32767.0), -32768.0, 32767.0);
    put_le<std::uint16_t>(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }
}

}  // namespace warpmesh
