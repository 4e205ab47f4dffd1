#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

namespace warpmesh {

// Shortest-of "%.9g": nine significant digits, as used by every CSV emitter.
std::string format_sig9(double value);

struct WavOptions {
  std::uint32_t sample_rate = 44100;
  double peak_dbfs = -1.0;
};

/// Writes a mono 16-bit PCM RIFF file. Samples are normalized so that the
/// largest magnitude sits at `peak_dbfs`; an all-zero signal stays silent.
void write_wav(std::ostream& out, std::span<const double> samples,
               const WavOptions& options = {});

}  // namespace warpmesh
