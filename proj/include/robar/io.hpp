#pragma once

#include <string>
#include <vector>

#include "robar/signal.hpp"

namespace robar {

enum class SeriesFormat { csv, wav };

// .wav / .WAV chooses wav, everything else csv.
SeriesFormat detect_format(const std::string& path);

// CSV: one finite decimal per line, blank lines and '#' comments skipped.
// WAV: RIFF PCM, 16-bit, mono; samples scaled by 1/32768 so -32768 -> -1.0.
TimeSeries read_series(const std::string& path, SeriesFormat format);

// Round-trip-exact formatting (17 significant digits) used for every number
// the CLI emits, so identical runs are byte-identical.
std::string format_double(double value);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace robar
