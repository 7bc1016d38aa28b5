#pragma once

// FMCW range measurement: real beat-signal synthesis, one-sided range
// spectrum, cell-averaging CFAR and bin-to-range conversion.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace radarloc {

enum class Window { rectangular, hann };

struct ChirpConfig {
  double bandwidth = 1.0e9;     // Hz
  double duration = 25.6e-6;    // s
  int n_samples = 256;          // power of two, >= 16
  double carrier = 60.0e9;      // Hz
  Window window = Window::rectangular;
  int zero_pad = 1;             // transform length = n_samples * zero_pad

  double sample_rate() const noexcept { return n_samples / duration; }
  double slope() const noexcept { return bandwidth / duration; }
  /// Largest unaliased range c * M / (4 B).
  double max_range() const noexcept;
  /// Range spanned by one spectrum bin, c / (2 B zero_pad).
  double bin_width() const noexcept;

  void validate() const;
};

struct Target {
  double range = 0.0;      // m
  double amplitude = 1.0;  // A of s(t) = (A / 2) cos(...)
};

struct BeatSignal {
  std::vector<double> samples;
  ChirpConfig config;
};

struct RangeSpectrum {
  /// |X_k|^2 / N for k = 0 .. N/2, N the transform length. With this scaling
  /// time-domain energy equals spectrum_energy().
  std::vector<double> magnitude_sq;
  double bin_width_m = 0.0;
};

struct CfarConfig {
  int n_train = 8;  // one-sided
  int n_guard = 2;  // one-sided
  double pfa = 1e-4;

  void validate() const;
};

struct Detection {
  std::size_t bin = 0;
  double range_m = 0.0;
  double power = 0.0;
};

/// Sum over targets of (A/2) cos(2 pi k t_d n / f_s + 2 pi f_c t_d), t_d = 2 r / c,
/// plus white Gaussian noise when `snr_db` is set. SNR is referenced to the
/// strongest target: sigma^2 = (A_max^2 / 8) / 10^(snr_db / 10); with no
/// targets a unit amplitude is used. Output is a pure function of its inputs.
///
/// Throws RangeAliased for ranges at or beyond max_range() and ValidationError
/// for non-positive ranges or amplitudes.
BeatSignal synthesize_beat(const ChirpConfig& config, std::span<const Target> targets,
                           std::optional<double> snr_db, std::uint64_t seed);

/// Windowed, zero-padded one-sided power spectrum.
RangeSpectrum range_spectrum(const BeatSignal& signal);

/// Parseval-consistent total energy of a one-sided spectrum (interior bins
/// count twice).
double spectrum_energy(const RangeSpectrum& spectrum) noexcept;

/// Cell-averaging CFAR with one-sided training windows at the edges.
/// Threshold for a cell with T training cells is alpha * mean, where
/// alpha = T (pfa^(-1/T) - 1). Detections are local maxima above threshold,
/// sorted by descending power, ties by ascending bin.
///
/// Throws WindowTooLarge unless size > 2 (n_train + n_guard) + 1.
std::vector<Detection> cfar_detect(const RangeSpectrum& spectrum, const CfarConfig& cfar);

/// CA-CFAR scale factor for T averaged training cells.
double cfar_scale(int training_cells, double pfa) noexcept;

/// Full chain for one node: synthesize, transform, detect, return the
/// strongest detection. Throws NoDetection when CFAR finds nothing.
Detection estimate_range(const ChirpConfig& config, std::span<const Target> targets,
                         std::optional<double> snr_db, std::uint64_t seed,
                         const CfarConfig& cfar);

}  // namespace radarloc
