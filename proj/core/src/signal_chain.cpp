#include "radarloc/signal_chain.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "radarloc/errors.hpp"
#include "radarloc/fft.hpp"
#include "radarloc/geometry.hpp"

namespace radarloc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

double ChirpConfig::max_range() const noexcept {
  return kSpeedOfLight * n_samples / (4.0 * bandwidth);
}

double ChirpConfig::bin_width() const noexcept {
  return kSpeedOfLight / (2.0 * bandwidth * zero_pad);
}

void ChirpConfig::validate() const {
  if (!positive_finite(bandwidth)) throw ValidationError("bandwidth must be positive");
  if (!positive_finite(duration)) throw ValidationError("chirp duration must be positive");
  if (!positive_finite(carrier)) throw ValidationError("carrier frequency must be positive");
  if (n_samples < 16 || !is_power_of_two(static_cast<std::size_t>(n_samples))) {
    throw ValidationError("n_samples must be a power of two >= 16 (got " +
                          std::to_string(n_samples) + ")");
  }
  if (zero_pad < 1 || !is_power_of_two(static_cast<std::size_t>(zero_pad))) {
    throw ValidationError("zero_pad must be a power of two >= 1");
  }
}

void CfarConfig::validate() const {
  if (n_train < 1) throw ValidationError("cfar n_train must be at least 1");
  if (n_guard < 0) throw ValidationError("cfar n_guard must be non-negative");
  if (!(pfa > 0.0 && pfa < 0.5)) throw ValidationError("cfar pfa must lie in (0, 0.5)");
}

BeatSignal synthesize_beat(const ChirpConfig& config, std::span<const Target> targets,
                           std::optional<double> snr_db, std::uint64_t seed) {
  config.validate();
  const double r_max = config.max_range();
  double strongest = 0.0;
  for (const Target& t : targets) {
    if (!positive_finite(t.range)) throw ValidationError("target range must be positive");
    if (!positive_finite(t.amplitude)) throw ValidationError("target amplitude must be positive");
    if (t.range >= r_max) {
      throw RangeAliased("range " + std::to_string(t.range) + " m exceeds the unaliased maximum " +
                         std::to_string(r_max) + " m");
    }
    strongest = std::max(strongest, t.amplitude);
  }

  const auto m = static_cast<std::size_t>(config.n_samples);
  const double fs = config.sample_rate();
  BeatSignal out{std::vector<double>(m, 0.0), config};

  for (const Target& t : targets) {
    const double delay = 2.0 * t.range / kSpeedOfLight;
    const double beat = config.slope() * delay;
    const double phase0 = kTwoPi * config.carrier * delay;
    for (std::size_t n = 0; n < m; ++n) {
      out.samples[n] += 0.5 * t.amplitude *
                        std::cos(kTwoPi * beat * static_cast<double>(n) / fs + phase0);
    }
  }

  if (snr_db) {
    const double ref = targets.empty() ? 1.0 : strongest;
    const double variance = (ref * ref / 8.0) / std::pow(10.0, *snr_db / 10.0);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, std::sqrt(variance));
    for (double& s : out.samples) s += noise(rng);
  }
  return out;
}

RangeSpectrum range_spectrum(const BeatSignal& signal) {
  const ChirpConfig& cfg = signal.config;
  cfg.validate();
  const std::size_t m = signal.samples.size();
  if (m != static_cast<std::size_t>(cfg.n_samples)) {
    throw ValidationError("beat signal length does not match n_samples");
  }
  const std::size_t n = m * static_cast<std::size_t>(cfg.zero_pad);

  std::vector<std::complex<double>> buf(n);
  for (std::size_t i = 0; i < m; ++i) {
    double w = 1.0;
    if (cfg.window == Window::hann) {
      w = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(m)));
    }
    buf[i] = signal.samples[i] * w;
  }
  fft_inplace(buf);

  RangeSpectrum out;
  out.bin_width_m = cfg.bin_width();
  out.magnitude_sq.resize(n / 2 + 1);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k <= n / 2; ++k) out.magnitude_sq[k] = std::norm(buf[k]) * scale;
  return out;
}

double spectrum_energy(const RangeSpectrum& spectrum) noexcept {
  const auto& p = spectrum.magnitude_sq;
  if (p.empty()) return 0.0;
  if (p.size() == 1) return p.front();
  double interior = 0.0;
  for (std::size_t k = 1; k + 1 < p.size(); ++k) interior += p[k];
  return p.front() + 2.0 * interior + p.back();
}

double cfar_scale(int training_cells, double pfa) noexcept {
  const double t = training_cells;
  return t * (std::pow(pfa, -1.0 / t) - 1.0);
}

std::vector<Detection> cfar_detect(const RangeSpectrum& spectrum, const CfarConfig& cfar) {
  cfar.validate();
  const auto& p = spectrum.magnitude_sq;
  const std::size_t n = p.size();
  const auto train = static_cast<std::size_t>(cfar.n_train);
  const auto guard = static_cast<std::size_t>(cfar.n_guard);
  if (n <= 2 * (train + guard) + 1) {
    throw WindowTooLarge("spectrum of " + std::to_string(n) + " bins is too short for " +
                         std::to_string(train) + " training and " + std::to_string(guard) +
                         " guard cells per side");
  }

  // Prefix sums in long double keep the window sums exact enough for 1e6 cells.
  std::vector<long double> prefix(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + p[i];
  auto window_sum = [&](std::size_t lo, std::size_t hi) {  // [lo, hi)
    return static_cast<double>(prefix[hi] - prefix[lo]);
  };

  std::vector<Detection> hits;
  const double lowest = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i > 0 ? p[i - 1] : lowest;
    const double right = i + 1 < n ? p[i + 1] : lowest;
    if (!(p[i] > left && p[i] >= right)) continue;

    double sum = 0.0;
    std::size_t used = 0;
    if (i >= guard + 1) {
      const std::size_t hi = i - guard;
      const std::size_t lo = hi >= train ? hi - train : 0;
      sum += window_sum(lo, hi);
      used += hi - lo;
    }
    if (i + guard + 1 < n) {
      const std::size_t lo = i + guard + 1;
      const std::size_t hi = std::min(n, lo + train);
      sum += window_sum(lo, hi);
      used += hi - lo;
    }
    if (used == 0) continue;

    const double threshold = cfar_scale(static_cast<int>(used), cfar.pfa) * sum / used;
    if (p[i] > threshold) {
      hits.push_back({i, static_cast<double>(i) * spectrum.bin_width_m, p[i]});
    }
  }

  std::stable_sort(hits.begin(), hits.end(),
                   [](const Detection& x, const Detection& y) { return x.power > y.power; });
  return hits;
}

Detection estimate_range(const ChirpConfig& config, std::span<const Target> targets,
                         std::optional<double> snr_db, std::uint64_t seed,
                         const CfarConfig& cfar) {
  const auto hits = cfar_detect(range_spectrum(synthesize_beat(config, targets, snr_db, seed)), cfar);
  if (hits.empty()) throw NoDetection("CFAR produced no detections");
  return hits.front();
}

}  // namespace radarloc
