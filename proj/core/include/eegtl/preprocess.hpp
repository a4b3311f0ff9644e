#pragma once

#include <complex>
#include <vector>

#include "eegtl/trial.hpp"

namespace eegtl {

/// One second-order IIR section, a0 normalized to 1:
///   y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
struct Biquad {
  double b0, b1, b2;
  double a1, a2;
};

/// Causal Butterworth band-pass filter as a cascade of second-order
/// sections. An order-n design has n sections (2n poles). Designed by the
/// standard analog-prototype route: pre-warped band edges, low-pass to
/// band-pass transformation, bilinear transform, with each section's gain
/// normalized to unity at the geometric center frequency.
class BandpassFilter {
 public:
  BandpassFilter(double low_hz, double high_hz, double fs_hz, int order = 4);

  const std::vector<Biquad>& sections() const { return sections_; }
  double fs_hz() const { return fs_; }

  /// Frequency response of the full cascade at the given frequency,
  /// evaluated directly from the section coefficients.
  std::complex<double> response(double freq_hz) const;

  /// Filter one channel forward in time, zero initial conditions.
  Vec apply(const Vec& x) const;

  /// Filter every row of a channels-by-samples matrix independently.
  Mat apply(const Mat& channels) const;

 private:
  std::vector<Biquad> sections_;
  double fs_;
};

/// Band-pass every trial in place-of-copy fashion; labels and metadata pass
/// through untouched.
std::vector<Trial> bandpass(const std::vector<Trial>& trials, double low_hz,
                            double high_hz, double fs_hz, int order = 4);
TrialSet bandpass(const TrialSet& set, double low_hz, double high_hz,
                  int order = 4);

/// Cut a continuous recording into trials. Each onset yields the columns
/// [onset + round(t_start*fs), onset + round(t_start*fs) + t) where
/// t = round((t_end - t_start)*fs); rounding is half-away-from-zero.
/// Throws InvalidArgumentError when a window leaves the recording.
std::vector<Mat> epoch(const Mat& recording, double fs_hz,
                       const std::vector<Eigen::Index>& onsets,
                       double t_start_s, double t_end_s);

}  // namespace eegtl
