#include "eegtl/preprocess.hpp"

#include <cmath>
#include <string>

#include "eegtl/errors.hpp"

namespace eegtl {

namespace {

using Cplx = std::complex<double>;

/// Bilinear transform of an analog pole: z = (2fs + s) / (2fs - s).
Cplx bilinear(Cplx s, double fs) { return (2.0 * fs + s) / (2.0 * fs - s); }

/// Build one section from a digital pole pair (either a conjugate pair or
/// two real poles). Numerator is (1 - z^-2): one zero at z = 1, one at
/// z = -1, gain applied later.
Biquad section_from_poles(Cplx z1, Cplx z2) {
  Biquad s;
  s.b0 = 1.0;
  s.b1 = 0.0;
  s.b2 = -1.0;
  s.a1 = -(z1 + z2).real();
  s.a2 = (z1 * z2).real();
  return s;
}

Cplx section_response(const Biquad& s, double theta) {
  Cplx zi = std::exp(Cplx(0.0, -theta));
  return (s.b0 + s.b1 * zi + s.b2 * zi * zi) /
         (1.0 + s.a1 * zi + s.a2 * zi * zi);
}

}  // namespace

BandpassFilter::BandpassFilter(double low_hz, double high_hz, double fs_hz,
                               int order)
    : fs_(fs_hz) {
  if (!(fs_hz > 0.0) || !(low_hz > 0.0) || !(low_hz < high_hz) ||
      !(high_hz < 0.5 * fs_hz)) {
    throw InvalidArgumentError(
        "bandpass: invalid band [" + std::to_string(low_hz) + ", " +
        std::to_string(high_hz) + "] Hz at fs " + std::to_string(fs_hz) +
        " (need 0 < low < high < fs/2)");
  }
  if (order < 1) {
    throw InvalidArgumentError("bandpass: order must be >= 1, got " +
                               std::to_string(order));
  }

  // Pre-warp the band edges so the bilinear transform lands them exactly.
  const double w1 = 2.0 * fs_hz * std::tan(M_PI * low_hz / fs_hz);
  const double w2 = 2.0 * fs_hz * std::tan(M_PI * high_hz / fs_hz);
  const double bw = w2 - w1;
  const double w0 = std::sqrt(w1 * w2);

  // Analog Butterworth prototype poles, one representative per conjugate
  // pair (upper half plane) plus the real pole when the order is odd.
  for (int k = 1; k <= order; ++k) {
    double theta = M_PI * (2.0 * k + order - 1.0) / (2.0 * order);
    Cplx p(std::cos(theta), std::sin(theta));
    if (p.imag() < -1e-12) continue;

    // Low-pass to band-pass: each prototype pole p satisfies
    // s^2 - p*bw*s + w0^2 = 0, giving two band-pass poles.
    Cplx pb = p * bw;
    Cplx disc = std::sqrt(pb * pb - 4.0 * w0 * w0);
    Cplx s_hi = 0.5 * (pb + disc);
    Cplx s_lo = 0.5 * (pb - disc);

    if (std::abs(p.imag()) <= 1e-12) {
      // Real prototype pole: its two band-pass images form one section.
      sections_.push_back(
          section_from_poles(bilinear(s_hi, fs_hz), bilinear(s_lo, fs_hz)));
    } else {
      // Complex pole: each image pairs with its conjugate (which descends
      // from the conjugate prototype pole), one section per image.
      Cplx z_hi = bilinear(s_hi, fs_hz);
      Cplx z_lo = bilinear(s_lo, fs_hz);
      sections_.push_back(section_from_poles(z_hi, std::conj(z_hi)));
      sections_.push_back(section_from_poles(z_lo, std::conj(z_lo)));
    }
  }

  // Normalize each section to unit gain at the digital image of the analog
  // center frequency; the cascade then has unit gain there, matching the
  // analog Butterworth magnitude.
  double theta0 = 2.0 * std::atan(w0 / (2.0 * fs_hz));
  for (Biquad& s : sections_) {
    double g = std::abs(section_response(s, theta0));
    s.b0 /= g;
    s.b1 /= g;
    s.b2 /= g;
  }
}

std::complex<double> BandpassFilter::response(double freq_hz) const {
  double theta = 2.0 * M_PI * freq_hz / fs_;
  Cplx h(1.0, 0.0);
  for (const Biquad& s : sections_) h *= section_response(s, theta);
  return h;
}

Vec BandpassFilter::apply(const Vec& x) const {
  Vec y = x;
  for (const Biquad& s : sections_) {
    // Direct form II transposed, zero initial state: the filter is causal
    // and output before the transient settles is part of the contract.
    double w1 = 0.0, w2 = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      double xi = y[i];
      double yi = s.b0 * xi + w1;
      w1 = s.b1 * xi - s.a1 * yi + w2;
      w2 = s.b2 * xi - s.a2 * yi;
      y[i] = yi;
    }
  }
  return y;
}

Mat BandpassFilter::apply(const Mat& channels) const {
  Mat out(channels.rows(), channels.cols());
  for (Eigen::Index ch = 0; ch < channels.rows(); ++ch) {
    out.row(ch) = apply(Vec(channels.row(ch))).transpose();
  }
  return out;
}

std::vector<Trial> bandpass(const std::vector<Trial>& trials, double low_hz,
                            double high_hz, double fs_hz, int order) {
  BandpassFilter filter(low_hz, high_hz, fs_hz, order);
  std::vector<Trial> out;
  out.reserve(trials.size());
  for (const Trial& tr : trials) {
    out.push_back({filter.apply(tr.data), tr.label});
  }
  return out;
}

TrialSet bandpass(const TrialSet& set, double low_hz, double high_hz,
                  int order) {
  TrialSet out = set;
  out.trials = bandpass(set.trials, low_hz, high_hz, set.fs_hz, order);
  return out;
}

std::vector<Mat> epoch(const Mat& recording, double fs_hz,
                       const std::vector<Eigen::Index>& onsets,
                       double t_start_s, double t_end_s) {
  if (!(fs_hz > 0.0)) {
    throw InvalidArgumentError("epoch: fs must be positive");
  }
  if (!(t_end_s > t_start_s)) {
    throw InvalidArgumentError("epoch: window end " + std::to_string(t_end_s) +
                               " not after start " + std::to_string(t_start_s));
  }
  // Half-away-from-zero rounding on both the offset and the width; the
  // width is rounded once from the window duration so every trial has the
  // same number of samples regardless of the offset rounding.
  const Eigen::Index offset = std::lround(t_start_s * fs_hz);
  const Eigen::Index width = std::lround((t_end_s - t_start_s) * fs_hz);
  if (width < 2) {
    throw InvalidArgumentError("epoch: window of " + std::to_string(width) +
                               " samples is too short");
  }
  std::vector<Mat> out;
  out.reserve(onsets.size());
  for (Eigen::Index onset : onsets) {
    Eigen::Index start = onset + offset;
    if (start < 0 || start + width > recording.cols()) {
      throw InvalidArgumentError(
          "epoch: window [" + std::to_string(start) + ", " +
          std::to_string(start + width) + ") out of bounds for recording of " +
          std::to_string(recording.cols()) + " samples");
    }
    out.push_back(recording.middleCols(start, width));
  }
  return out;
}

}  // namespace eegtl
