#include "eegsz/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "eegsz/error.hpp"
#include "eegsz/format.hpp"
#include "fft.hpp"

namespace eegsz {

double compute_lambda(std::span<const double> cutoffs_hz, double nyquist_hz) {
  if (cutoffs_hz.empty()) throw InvalidArgument("compute_lambda: no boundaries");
  if (!(cutoffs_hz.front() > 0.0)) {
    throw InvalidArgument("compute_lambda: boundaries must be positive");
  }
  double lambda = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cutoffs_hz.size(); ++i) {
    const double lo = cutoffs_hz[i];
    const double hi = i + 1 < cutoffs_hz.size() ? cutoffs_hz[i + 1] : nyquist_hz;
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
      throw InvalidArgument("compute_lambda: boundaries must increase strictly and stay below Nyquist");
    }
    lambda = std::min(lambda, (hi - lo) / (hi + lo));
  }
  return lambda;
}

double beta_transition(double y) {
  if (std::isnan(y)) throw InvalidArgument("beta_transition: NaN input");
  if (y <= 0.0) return 0.0;
  if (y >= 1.0) return 1.0;
  const double y4 = (y * y) * (y * y);
  return y4 * (35.0 + y * (-84.0 + y * (70.0 - 20.0 * y)));
}

BoundarySet BoundarySet::for_sampling_rate(double fs,
                                           const std::array<double, kRhythmCount>& cutoffs_hz) {
  if (!(fs > 0.0)) throw InvalidArgument("sampling rate must be positive");
  BoundarySet b;
  b.cutoffs_hz = cutoffs_hz;
  b.nyquist_hz = fs / 2.0;
  b.lambda = compute_lambda(b.cutoffs_hz, b.nyquist_hz);
  return b;
}

void BoundarySet::validate() const {
  const double limit = compute_lambda(cutoffs_hz, nyquist_hz);
  if (!(lambda > 0.0) || lambda > limit * (1.0 + 1e-12)) {
    throw InvalidArgument("lambda must lie in (0, " + format_double(limit) + "]");
  }
}

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

// Position of |f| inside the transition band centred on boundary w.
double transition_coordinate(double f, double w, double lambda) {
  return (f - (1.0 - lambda) * w) / (2.0 * lambda * w);
}

double scaling_response(double f, double w1, double lambda) {
  if (f <= (1.0 - lambda) * w1) return 1.0;
  if (f <= (1.0 + lambda) * w1) {
    return std::cos(kHalfPi * beta_transition(transition_coordinate(f, w1, lambda)));
  }
  return 0.0;
}

double wavelet_response(double f, double lo, double hi, double lambda) {
  if (f >= (1.0 + lambda) * lo && f <= (1.0 - lambda) * hi) return 1.0;
  if (f >= (1.0 - lambda) * hi && f <= (1.0 + lambda) * hi) {
    return std::cos(kHalfPi * beta_transition(transition_coordinate(f, hi, lambda)));
  }
  if (f >= (1.0 - lambda) * lo && f <= (1.0 + lambda) * lo) {
    return std::sin(kHalfPi * beta_transition(transition_coordinate(f, lo, lambda)));
  }
  return 0.0;
}

}  // namespace

FilterBank::FilterBank(double fs, std::size_t n_fft, const BoundarySet& boundaries)
    : fs_(fs), n_fft_(n_fft), boundaries_(boundaries) {
  if (!(fs > 0.0) || !std::isfinite(fs)) throw InvalidArgument("sampling rate must be positive");
  if (n_fft < 2) throw InvalidArgument("n_fft must be at least 2");
  boundaries_.validate();

  const auto& w = boundaries_.cutoffs_hz;
  const double lambda = boundaries_.lambda;
  const double top = w.back() * (1.0 + lambda);
  if (top > fs / 2.0) {
    throw InvalidArgument("gamma transition band (up to " + format_double(top) +
                          " Hz) exceeds the Nyquist frequency " + format_double(fs / 2.0) + " Hz");
  }

  for (auto& r : responses_) r.assign(n_fft_, 0.0);
  for (std::size_t k = 0; k < n_fft_; ++k) {
    const double f = bin_frequency(k);
    responses_[0][k] = scaling_response(f, w[0], lambda);
    for (std::size_t band = 1; band < kRhythmCount; ++band) {
      responses_[band][k] = wavelet_response(f, w[band - 1], w[band], lambda);
    }
  }
  fft_ = std::make_shared<const detail::RealFft>(n_fft_);
}

double FilterBank::bin_frequency(std::size_t bin) const noexcept {
  const std::size_t folded = std::min(bin % n_fft_, n_fft_ - bin % n_fft_);
  return static_cast<double>(folded) * fs_ / static_cast<double>(n_fft_);
}

FilterBank build_filter_bank(double fs, std::size_t n_fft, const BoundarySet& boundaries) {
  return FilterBank(fs, n_fft, boundaries);
}

RhythmSet decompose(std::span<const double> samples, const FilterBank& bank) {
  if (samples.size() != bank.n_fft()) {
    throw InvalidArgument("decompose: signal length " + std::to_string(samples.size()) +
                          " does not match filter bank length " + std::to_string(bank.n_fft()));
  }
  for (double v : samples) {
    if (!std::isfinite(v)) throw InvalidArgument("decompose: non-finite sample");
  }

  const auto& fft = bank.fft();
  const auto spectrum = fft.forward(samples);
  const double scale = 1.0 / static_cast<double>(bank.n_fft());

  RhythmSet out;
  std::vector<std::complex<double>> filtered(spectrum.size());
  for (Rhythm r : kAllRhythms) {
    const auto response = bank.response(r);
    for (std::size_t k = 0; k < spectrum.size(); ++k) filtered[k] = spectrum[k] * response[k];
    auto band = fft.inverse(filtered);
    for (double& v : band) v *= scale;
    out[r] = std::move(band);
  }
  return out;
}

RhythmSet decompose(const Signal& signal, const FilterBank& bank) {
  signal.validate();
  return decompose(std::span<const double>(signal.samples), bank);
}

std::array<double, kRhythmCount> band_energies(const RhythmSet& rhythms) {
  std::array<double, kRhythmCount> energy{};
  for (Rhythm r : kAllRhythms) {
    for (double v : rhythms[r]) energy[index_of(r)] += v * v;
  }
  return energy;
}

std::string filter_bank_csv(const FilterBank& bank) {
  std::ostringstream out;
  out << "bin,hz";
  for (Rhythm r : kAllRhythms) out << ',' << rhythm_name(r);
  out << '\n';
  for (std::size_t k = 0; k <= bank.n_fft() / 2; ++k) {
    out << k << ',' << format_double(bank.bin_frequency(k));
    for (Rhythm r : kAllRhythms) out << ',' << format_double(bank.response(r)[k]);
    out << '\n';
  }
  return out.str();
}

std::string rhythms_csv(const RhythmSet& rhythms) {
  std::ostringstream out;
  for (Rhythm r : kAllRhythms) out << (r == Rhythm::delta ? "" : ",") << rhythm_name(r);
  out << '\n';
  for (std::size_t i = 0; i < rhythms.length(); ++i) {
    for (Rhythm r : kAllRhythms) {
      out << (r == Rhythm::delta ? "" : ",") << format_double(rhythms[r][i]);
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace eegsz
