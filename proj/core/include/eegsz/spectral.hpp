#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "eegsz/dataset.hpp"
#include "eegsz/types.hpp"

namespace eegsz {

namespace detail {
class RealFft;
}

/// Upper edges of the delta, theta, alpha, beta and gamma bands, in Hz.
inline constexpr std::array<double, kRhythmCount> kRhythmCutoffsHz{4.0, 8.0, 16.0, 30.0, 60.0};

/// Largest admissible transition ratio for a set of boundaries: the minimum of
/// (f[i+1] - f[i]) / (f[i+1] + f[i]) over consecutive pairs, with the Nyquist
/// frequency appended as the final boundary.
///
/// Throws InvalidArgument unless 0 < f[0] < ... < f[last] < nyquist_hz.
double compute_lambda(std::span<const double> cutoffs_hz, double nyquist_hz);

/// Meyer transition polynomial y^4 (35 - 84y + 70y^2 - 20y^3), clamped to 0
/// below y = 0 and to 1 above y = 1. Satisfies beta(y) + beta(1 - y) = 1.
double beta_transition(double y);

struct BoundarySet {
  std::array<double, kRhythmCount> cutoffs_hz = kRhythmCutoffsHz;
  double nyquist_hz = kBonnSamplingRate / 2.0;
  double lambda = 0.0;

  /// Boundaries for a sampling rate, with lambda at its largest admissible value.
  static BoundarySet for_sampling_rate(double fs,
                                       const std::array<double, kRhythmCount>& cutoffs_hz =
                                           kRhythmCutoffsHz);

  void validate() const;
};

/// Littlewood-Paley / Meyer filter bank on a DFT grid.
///
/// Filter 0 is the scaling function (delta, passband up to the first cutoff);
/// filters 1..4 are wavelets on consecutive cutoff pairs. Responses are real,
/// lie in [0, 1], and are stored for every bin 0..n_fft-1 using |f|, so
/// response(k) == response(n_fft - k). Nothing above cutoff[4]·(1+lambda) is
/// passed by any filter.
///
/// Immutable after construction; copies share the FFT plans.
class FilterBank {
 public:
  FilterBank(double fs, std::size_t n_fft, const BoundarySet& boundaries);

  double fs() const noexcept { return fs_; }
  std::size_t n_fft() const noexcept { return n_fft_; }
  const BoundarySet& boundaries() const noexcept { return boundaries_; }

  /// |f| in Hz represented by DFT bin k.
  double bin_frequency(std::size_t bin) const noexcept;

  std::span<const double> response(Rhythm r) const noexcept { return responses_[index_of(r)]; }
  double response(Rhythm r, std::size_t bin) const { return responses_[index_of(r)].at(bin); }

  const detail::RealFft& fft() const noexcept { return *fft_; }

 private:
  double fs_;
  std::size_t n_fft_;
  BoundarySet boundaries_;
  std::array<std::vector<double>, kRhythmCount> responses_;
  std::shared_ptr<const detail::RealFft> fft_;
};

/// Throws InvalidArgument if n_fft < 2 or the top transition band does not fit
/// below fs/2.
FilterBank build_filter_bank(double fs, std::size_t n_fft, const BoundarySet& boundaries);

/// Five band-limited components of one signal, each as long as the source.
struct RhythmSet {
  std::array<std::vector<double>, kRhythmCount> bands;

  const std::vector<double>& operator[](Rhythm r) const noexcept { return bands[index_of(r)]; }
  std::vector<double>& operator[](Rhythm r) noexcept { return bands[index_of(r)]; }
  std::size_t length() const noexcept { return bands[0].size(); }
};

/// Zero-phase band extraction: each rhythm is the real inverse DFT of the
/// signal spectrum multiplied by that band's response.
RhythmSet decompose(std::span<const double> samples, const FilterBank& bank);
RhythmSet decompose(const Signal& signal, const FilterBank& bank);

/// Sum of squares of each rhythm.
std::array<double, kRhythmCount> band_energies(const RhythmSet& rhythms);

/// "bin,hz,delta,...,gamma" for bins 0..n_fft/2.
std::string filter_bank_csv(const FilterBank& bank);

/// "delta,...,gamma", one row per sample.
std::string rhythms_csv(const RhythmSet& rhythms);

}  // namespace eegsz
