#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace eegsz::detail {

/// Real-input DFT of a fixed length, backed by FFTW.
///
/// Plans are created once (planning is serialized internally); `forward`
/// and `inverse` may be called concurrently from several threads.
class RealFft {
 public:
  explicit RealFft(std::size_t n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  std::size_t size() const noexcept { return n_; }
  std::size_t spectrum_size() const noexcept { return n_ / 2 + 1; }

  /// Unnormalized forward transform: n real samples -> n/2+1 bins.
  std::vector<std::complex<double>> forward(std::span<const double> samples) const;

  /// Unnormalized inverse transform: n/2+1 bins -> n real samples (scaled by n).
  std::vector<double> inverse(std::span<const std::complex<double>> spectrum) const;

 private:
  struct Plans;
  std::size_t n_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace eegsz::detail
