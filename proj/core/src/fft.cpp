#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>
#include <new>

#include "eegsz/error.hpp"

namespace eegsz::detail {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

template <typename T>
struct FftwFree {
  void operator()(T* p) const noexcept { fftw_free(p); }
};

template <typename T>
using FftwBuffer = std::unique_ptr<T[], FftwFree<T>>;

template <typename T>
FftwBuffer<T> fftw_alloc(std::size_t count) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(count, 1)));
  if (p == nullptr) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

}  // namespace

struct RealFft::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

RealFft::RealFft(std::size_t n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n < 2) throw InvalidArgument("FFT length must be at least 2");
  auto real = fftw_alloc<double>(n);
  auto cplx = fftw_alloc<fftw_complex>(n / 2 + 1);
  const int len = static_cast<int>(n);
  std::lock_guard lock(planner_mutex());
  plans_->forward = fftw_plan_dft_r2c_1d(len, real.get(), cplx.get(), FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_dft_c2r_1d(len, cplx.get(), real.get(), FFTW_ESTIMATE);
  if (plans_->forward == nullptr || plans_->inverse == nullptr) {
    throw Error("FFTW planning failed for length " + std::to_string(n));
  }
}

RealFft::~RealFft() {
  std::lock_guard lock(planner_mutex());
  if (plans_->forward != nullptr) fftw_destroy_plan(plans_->forward);
  if (plans_->inverse != nullptr) fftw_destroy_plan(plans_->inverse);
}

std::vector<std::complex<double>> RealFft::forward(std::span<const double> samples) const {
  if (samples.size() != n_) throw InvalidArgument("FFT input length mismatch");
  auto real = fftw_alloc<double>(n_);
  auto cplx = fftw_alloc<fftw_complex>(spectrum_size());
  std::copy(samples.begin(), samples.end(), real.get());
  fftw_execute_dft_r2c(plans_->forward, real.get(), cplx.get());

  std::vector<std::complex<double>> out(spectrum_size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {cplx[k][0], cplx[k][1]};
  return out;
}

std::vector<double> RealFft::inverse(std::span<const std::complex<double>> spectrum) const {
  if (spectrum.size() != spectrum_size()) throw InvalidArgument("FFT spectrum length mismatch");
  auto real = fftw_alloc<double>(n_);
  auto cplx = fftw_alloc<fftw_complex>(spectrum_size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    cplx[k][0] = spectrum[k].real();
    cplx[k][1] = spectrum[k].imag();
  }
  // c2r destroys its input; the buffer is ours.
  fftw_execute_dft_c2r(plans_->inverse, cplx.get(), real.get());
  return std::vector<double>(real.get(), real.get() + n_);
}

}  // namespace eegsz::detail
