#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace qdiff {

/// In-place complex FFT of fixed size backed by FFTW. Plans are created with
/// FFTW_ESTIMATE so results do not depend on timing measurements.
class SpectralTransform {
 public:
  explicit SpectralTransform(std::size_t n);
  ~SpectralTransform();
  SpectralTransform(const SpectralTransform&) = delete;
  SpectralTransform& operator=(const SpectralTransform&) = delete;
  SpectralTransform(SpectralTransform&&) noexcept;
  SpectralTransform& operator=(SpectralTransform&&) noexcept;

  std::size_t size() const noexcept { return n_; }

  /// Work buffer the plans operate on.
  std::span<std::complex<double>> buffer() noexcept;

  /// Unnormalised forward transform of the buffer.
  void forward() noexcept;
  /// Unnormalised inverse transform of the buffer (scales by n).
  void backward() noexcept;

  /// Convenience copy-in/copy-out round: forward transform of `in` into `out`.
  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);
  /// Inverse transform with 1/n normalisation.
  void backward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out);

 private:
  void release() noexcept;

  std::size_t n_ = 0;
  fftw_complex* data_ = nullptr;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

}  // namespace qdiff
