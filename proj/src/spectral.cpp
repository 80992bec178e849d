#include "qdiff/spectral.hpp"

#include <algorithm>
#include <mutex>
#include <new>

#include "qdiff/errors.hpp"

namespace qdiff {

namespace {
// FFTW planning is not thread-safe; execution of distinct plans is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

SpectralTransform::SpectralTransform(std::size_t n) : n_(n) {
  if (n == 0) throw DomainError("transform size must be positive");
  std::scoped_lock lock(planner_mutex());
  data_ = fftw_alloc_complex(n);
  if (data_ == nullptr) throw std::bad_alloc();
  const int len = static_cast<int>(n);
  fwd_ = fftw_plan_dft_1d(len, data_, data_, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_1d(len, data_, data_, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (fwd_ == nullptr || bwd_ == nullptr) {
    release();
    throw NumericFault("FFTW planning failed");
  }
}

SpectralTransform::~SpectralTransform() {
  if (data_ != nullptr) {
    std::scoped_lock lock(planner_mutex());
    release();
  }
}

void SpectralTransform::release() noexcept {
  if (fwd_) fftw_destroy_plan(fwd_);
  if (bwd_) fftw_destroy_plan(bwd_);
  if (data_) fftw_free(data_);
  fwd_ = bwd_ = nullptr;
  data_ = nullptr;
}

SpectralTransform::SpectralTransform(SpectralTransform&& o) noexcept
    : n_(o.n_), data_(o.data_), fwd_(o.fwd_), bwd_(o.bwd_) {
  o.data_ = nullptr;
  o.fwd_ = o.bwd_ = nullptr;
  o.n_ = 0;
}

SpectralTransform& SpectralTransform::operator=(SpectralTransform&& o) noexcept {
  if (this != &o) {
    if (data_ != nullptr) {
      std::scoped_lock lock(planner_mutex());
      release();
    }
    n_ = o.n_;
    data_ = o.data_;
    fwd_ = o.fwd_;
    bwd_ = o.bwd_;
    o.data_ = nullptr;
    o.fwd_ = o.bwd_ = nullptr;
    o.n_ = 0;
  }
  return *this;
}

std::span<std::complex<double>> SpectralTransform::buffer() noexcept {
  return {reinterpret_cast<std::complex<double>*>(data_), n_};
}

void SpectralTransform::forward() noexcept { fftw_execute(fwd_); }
void SpectralTransform::backward() noexcept { fftw_execute(bwd_); }

void SpectralTransform::forward(std::span<const std::complex<double>> in,
                                std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != n_) throw DomainError("transform size mismatch");
  auto buf = buffer();
  std::copy(in.begin(), in.end(), buf.begin());
  forward();
  std::copy(buf.begin(), buf.end(), out.begin());
}

void SpectralTransform::backward(std::span<const std::complex<double>> in,
                                 std::span<std::complex<double>> out) {
  if (in.size() != n_ || out.size() != n_) throw DomainError("transform size mismatch");
  auto buf = buffer();
  std::copy(in.begin(), in.end(), buf.begin());
  backward();
  const double inv = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j < n_; ++j) out[j] = buf[j] * inv;
}

}  // namespace qdiff
