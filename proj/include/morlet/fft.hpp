#pragma once

// Thin RAII layer over FFTW's complex 1-D transform.

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <vector>

#include "morlet/matrix.hpp"

namespace morlet::fft {

enum class Direction { forward, backward };

namespace detail {

// FFTW planning touches global state; execution of distinct plans does not.
inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(fftw_complex* p) const noexcept { fftw_free(p); }
};

}  // namespace detail

/// Owns a plan together with its aligned in/out buffers. Not shareable
/// between threads; create one per thread.
class Plan {
 public:
  Plan(std::size_t n, Direction dir) : n_(n) {
    if (n == 0) throw std::invalid_argument("fft::Plan: zero length");
    in_.reset(fftw_alloc_complex(n));
    out_.reset(fftw_alloc_complex(n));
    if (!in_ || !out_) throw std::bad_alloc();
    std::lock_guard lock(detail::planner_mutex());
    plan_ = fftw_plan_dft_1d(static_cast<int>(n), in_.get(), out_.get(),
                             dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD,
                             FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("fft::Plan: planner failed");
  }

  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  ~Plan() {
    std::lock_guard lock(detail::planner_mutex());
    fftw_destroy_plan(plan_);
  }

  std::size_t size() const noexcept { return n_; }

  /// Unnormalized transform of `in` into `out` (both of length size()).
  void execute(std::span<const cdouble> in, std::span<cdouble> out) {
    auto* buf = reinterpret_cast<cdouble*>(in_.get());
    std::copy(in.begin(), in.end(), buf);
    fftw_execute(plan_);
    const auto* res = reinterpret_cast<const cdouble*>(out_.get());
    std::copy(res, res + n_, out.begin());
  }

 private:
  std::size_t n_;
  std::unique_ptr<fftw_complex, detail::FftwFree> in_;
  std::unique_ptr<fftw_complex, detail::FftwFree> out_;
  fftw_plan plan_ = nullptr;
};

/// Forward DFT, X[k] = sum_j x[j] exp(-2 pi i jk/N).
inline std::vector<cdouble> forward(std::span<const cdouble> x) {
  std::vector<cdouble> out(x.size());
  Plan(x.size(), Direction::forward).execute(x, out);
  return out;
}

/// Inverse DFT including the 1/N factor.
inline std::vector<cdouble> inverse(std::span<const cdouble> spectrum) {
  std::vector<cdouble> out(spectrum.size());
  Plan(spectrum.size(), Direction::backward).execute(spectrum, out);
  const double scale = 1.0 / static_cast<double>(spectrum.size());
  for (auto& v : out) v *= scale;
  return out;
}

inline std::vector<cdouble> forward(std::span<const double> x) {
  std::vector<cdouble> c(x.begin(), x.end());
  return forward(std::span<const cdouble>(c));
}

}  // namespace morlet::fft
