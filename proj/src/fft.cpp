#include "nlkg/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

#include "nlkg/errors.hpp"

namespace nlkg::fft {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, pair] : plans_) {
      fftw_destroy_plan(pair.forward);
      fftw_destroy_plan(pair.backward);
    }
  }

  const PlanPair& get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> a(n), b(n);
    auto* in = reinterpret_cast<fftw_complex*>(a.data());
    auto* out = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair pair;
    pair.forward = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, flags);
    pair.backward = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, flags);
    return plans_.emplace(n, pair).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

void check(std::size_t a, std::size_t b) {
  if (a != b) fail(ErrorKind::dimension, "fft: input/output length mismatch");
}

}  // namespace

void forward(std::span<const std::complex<double>> in,
             std::span<std::complex<double>> out) {
  check(in.size(), out.size());
  const auto& plan = cache().get(static_cast<int>(in.size()));
  if (in.data() == out.data()) {
    std::vector<std::complex<double>> copy(in.begin(), in.end());
    forward(copy, out);
    return;
  }
  // FFTW does not modify the input of an out-of-place complex transform.
  auto* src = reinterpret_cast<fftw_complex*>(
      const_cast<std::complex<double>*>(in.data()));
  fftw_execute_dft(plan.forward, src,
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void inverse(std::span<const std::complex<double>> in,
             std::span<std::complex<double>> out) {
  check(in.size(), out.size());
  const auto& plan = cache().get(static_cast<int>(in.size()));
  if (in.data() == out.data()) {
    std::vector<std::complex<double>> copy(in.begin(), in.end());
    inverse(copy, out);
    return;
  }
  auto* src = reinterpret_cast<fftw_complex*>(
      const_cast<std::complex<double>*>(in.data()));
  fftw_execute_dft(plan.backward, src,
                   reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(in.size());
  for (auto& z : out) z *= scale;
}

}  // namespace nlkg::fft
