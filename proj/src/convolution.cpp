#include "coopfront/convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "coopfront/errors.hpp"

namespace coop {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

std::size_t fast_size(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 8);; ++m) {
    std::size_t r = m;
    for (std::size_t f : {2u, 3u, 5u})
      while (r % f == 0) r /= f;
    if (r == 1) return m;
  }
}

bool same_spacing(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(a, b); }

}  // namespace

UniformGrid closed_grid(double a, double b, double h) {
  require(b > a, "grid needs b > a");
  require(h > 0.0, "grid spacing must be positive");
  auto cells = static_cast<std::size_t>(std::ceil((b - a) / h - 1e-9));
  cells = std::max<std::size_t>(cells, 1);
  return {a, (b - a) / static_cast<double>(cells), cells + 1};
}

std::vector<double> trapezoid_weights(std::size_t n, double h) {
  std::vector<double> w(n, h);
  if (n > 0) {
    w.front() *= 0.5;
    w.back() *= 0.5;
  }
  if (n == 1) w[0] = 0.0;
  return w;
}

std::vector<double> convolve(const SampledKernel& kernel, const UniformGrid& domain,
                             std::span<const double> w, const UniformGrid& eval) {
  if (!same_spacing(domain.h, kernel.h) || !same_spacing(eval.h, kernel.h))
    fail(ErrorKind::GridMismatch, "field and kernel spacings differ");
  require(w.size() == domain.size, "field size does not match its grid");
  double shift = (eval.origin - domain.origin) / kernel.h;
  long offset = std::lround(shift);
  if (std::abs(shift - static_cast<double>(offset)) > 1e-6)
    fail(ErrorKind::GridMismatch, "evaluation nodes are not aligned with the domain grid");

  std::vector<double> q(w.size());
  std::vector<double> tw = trapezoid_weights(w.size(), kernel.h);
  for (std::size_t j = 0; j < w.size(); ++j) q[j] = tw[j] * w[j];

  long r = static_cast<long>(kernel.radius_nodes);
  long n = static_cast<long>(w.size());
  std::vector<double> out(eval.size, 0.0);
#pragma omp parallel for schedule(static)
  for (long e = 0; e < static_cast<long>(eval.size); ++e) {
    long i = e + offset;
    long lo = std::max(0L, i - r), hi = std::min(n - 1, i + r);
    double s = 0.0;
    for (long j = lo; j <= hi; ++j) s += kernel.at(i - j) * q[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(e)] = s;
  }
  return out;
}

void convolve_serial(const SampledKernel& kernel, std::span<const double> q,
                     std::span<double> out) {
  long r = static_cast<long>(kernel.radius_nodes);
  long n = static_cast<long>(q.size());
  const double* p = kernel.values.data() + r;
  for (long i = 0; i < n; ++i) {
    long lo = std::max(0L, i - r), hi = std::min(n - 1, i + r);
    double s = 0.0;
    for (long j = lo; j <= hi; ++j) s += p[i - j] * q[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = s;
  }
}

void convolve_parallel(const SampledKernel& kernel, std::span<const double> q,
                       std::span<double> out) {
  long r = static_cast<long>(kernel.radius_nodes);
  long n = static_cast<long>(q.size());
  const double* p = kernel.values.data() + r;
  const double* qp = q.data();
  double* op = out.data();
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    long lo = std::max(0L, i - r), hi = std::min(n - 1, i + r);
    double s = 0.0;
    for (long j = lo; j <= hi; ++j) s += p[i - j] * qp[j];
    op[i] = s;
  }
}

struct Convolver::FftState {
  std::size_t m = 0;
  double* real = nullptr;
  fftw_complex* spec = nullptr;
  std::vector<std::complex<double>> kernel_hat;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  ~FftState() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (real) fftw_free(real);
    if (spec) fftw_free(spec);
  }

  void prepare(const SampledKernel& kernel, std::size_t n) {
    std::size_t need = fast_size(n + 2 * kernel.radius_nodes + 1);
    if (need <= m) return;
    // grow geometrically so a slowly widening domain does not replan every step
    std::size_t target = fast_size(std::max(need, m + m / 2));
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
    if (real) fftw_free(real);
    if (spec) fftw_free(spec);
    m = target;
    real = fftw_alloc_real(m);
    spec = fftw_alloc_complex(m / 2 + 1);
    forward = fftw_plan_dft_r2c_1d(static_cast<int>(m), real, spec, FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_1d(static_cast<int>(m), spec, real, FFTW_ESTIMATE);

    std::fill(real, real + m, 0.0);
    long r = static_cast<long>(kernel.radius_nodes);
    for (long k = -r; k <= r; ++k)
      real[static_cast<std::size_t>((k + static_cast<long>(m)) % static_cast<long>(m))] =
          kernel.at(k);
    fftw_execute(forward);
    kernel_hat.resize(m / 2 + 1);
    for (std::size_t i = 0; i < m / 2 + 1; ++i)
      kernel_hat[i] = {spec[i][0] / static_cast<double>(m), spec[i][1] / static_cast<double>(m)};
  }

  void apply(std::span<const double> q, std::span<double> out) {
    std::copy(q.begin(), q.end(), real);
    std::fill(real + q.size(), real + m, 0.0);
    fftw_execute(forward);
    for (std::size_t i = 0; i < m / 2 + 1; ++i) {
      std::complex<double> z(spec[i][0], spec[i][1]);
      z *= kernel_hat[i];
      spec[i][0] = z.real();
      spec[i][1] = z.imag();
    }
    fftw_execute(backward);
    std::copy(real, real + out.size(), out.begin());
  }
};

Convolver::Convolver(const SampledKernel& kernel, ConvolutionMethod method)
    : kernel_(kernel), method_(method) {}

Convolver::~Convolver() = default;
Convolver::Convolver(Convolver&&) noexcept = default;
Convolver& Convolver::operator=(Convolver&&) noexcept = default;

ConvolutionMethod Convolver::resolve(std::size_t n) const {
  if (method_ != ConvolutionMethod::automatic) return method_;
  double band = static_cast<double>(2 * kernel_.radius_nodes + 1);
  double direct = static_cast<double>(n) * band;
  double m = static_cast<double>(fast_size(n + 2 * kernel_.radius_nodes + 1));
  double fft = 6.0 * m * std::log2(m);
  return direct > fft ? ConvolutionMethod::fft : ConvolutionMethod::parallel;
}

void Convolver::apply(std::span<const double> q, std::span<double> out) {
  require(out.size() == q.size(), "convolution output size mismatch");
  if (q.empty()) return;
  switch (resolve(q.size())) {
    case ConvolutionMethod::serial: convolve_serial(kernel_, q, out); return;
    case ConvolutionMethod::fft:
      if (!fft_) fft_ = std::make_unique<FftState>();
      fft_->prepare(kernel_, q.size());
      fft_->apply(q, out);
      return;
    default: convolve_parallel(kernel_, q, out); return;
  }
}

}  // namespace coop
