#include "diracops/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>

#include <fftw3.h>

namespace diracops {

Quadrature gauss_legendre(int n, double a, double b) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  // Newton iteration on P_n from the three-term recurrence.
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.nodes[n - 1 - i] = 0.5 * (b - a) * x + 0.5 * (a + b);
    q.weights[n - 1 - i] = (b - a) / ((1.0 - x * x) * pp * pp);
  }
  return q;
}

Eigen::MatrixXd differentiation_matrix(const std::vector<double>& nodes) {
  const int n = static_cast<int>(nodes.size());
  // Direct products of node differences overflow for large n, so the
  // barycentric weights are accumulated in log space.
  Eigen::VectorXd loglam(n);
  Eigen::VectorXi sign(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    int sg = 1;
    for (int k = 0; k < n; ++k) {
      if (k == j) continue;
      const double d = nodes[j] - nodes[k];
      s -= std::log(std::abs(d));
      if (d < 0) sg = -sg;
    }
    loglam(j) = s;
    sign(j) = sg;
  }
  Eigen::MatrixXd D(n, n);
  for (int i = 0; i < n; ++i) {
    double rowsum = 0.0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double ratio = sign(j) * sign(i) * std::exp(loglam(j) - loglam(i));
      D(i, j) = ratio / (nodes[i] - nodes[j]);
      rowsum += D(i, j);
    }
    D(i, i) = -rowsum;  // rows of D annihilate constants
  }
  return D;
}

namespace {
std::mutex& fftw_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void fft(std::vector<std::complex<double>>& data, int sign) {
  const int n = static_cast<int>(data.size());
  if (n == 0) return;
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(data.data()),
                            reinterpret_cast<fftw_complex*>(data.data()),
                            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE | FFTW_PRESERVE_INPUT);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex());
    fftw_destroy_plan(plan);
  }
}

std::vector<std::complex<double>> spectral_phi_derivative(
    const std::vector<std::complex<double>>& samples) {
  const int n = static_cast<int>(samples.size());
  std::vector<std::complex<double>> hat = samples;
  fft(hat, -1);
  for (int k = 0; k < n; ++k) {
    int freq = (k <= n / 2) ? k : k - n;
    if (2 * k == n) freq = 0;  // drop the unpaired Nyquist mode
    hat[k] *= std::complex<double>(0.0, static_cast<double>(freq));
  }
  fft(hat, +1);
  const double inv = 1.0 / n;
  for (auto& v : hat) v *= inv;
  return hat;
}

std::uint64_t DeterministicRng::next_u64() {
  state_ += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

double DeterministicRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::vector<Eigen::Vector3d> sample_momenta(int n, std::uint64_t seed, double pmin,
                                            double pmax) {
  DeterministicRng rng(seed);
  std::vector<Eigen::Vector3d> out;
  out.reserve(n);
  const double lmin = std::log(pmin), lmax = std::log(pmax);
  for (int i = 0; i < n; ++i) {
    const double mag = std::exp(lmin + (lmax - lmin) * rng.next_unit());
    const double z = 2.0 * rng.next_unit() - 1.0;
    const double phi = 2.0 * std::numbers::pi * rng.next_unit();
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.emplace_back(mag * s * std::cos(phi), mag * s * std::sin(phi), mag * z);
  }
  return out;
}

int worker_count() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("DIRAC_OPS_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
  }
  return static_cast<int>(hw);
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const int workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace {
template <typename T>
T pairwise_sum_impl(const T* data, std::size_t n) {
  if (n <= 8) {
    T acc{};
    for (std::size_t i = 0; i < n; ++i) acc += data[i];
    return acc;
  }
  const std::size_t half = n / 2;
  return pairwise_sum_impl(data, half) + pairwise_sum_impl(data + half, n - half);
}
}  // namespace

double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum_impl(v.data(), v.size());
}

std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& v) {
  return pairwise_sum_impl(v.data(), v.size());
}

}  // namespace diracops
