#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace diracops {

/// Gauss-Legendre nodes and weights on [a, b].
struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};
Quadrature gauss_legendre(int n, double a, double b);

/// Spectral differentiation matrix on the Gauss-Legendre nodes, built from
/// barycentric weights. Exact for polynomials of degree < n.
Eigen::MatrixXd differentiation_matrix(const std::vector<double>& nodes);

/// In-place complex FFT, sign -1 forward / +1 backward (unscaled, FFTW
/// convention). Thread-safe via an internal plan lock.
void fft(std::vector<std::complex<double>>& data, int sign);

/// d/dphi of a periodic sequence sampled at phi_j = 2 pi j / n, by FFT.
std::vector<std::complex<double>> spectral_phi_derivative(
    const std::vector<std::complex<double>>& samples);

/// Splitmix64; used instead of std::uniform distributions so that sampled
/// momenta are bit-identical across platforms.
class DeterministicRng {
 public:
  explicit DeterministicRng(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next_u64();
  double next_unit();  // [0, 1)
 private:
  std::uint64_t state_;
};

/// Momenta log-uniform in |p| over [pmin, pmax], uniform directions.
std::vector<Eigen::Vector3d> sample_momenta(int n, std::uint64_t seed,
                                            double pmin = 1e-2, double pmax = 1e2);

/// Runs fn(i) for i in [0, n). Worker count is capped by the
/// DIRAC_OPS_THREADS environment variable. Results must be written by index;
/// chunking is deterministic so output never depends on the thread count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

int worker_count();

/// Pairwise (cascade) summation, bit-stable reduction order.
double pairwise_sum(const std::vector<double>& v);
std::complex<double> pairwise_sum(const std::vector<std::complex<double>>& v);

}  // namespace diracops
