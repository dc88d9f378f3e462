#pragma once

#include <optional>
#include <vector>

#include "diracops/core.hpp"
#include "diracops/operators.hpp"

namespace diracops {

enum class RadialProfile { delta_ring, gaussian_annulus };

struct BeamParameters {
  double E = 2.0;
  double m = 1.0;
  double theta0 = 0.5;
  int ell = 0;
  PolarizationSpinor w = PolarizationSpinor::up();
  RadialProfile profile = RadialProfile::delta_ring;
  double sigma_over_kappa = 0.05;  // annulus width relative to its center
  int n_phi = 256;                 // power of two, >= 64
  int n_radial = 64;               // annulus only
};

/// Mass-shell angular spectrum of a monochromatic vortex beam. All samples
/// share the energy E; amplitudes carry the vortex phase and are normalized
/// so the quadrature norm is exactly one.
struct BeamSpectrum {
  BeamParameters params;
  double p = 0.0;      // |p| on the shell
  double kappa = 0.0;  // transverse momentum of the cone
  int n_r = 1;
  int n_phi = 0;
  std::vector<double> radial_nodes;    // p_perp per radial index
  std::vector<double> radial_weights;  // quadrature weight incl. p_perp d_phi
  std::vector<Kinematics> kins;        // row-major [r * n_phi + c]
  std::vector<Vec4c> amps;

  bool is_ring() const { return params.profile == RadialProfile::delta_ring; }
  double weight(int r) const { return radial_weights[r]; }
  const Kinematics& kin(int r, int c) const { return kins[r * n_phi + c]; }
  const Vec4c& amp(int r, int c) const { return amps[r * n_phi + c]; }
  double phi(int c) const;
};

BeamSpectrum build_spectrum(const BeamParameters& params);

/// Quadrature norm of the spectrum (should be 1 after construction).
double spectrum_norm(const BeamSpectrum& beam);

/// Expectation value over the beam. Azimuthal derivative parts use spectral
/// FFT differentiation; radial derivatives need the annulus profile and are
/// rejected on a delta ring. FW-tagged operators see the FW-transformed
/// spectrum.
cplx expectation(const MomentumOperator& op, const BeamSpectrum& beam);
cplx expectation(const SpinOperator& op, const BeamSpectrum& beam);
cplx expectation(const MatrixFunction& fn, const BeamSpectrum& beam);

enum class Family { canonical, projected, nwfw };
const char* family_name(Family f);

struct ObservableSummary {
  Family family = Family::canonical;
  double Sz = 0.0;
  double Lz = 0.0;
  double Jz = 0.0;
  double Delta = 0.0;  // (1 - m/E) sin^2(theta0)
};

ObservableSummary family_summary(const BeamSpectrum& beam, Family family);
std::vector<ObservableSummary> all_family_summaries(const BeamSpectrum& beam);

/// Largest difference between the standard-representation route and the
/// FW-transformed-spectrum route for the NWFW Sz and Lz.
double nwfw_route_deviation(const BeamSpectrum& beam);

/// W^dag S W for a plane wave.
Vec3 plane_wave_spin(const Kinematics& kin, const PolarizationSpinor& w);
/// (m/E)<s> + (p.<s>) p / (E(E+m)), the boosted rest-frame spin.
Vec3 plane_wave_spin_closed_form(const Kinematics& kin, const PolarizationSpinor& w);

/// <(r x alpha)_z>, the magnetic-moment-per-charge component along the beam
/// axis. Requires the annulus profile.
double magnetic_moment_z(const BeamSpectrum& beam);

enum class CentroidKind { probability, energy };

/// Transverse centroid of the beam observed from a frame moving with
/// transverse velocity v, evaluated on the zero-time slice of that frame.
/// Probability uses <i grad_p'>, energy uses <N>/<H>.
Eigen::Vector2d boosted_centroid(const BeamSpectrum& beam, const Vec3& v,
                                 CentroidKind kind);

struct ComponentSynthesis {
  std::vector<double> radii;
  int n_angle = 0;
  std::array<std::vector<cplx>, 4> fields;  // [ir * n_angle + ia]
  std::array<std::optional<int>, 4> windings;
  double global_max = 0.0;
};

/// Real-space bispinor components on circles of the given radii (z = 0
/// plane), with per-component phase winding numbers. Windings are extracted
/// on the circle of each component's radial maximum and only where the
/// component exceeds 1e-6 of the global maximum.
ComponentSynthesis synthesize_components(const BeamSpectrum& beam,
                                         const std::vector<double>& radii,
                                         int n_angle = 512);

struct ZitterOptions {
  double sigma = 1e-3;         // momentum width of the embedding packet
  int n_q = 512;               // momentum samples
  int n_t = 2048;              // time samples
  int samples_per_period = 16; // of the expected 2E oscillation
};

struct ZitterTrace {
  std::vector<double> times;
  std::vector<double> canonical;  // centroid along the motion axis
  std::vector<double> projected;  // same with the projected position
  double slope_canonical = 0.0;
  double resid_canonical = 0.0;
  double slope_projected = 0.0;
  double resid_projected = 0.0;
  double peak_frequency = 0.0;          // FFT peak of the detrended trace
  double oscillation_amplitude = 0.0;   // max |detrended|
  double expected_frequency = 0.0;      // 2E at the packet center
};

/// Centroid time series for an electron/positron superposition at a single
/// momentum, embedded in a narrow Gaussian packet along the motion axis.
ZitterTrace zitterbewegung_trace(const Kinematics& kin, const Vec2c& mix,
                                 const ZitterOptions& opt = {});

}  // namespace diracops
