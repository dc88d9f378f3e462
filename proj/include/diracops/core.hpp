#pragma once

#include <array>
#include <complex>
#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace diracops {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using Vec2c = Eigen::Vector2cd;
using Vec3 = Eigen::Vector3d;
using Vec4c = Eigen::Vector4cd;

inline constexpr cplx iu{0.0, 1.0};

/// On-shell kinematic data for one momentum. Natural units, hbar = c = 1.
struct Kinematics {
  Vec3 p;
  double m = 0.0;
  double E = 0.0;
  Vec3 pbar = Vec3::Zero();
  bool pbar_defined = false;

  /// Builds kinematics, rejecting m < 0 and the degenerate m = 0, p = 0 point
  /// where the energy vanishes and H is not invertible.
  static Kinematics of(const Vec3& p, double m);
};

double energy(const Vec3& p, double m);

/// Normalized two-component polarization spinor.
struct PolarizationSpinor {
  Vec2c w;
  static PolarizationSpinor of(const Vec2c& w);
  static PolarizationSpinor up() { return of(Vec2c(1.0, 0.0)); }
  static PolarizationSpinor down() { return of(Vec2c(0.0, 1.0)); }
};

enum class EnergySign { positive, negative };

/// Normalized four-component plane-wave amplitude at fixed momentum.
struct Bispinor {
  Vec4c components;
  Kinematics kinematics;
  EnergySign energy_sign = EnergySign::positive;
};

/// A 4x4 complex-matrix-valued function of momentum. Optional hermiticity and
/// unitarity flags are enforced on every evaluation.
struct MatrixFunction {
  std::string label;
  std::function<Mat4(const Kinematics&)> fn;
  bool hermitian = false;
  bool unitary = false;

  bool empty() const { return !fn; }
  Mat4 operator()(const Kinematics& kin) const;
};

struct DiracConstants {
  std::array<Mat4, 3> alpha;
  Mat4 beta;
  std::array<Mat4, 3> spin;  // S_i = diag(sigma_i, sigma_i)/2
};

const DiracConstants& dirac_constants();

const std::array<Mat2, 3>& pauli_matrices();

Mat4 hamiltonian(const Kinematics& kin);

/// alpha . v for a plain 3-vector.
Mat4 alpha_dot(const Vec3& v);

/// S . v
Mat4 spin_dot(const Vec3& v);

Bispinor plane_wave_bispinor(const Kinematics& kin, const PolarizationSpinor& w);

/// Negative-energy partner state, defined as the inverse FW image of (0, w).
Bispinor negative_energy_bispinor(const Kinematics& kin, const PolarizationSpinor& w);

/// Momentum-dependent unitary that block-diagonalizes H into beta E.
Mat4 fw_unitary(const Kinematics& kin);

/// Positive/negative energy-subspace projectors.
struct Projectors {
  Mat4 plus;
  Mat4 minus;
};
Projectors projectors(const Kinematics& kin);

/// Hermitian non-unitary boost that carries a plane-wave bispinor to its rest
/// frame, Lambda W = sqrt(m/E) (w, 0). Requires m > 0.
Mat4 boost_matrix(const Kinematics& kin);

struct BoostResult {
  Kinematics kinematics;     // (E', p') in the moving frame
  Mat4 spinor_transform;     // acts on bispinor amplitudes
  double gamma = 1.0;
  double rapidity = 0.0;
};

/// Transforms kinematics and spinor amplitudes into a frame moving with
/// velocity v (|v| < 1) relative to the lab.
BoostResult generic_boost(const Kinematics& kin, const Vec3& v);

/// max |entry| of the difference, the norm used by the identity checks.
double max_abs(const Mat4& a);
double max_abs(const Vec4c& a);

}  // namespace diracops
