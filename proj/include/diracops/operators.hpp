#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "diracops/core.hpp"

namespace diracops {

enum class Rep { standard, fw };

inline const char* rep_name(Rep r) { return r == Rep::standard ? "standard" : "fw"; }

/// First-order differential operator in momentum space,
///   O = sum_k C_k(p) d/dp_k + M(p).
/// C_k is a scalar multiple of the identity for every operator here except the
/// center-of-energy N, which carries C_k = i delta_ik H(p).
struct MomentumOperator {
  std::string label;
  Rep rep = Rep::standard;
  std::array<std::function<cplx(const Kinematics&)>, 3> coeff;  // scalar c_k(p)
  std::array<std::function<Mat4(const Kinematics&)>, 3> coeff_matrix;
  bool scalar_coeffs = true;
  bool constant_coeffs = false;
  MatrixFunction matrix_part;

  cplx scalar_coeff_at(int k, const Kinematics& kin) const;
  Mat4 coeff_at(int k, const Kinematics& kin) const;
  Mat4 matrix_at(const Kinematics& kin) const;
};

/// Purely multiplicative spin-type operator.
struct SpinOperator {
  std::string label;
  Rep rep = Rep::standard;
  MatrixFunction matrix_part;
  Mat4 matrix_at(const Kinematics& kin) const { return matrix_part(kin); }
};

/// View of a spin operator as a derivative-free momentum operator.
MomentumOperator as_momentum_operator(const SpinOperator& op);

/// A first-order operator evaluated at one momentum: the commutator output.
struct OperatorValue {
  std::array<cplx, 3> deriv{};
  Mat4 matrix = Mat4::Zero();
};

struct IdentityReport {
  std::string identity;
  double tolerance = 0.0;
  double max_deviation = 0.0;
  int samples = 0;
  bool pass = false;
  std::string note;  // free-form, e.g. which closed form a commutator matched
};

// ---- canonical family -------------------------------------------------
std::array<MomentumOperator, 3> canonical_position(Rep rep = Rep::standard);
std::array<MomentumOperator, 3> momentum_multiplication(Rep rep = Rep::standard);
std::array<SpinOperator, 3> canonical_spin(Rep rep = Rep::standard);
std::array<MomentumOperator, 3> canonical_oam(Rep rep = Rep::standard);
std::array<MomentumOperator, 3> total_am(Rep rep = Rep::standard);
MomentumOperator hamiltonian_operator(Rep rep = Rep::standard);

// ---- projected family (closed forms) ----------------------------------
std::array<MomentumOperator, 3> projected_position(Rep rep);
std::array<SpinOperator, 3> projected_spin(Rep rep);
std::array<MomentumOperator, 3> projected_oam(Rep rep);

// ---- NWFW family (closed forms) ----------------------------------------
std::array<MomentumOperator, 3> nwfw_position(Rep rep);
std::array<SpinOperator, 3> nwfw_spin(Rep rep);
std::array<MomentumOperator, 3> nwfw_oam(Rep rep);

/// Orbital operator (position x p), expanded analytically to first-order form.
MomentumOperator oam_from_position(const std::array<MomentumOperator, 3>& pos, int i,
                                   const std::string& label);

// ---- constructive routes ------------------------------------------------
/// Energy-subspace sandwich Pi+ O Pi+ + Pi- O Pi-. Derivative parts act
/// through the momentum-dependent projectors, generating matrix terms that
/// are evaluated by central finite differences. Standard representation only.
MomentumOperator project_operator(const MomentumOperator& op);
SpinOperator project_operator(const SpinOperator& op);

enum class FwDirection { to_fw, from_fw };

/// U O U^dag (to_fw) or U^dag O U (from_fw), connection terms by central
/// finite differences.
MomentumOperator fw_conjugate(const MomentumOperator& op, FwDirection dir);
SpinOperator fw_conjugate(const SpinOperator& op, FwDirection dir);

// ---- pointwise calculus -------------------------------------------------
/// Commutator of two scalar-coefficient first-order operators, evaluated at
/// one momentum. Derivatives use central differences of relative step h with
/// one Richardson extrapolation level.
OperatorValue commutator(const MomentumOperator& a, const MomentumOperator& b,
                         const Kinematics& kin, double h = 1e-5);
OperatorValue commutator(const SpinOperator& a, const SpinOperator& b,
                         const Kinematics& kin, double h = 1e-5);

OperatorValue evaluate_at(const MomentumOperator& op, const Kinematics& kin);

double value_norm(const OperatorValue& v);
OperatorValue value_diff(const OperatorValue& a, const OperatorValue& b);

/// i[H, op] at one momentum; purely multiplicative for every operator whose
/// derivative coefficients commute with H.
Mat4 heisenberg_velocity(const MomentumOperator& op, const Kinematics& kin);
Mat4 heisenberg_velocity(const SpinOperator& op, const Kinematics& kin);

// ---- Berry structures ---------------------------------------------------
/// Matrix part of the projected position in the FW representation.
std::array<Mat4, 3> berry_connection(const Kinematics& kin);
/// F_k = eps_kij [d_i A_j - (i/2)[A_i, A_j]]; satisfies
/// [R_i, R_j] = i eps_ijk F_k for the projected position.
std::array<Mat4, 3> berry_curvature(const Kinematics& kin);

// ---- Pauli-Lubanski -----------------------------------------------------
struct PauliLubanski {
  Mat4 w0;                  // p . S
  std::array<Mat4, 3> wvec; // (S H + H S)/2
};
PauliLubanski pauli_lubanski(const Kinematics& kin);

// ---- center of energy / Pryce construction ------------------------------
/// N_i = (r_i H + H r_i)/2 = H i d_i + (i/2) alpha_i (matrix coefficient).
std::array<MomentumOperator, 3> center_of_energy();
/// q_i = (H^-1 N_i + N_i H^-1)/2 = i d_i + (i/4)[H^-1, alpha_i], expanded
/// analytically; equals the projected position.
std::array<MomentumOperator, 3> pryce_q();
IdentityReport pryce_q_equivalence(int samples = 50, std::uint64_t seed = 12345);

// ---- identity suites ----------------------------------------------------
struct TableOptions {
  int samples = 50;
  std::uint64_t seed = 12345;
  std::vector<double> masses = {0.1, 1.0, 10.0};
  bool include_massless_projected = true;
};

/// Closed-form vs constructive cross-checks for the eight operator entries,
/// plus the property rows (time evolution, expectation equality, commutator
/// structure, massless continuity).
std::vector<IdentityReport> verify_operator_table(const TableOptions& opt = {});

}  // namespace diracops
