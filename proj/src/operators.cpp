#include "diracops/operators.hpp"

#include <algorithm>
#include <cmath>

#include "diracops/numerics.hpp"

namespace diracops {

namespace {

constexpr double kFdStep = 1e-5;

double eps(int i, int j, int k) {
  return 0.5 * (i - j) * (j - k) * (k - i);
}

Kinematics shifted(const Kinematics& kin, int axis, double step) {
  Vec3 p = kin.p;
  p[axis] += step;
  return Kinematics::of(p, kin.m);
}

/// Central difference with one Richardson level, relative step.
template <typename F>
auto fd_derivative(const F& fn, const Kinematics& kin, int axis) {
  const double h = kFdStep * std::max(1.0, kin.p.norm());
  auto central = [&](double step) {
    return ((fn(shifted(kin, axis, step)) - fn(shifted(kin, axis, -step))) /
            (2.0 * step))
        .eval();
  };
  return ((4.0 * central(h / 2.0) - central(h)) / 3.0).eval();
}

template <typename F>
cplx fd_derivative_scalar(const F& fn, const Kinematics& kin, int axis) {
  const double h = kFdStep * std::max(1.0, kin.p.norm());
  auto central = [&](double step) {
    return (fn(shifted(kin, axis, step)) - fn(shifted(kin, axis, -step))) /
           (2.0 * step);
  };
  return (4.0 * central(h / 2.0) - central(h)) / 3.0;
}

Mat4 cross_ps(const Kinematics& kin, int i) {  // (p x S)_i
  const auto& d = dirac_constants();
  Mat4 out = Mat4::Zero();
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      const double e = eps(i, j, k);
      if (e != 0.0) out += e * kin.p[j] * d.spin[k];
    }
  return out;
}

Mat4 cross_ap(const Kinematics& kin, int i) {  // (alpha x p)_i
  const auto& d = dirac_constants();
  Mat4 out = Mat4::Zero();
  for (int j = 0; j < 3; ++j)
    for (int k = 0; k < 3; ++k) {
      const double e = eps(i, j, k);
      if (e != 0.0) out += e * d.alpha[j] * kin.p[k];
    }
  return out;
}

MomentumOperator bare_position(int i, Rep rep, const std::string& label) {
  MomentumOperator op;
  op.label = label;
  op.rep = rep;
  op.coeff[i] = [](const Kinematics&) { return iu; };
  op.scalar_coeffs = true;
  op.constant_coeffs = true;
  return op;
}

void require_scalar(const MomentumOperator& op, const char* what) {
  if (!op.scalar_coeffs)
    throw std::invalid_argument(std::string(what) +
                                ": operator '" + op.label +
                                "' has non-scalar derivative coefficients");
}

}  // namespace

cplx MomentumOperator::scalar_coeff_at(int k, const Kinematics& kin) const {
  if (!scalar_coeffs)
    throw std::invalid_argument("operator '" + label + "' has matrix coefficients");
  return coeff[k] ? coeff[k](kin) : cplx{0.0, 0.0};
}

Mat4 MomentumOperator::coeff_at(int k, const Kinematics& kin) const {
  if (scalar_coeffs) {
    const cplx c = coeff[k] ? coeff[k](kin) : cplx{0.0, 0.0};
    return c * Mat4::Identity();
  }
  return coeff_matrix[k] ? coeff_matrix[k](kin) : Mat4::Zero();
}

Mat4 MomentumOperator::matrix_at(const Kinematics& kin) const {
  return matrix_part(kin);
}

MomentumOperator as_momentum_operator(const SpinOperator& op) {
  MomentumOperator out;
  out.label = op.label;
  out.rep = op.rep;
  out.scalar_coeffs = true;
  out.constant_coeffs = true;
  out.matrix_part = op.matrix_part;
  return out;
}

// ---- canonical family ---------------------------------------------------

std::array<MomentumOperator, 3> canonical_position(Rep rep) {
  static const char* names[3] = {"r_x", "r_y", "r_z"};
  std::array<MomentumOperator, 3> out;
  for (int i = 0; i < 3; ++i) out[i] = bare_position(i, rep, names[i]);
  return out;
}

std::array<MomentumOperator, 3> momentum_multiplication(Rep rep) {
  static const char* names[3] = {"p_x", "p_y", "p_z"};
  std::array<MomentumOperator, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i].label = names[i];
    out[i].rep = rep;
    out[i].matrix_part = {names[i],
                          [i](const Kinematics& kin) {
                            return Mat4(kin.p[i] * Mat4::Identity());
                          },
                          true};
  }
  return out;
}

std::array<SpinOperator, 3> canonical_spin(Rep rep) {
  static const char* names[3] = {"S_x", "S_y", "S_z"};
  std::array<SpinOperator, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i].label = names[i];
    out[i].rep = rep;
    out[i].matrix_part = {names[i],
                          [i](const Kinematics&) { return dirac_constants().spin[i]; },
                          true};
  }
  return out;
}

MomentumOperator oam_from_position(const std::array<MomentumOperator, 3>& pos, int i,
                                   const std::string& label) {
  // (pos x p)_i: the ordering ambiguity eps_ijk [d_j, p_k] vanishes, so the
  // expansion into coefficient + matrix parts is exact.
  MomentumOperator op;
  op.label = label;
  op.rep = pos[0].rep;
  op.scalar_coeffs = true;
  op.constant_coeffs = false;
  for (int l = 0; l < 3; ++l) {
    op.coeff[l] = [pos, i, l](const Kinematics& kin) {
      cplx acc{0.0, 0.0};
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          const double e = eps(i, j, k);
          if (e != 0.0) acc += e * kin.p[k] * pos[j].scalar_coeff_at(l, kin);
        }
      return acc;
    };
  }
  op.matrix_part = {label,
                    [pos, i](const Kinematics& kin) {
                      Mat4 acc = Mat4::Zero();
                      for (int j = 0; j < 3; ++j)
                        for (int k = 0; k < 3; ++k) {
                          const double e = eps(i, j, k);
                          if (e != 0.0) acc += e * pos[j].matrix_at(kin) * kin.p[k];
                        }
                      return acc;
                    },
                    false};
  return op;
}

std::array<MomentumOperator, 3> canonical_oam(Rep rep) {
  static const char* names[3] = {"L_x", "L_y", "L_z"};
  auto pos = canonical_position(rep);
  std::array<MomentumOperator, 3> out;
  for (int i = 0; i < 3; ++i) out[i] = oam_from_position(pos, i, names[i]);
  return out;
}

std::array<MomentumOperator, 3> total_am(Rep rep) {
  static const char* names[3] = {"J_x", "J_y", "J_z"};
  auto out = canonical_oam(rep);
  for (int i = 0; i < 3; ++i) {
    out[i].label = names[i];
    out[i].matrix_part = {names[i],
                          [i](const Kinematics&) { return dirac_constants().spin[i]; },
                          true};
  }
  return out;
}

MomentumOperator hamiltonian_operator(Rep rep) {
  MomentumOperator op;
  op.label = "H";
  op.rep = rep;
  op.constant_coeffs = true;
  if (rep == Rep::standard) {
    op.matrix_part = {"H", [](const Kinematics& kin) { return hamiltonian(kin); }, true};
  } else {
    op.matrix_part = {"H_fw",
                      [](const Kinematics& kin) {
                        return Mat4(kin.E * dirac_constants().beta);
                      },
                      true};
  }
  return op;
}

// ---- projected family ----------------------------------------------------

std::array<MomentumOperator, 3> projected_position(Rep rep) {
  static const char* names[2][3] = {{"R_x", "R_y", "R_z"},
                                    {"R_fw_x", "R_fw_y", "R_fw_z"}};
  std::array<MomentumOperator, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i] = bare_position(i, rep, names[rep == Rep::fw][i]);
    if (rep == Rep::standard) {
      out[i].matrix_part = {out[i].label,
                            [i](const Kinematics& kin) {
                              const double E2 = kin.E * kin.E;
                              const auto& d = dirac_constants();
                              return Mat4(cross_ps(kin, i) / E2 +
                                          iu * kin.m * (d.beta * d.alpha[i]) / (2.0 * E2));
                            },
                            true};
    } else {
      out[i].matrix_part = {out[i].label,
                            [i](const Kinematics& kin) {
                              return Mat4(cross_ps(kin, i) / (kin.E * (kin.E + kin.m)));
                            },
                            true};
    }
  }
  return out;
}

std::array<SpinOperator, 3> projected_spin(Rep rep) {
  static const char* names[2][3] = {{"calS_x", "calS_y", "calS_z"},
                                    {"calS_fw_x", "calS_fw_y", "calS_fw_z"}};
  std::array<SpinOperator, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i].label = names[rep == Rep::fw][i];
    out[i].rep = rep;
    if (rep == Rep::standard) {
      out[i].matrix_part = {out[i].label,
                            [i](const Kinematics& kin) {
                              const double E2 = kin.E * kin.E;
                              const auto& d = dirac_constants();
                              return Mat4((kin.m * kin.m / E2) * d.spin[i] +
                                          spin_dot(kin.p) * kin.p[i] / E2 -
                                          iu * kin.m * (d.beta * cross_ap(kin, i)) /
                                              (2.0 * E2));
                            },
                            true};
    } else {
      out[i].matrix_part = {out[i].label,
                            [i](const Kinematics& kin) {
                              return Mat4((kin.m / kin.E) * dirac_constants().spin[i] +
                                          spin_dot(kin.p) * kin.p[i] /
                                              (kin.E * (kin.E + kin.m)));
                            },
                            true};
    }
  }
  return out;
}

std::array<MomentumOperator, 3> projected_oam(Rep rep) {
  static const char* names[2][3] = {{"calL_x", "calL_y", "calL_z"},
                                    {"calL_fw_x", "calL_fw_y", "calL_fw_z"}};
  auto pos = projected_position(rep);
  std::array<MomentumOperator, 3> out;
  for (int i = 0; i < 3; ++i)
    out[i] = oam_from_position(pos, i, names[rep == Rep::fw][i]);
  return out;
}

// ---- NWFW family -----------------------------------------------------------

std::array<MomentumOperator, 3> nwfw_position(Rep rep) {
  if (rep == Rep::fw) {
    auto out = canonical_position(Rep::fw);
    for (int i = 0; i < 3; ++i) out[i].label = std::string("rt_fw_") + "xyz"[i];
    return out;
  }
  static const char* names[3] = {"rt_x", "rt_y", "rt_z"};
  std::array<MomentumOperator, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i] = bare_position(i, Rep::standard, names[i]);
    out[i].matrix_part = {names[i],
                          [i](const Kinematics& kin) {
                            const auto& d = dirac_constants();
                            const double E = kin.E, m = kin.m;
                            const Mat4 bap = d.beta * alpha_dot(kin.p);
                            return Mat4(cross_ps(kin, i) / (E * (E + m)) +
                                        iu * (d.beta * d.alpha[i]) / (2.0 * E) -
                                        iu * bap * kin.p[i] / (2.0 * E * E * (E + m)));
                          },
                          true};
  }
  return out;
}

std::array<SpinOperator, 3> nwfw_spin(Rep rep) {
  if (rep == Rep::fw) {
    auto out = canonical_spin(Rep::fw);
    for (int i = 0; i < 3; ++i) out[i].label = std::string("St_fw_") + "xyz"[i];
    return out;
  }
  static const char* names[3] = {"St_x", "St_y", "St_z"};
  std::array<SpinOperator, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i].label = names[i];
    out[i].rep = Rep::standard;
    out[i].matrix_part = {names[i],
                          [i](const Kinematics& kin) {
                            const auto& d = dirac_constants();
                            const double E = kin.E, m = kin.m;
                            return Mat4((m / E) * d.spin[i] +
                                        spin_dot(kin.p) * kin.p[i] / (E * (E + m)) -
                                        iu * (d.beta * cross_ap(kin, i)) / (2.0 * E));
                          },
                          true};
  }
  return out;
}

std::array<MomentumOperator, 3> nwfw_oam(Rep rep) {
  static const char* names[2][3] = {{"Lt_x", "Lt_y", "Lt_z"},
                                    {"Lt_fw_x", "Lt_fw_y", "Lt_fw_z"}};
  auto pos = nwfw_position(rep);
  std::array<MomentumOperator, 3> out;
  for (int i = 0; i < 3; ++i)
    out[i] = oam_from_position(pos, i, names[rep == Rep::fw][i]);
  return out;
}

// ---- constructive routes ---------------------------------------------------

MomentumOperator project_operator(const MomentumOperator& op) {
  if (op.rep != Rep::standard)
    throw std::invalid_argument(
        "project_operator: projection is defined in the standard representation; "
        "in the FW representation it is the trivial beta-block projection");
  require_scalar(op, "project_operator");
  MomentumOperator out = op;
  out.label = "proj(" + op.label + ")";
  MomentumOperator captured = op;
  out.matrix_part = {out.label,
                     [captured](const Kinematics& kin) {
                       Mat4 acc = Mat4::Zero();
                       const Projectors pi = projectors(kin);
                       const Mat4 m = captured.matrix_at(kin);
                       acc += pi.plus * m * pi.plus + pi.minus * m * pi.minus;
                       for (int k = 0; k < 3; ++k) {
                         const cplx c = captured.scalar_coeff_at(k, kin);
                         if (c == cplx{0.0, 0.0}) continue;
                         const Mat4 dplus = fd_derivative(
                             [](const Kinematics& q) { return projectors(q).plus; },
                             kin, k);
                         const Mat4 dminus = fd_derivative(
                             [](const Kinematics& q) { return projectors(q).minus; },
                             kin, k);
                         acc += c * (pi.plus * dplus + pi.minus * dminus);
                       }
                       return acc;
                     },
                     false};
  return out;
}

SpinOperator project_operator(const SpinOperator& op) {
  if (op.rep != Rep::standard)
    throw std::invalid_argument(
        "project_operator: projection is defined in the standard representation");
  SpinOperator out = op;
  out.label = "proj(" + op.label + ")";
  MatrixFunction inner = op.matrix_part;
  out.matrix_part = {out.label,
                     [inner](const Kinematics& kin) {
                       const Projectors pi = projectors(kin);
                       const Mat4 m = inner(kin);
                       return Mat4(pi.plus * m * pi.plus + pi.minus * m * pi.minus);
                     },
                     false};
  return out;
}

MomentumOperator fw_conjugate(const MomentumOperator& op, FwDirection dir) {
  if (dir == FwDirection::to_fw && op.rep != Rep::standard)
    throw std::invalid_argument("fw_conjugate(to_fw): operator must be standard-rep");
  if (dir == FwDirection::from_fw && op.rep != Rep::fw)
    throw std::invalid_argument("fw_conjugate(from_fw): operator must be FW-rep");
  require_scalar(op, "fw_conjugate");
  MomentumOperator out = op;
  out.rep = dir == FwDirection::to_fw ? Rep::fw : Rep::standard;
  out.label = (dir == FwDirection::to_fw ? "to_fw(" : "from_fw(") + op.label + ")";
  MomentumOperator captured = op;
  const bool to = dir == FwDirection::to_fw;
  out.matrix_part = {out.label,
                     [captured, to](const Kinematics& kin) {
                       const Mat4 u = fw_unitary(kin);
                       const Mat4 m = captured.matrix_at(kin);
                       Mat4 acc = to ? Mat4(u * m * u.adjoint())
                                     : Mat4(u.adjoint() * m * u);
                       for (int k = 0; k < 3; ++k) {
                         const cplx c = captured.scalar_coeff_at(k, kin);
                         if (c == cplx{0.0, 0.0}) continue;
                         if (to) {
                           const Mat4 dudag = fd_derivative(
                               [](const Kinematics& q) {
                                 return Mat4(fw_unitary(q).adjoint());
                               },
                               kin, k);
                           acc += c * (u * dudag);
                         } else {
                           const Mat4 du = fd_derivative(
                               [](const Kinematics& q) { return fw_unitary(q); }, kin,
                               k);
                           acc += c * (u.adjoint() * du);
                         }
                       }
                       return acc;
                     },
                     false};
  return out;
}

SpinOperator fw_conjugate(const SpinOperator& op, FwDirection dir) {
  if (dir == FwDirection::to_fw && op.rep != Rep::standard)
    throw std::invalid_argument("fw_conjugate(to_fw): operator must be standard-rep");
  if (dir == FwDirection::from_fw && op.rep != Rep::fw)
    throw std::invalid_argument("fw_conjugate(from_fw): operator must be FW-rep");
  SpinOperator out = op;
  out.rep = dir == FwDirection::to_fw ? Rep::fw : Rep::standard;
  out.label = (dir == FwDirection::to_fw ? "to_fw(" : "from_fw(") + op.label + ")";
  MatrixFunction inner = op.matrix_part;
  const bool to = dir == FwDirection::to_fw;
  out.matrix_part = {out.label,
                     [inner, to](const Kinematics& kin) {
                       const Mat4 u = fw_unitary(kin);
                       const Mat4 m = inner(kin);
                       return to ? Mat4(u * m * u.adjoint()) : Mat4(u.adjoint() * m * u);
                     },
                     false};
  return out;
}

// ---- pointwise calculus -----------------------------------------------------

OperatorValue commutator(const MomentumOperator& a, const MomentumOperator& b,
                         const Kinematics& kin, double h) {
  if (a.rep != b.rep)
    throw std::invalid_argument("commutator: operators live in different representations");
  require_scalar(a, "commutator");
  require_scalar(b, "commutator");
  if (h <= 0.0) throw std::invalid_argument("commutator: step must be positive");

  const double step = h * std::max(1.0, kin.p.norm());
  auto dscalar = [&](const MomentumOperator& op, int comp, int axis) -> cplx {
    if (op.constant_coeffs || !op.coeff[comp]) return {0.0, 0.0};
    auto central = [&](double s) {
      return (op.coeff[comp](shifted(kin, axis, s)) -
              op.coeff[comp](shifted(kin, axis, -s))) /
             (2.0 * s);
    };
    return (4.0 * central(step / 2.0) - central(step)) / 3.0;
  };
  auto dmatrix = [&](const MomentumOperator& op, int axis) -> Mat4 {
    if (op.matrix_part.empty()) return Mat4::Zero();
    auto central = [&](double s) {
      return Mat4((op.matrix_at(shifted(kin, axis, s)) -
                   op.matrix_at(shifted(kin, axis, -s))) /
                  (2.0 * s));
    };
    return (4.0 * central(step / 2.0) - central(step)) / 3.0;
  };

  OperatorValue out;
  for (int j = 0; j < 3; ++j) {
    cplx acc{0.0, 0.0};
    for (int i = 0; i < 3; ++i) {
      const cplx ai = a.scalar_coeff_at(i, kin);
      const cplx bi = b.scalar_coeff_at(i, kin);
      if (ai != cplx{0.0, 0.0}) acc += ai * dscalar(b, j, i);
      if (bi != cplx{0.0, 0.0}) acc -= bi * dscalar(a, j, i);
    }
    out.deriv[j] = acc;
  }
  const Mat4 ma = a.matrix_at(kin);
  const Mat4 mb = b.matrix_at(kin);
  out.matrix = ma * mb - mb * ma;
  for (int i = 0; i < 3; ++i) {
    const cplx ai = a.scalar_coeff_at(i, kin);
    const cplx bi = b.scalar_coeff_at(i, kin);
    if (ai != cplx{0.0, 0.0}) out.matrix += ai * dmatrix(b, i);
    if (bi != cplx{0.0, 0.0}) out.matrix -= bi * dmatrix(a, i);
  }
  return out;
}

OperatorValue commutator(const SpinOperator& a, const SpinOperator& b,
                         const Kinematics& kin, double) {
  if (a.rep != b.rep)
    throw std::invalid_argument("commutator: operators live in different representations");
  OperatorValue out;
  const Mat4 ma = a.matrix_at(kin);
  const Mat4 mb = b.matrix_at(kin);
  out.matrix = ma * mb - mb * ma;
  return out;
}

OperatorValue evaluate_at(const MomentumOperator& op, const Kinematics& kin) {
  OperatorValue out;
  for (int k = 0; k < 3; ++k) out.deriv[k] = op.scalar_coeff_at(k, kin);
  out.matrix = op.matrix_at(kin);
  return out;
}

double value_norm(const OperatorValue& v) {
  double n = max_abs(v.matrix);
  for (const auto& c : v.deriv) n = std::max(n, std::abs(c));
  return n;
}

OperatorValue value_diff(const OperatorValue& a, const OperatorValue& b) {
  OperatorValue out;
  for (int k = 0; k < 3; ++k) out.deriv[k] = a.deriv[k] - b.deriv[k];
  out.matrix = a.matrix - b.matrix;
  return out;
}

Mat4 heisenberg_velocity(const MomentumOperator& op, const Kinematics& kin) {
  const Mat4 hmat = op.rep == Rep::standard
                        ? hamiltonian(kin)
                        : Mat4(kin.E * dirac_constants().beta);
  Mat4 out = iu * (hmat * op.matrix_at(kin) - op.matrix_at(kin) * hmat);
  // dH/dp_k in the representation the operator lives in
  for (int k = 0; k < 3; ++k) {
    Mat4 dh;
    if (op.rep == Rep::standard) {
      dh = dirac_constants().alpha[k];
    } else {
      dh = Mat4((kin.p[k] / kin.E) * dirac_constants().beta);
    }
    const Mat4 ck = op.coeff_at(k, kin);
    if (!op.scalar_coeffs) {
      const Mat4 comm = hmat * ck - ck * hmat;
      if (max_abs(comm) > 1e-10 * std::max(1.0, max_abs(ck)))
        throw std::invalid_argument(
            "heisenberg_velocity: matrix coefficient of '" + op.label +
            "' does not commute with H, the result is not multiplicative");
    }
    out -= iu * (ck * dh);
  }
  return out;
}

Mat4 heisenberg_velocity(const SpinOperator& op, const Kinematics& kin) {
  const Mat4 hmat = op.rep == Rep::standard
                        ? hamiltonian(kin)
                        : Mat4(kin.E * dirac_constants().beta);
  const Mat4 m = op.matrix_at(kin);
  return iu * (hmat * m - m * hmat);
}

// ---- Berry structures --------------------------------------------------------

std::array<Mat4, 3> berry_connection(const Kinematics& kin) {
  std::array<Mat4, 3> a;
  for (int i = 0; i < 3; ++i) a[i] = cross_ps(kin, i) / (kin.E * (kin.E + kin.m));
  return a;
}

std::array<Mat4, 3> berry_curvature(const Kinematics& kin) {
  auto connection_comp = [](const Kinematics& q, int j) {
    return Mat4(cross_ps(q, j) / (q.E * (q.E + q.m)));
  };
  const auto a = berry_connection(kin);
  std::array<Mat4, 3> f;
  for (int m = 0; m < 3; ++m) {
    f[m] = Mat4::Zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double e = eps(m, i, j);
        if (e == 0.0) continue;
        const Mat4 daj = fd_derivative(
            [&connection_comp, j](const Kinematics& q) { return connection_comp(q, j); },
            kin, i);
        f[m] += e * (daj - 0.5 * iu * (a[i] * a[j] - a[j] * a[i]));
      }
  }
  return f;
}

// ---- Pauli-Lubanski -----------------------------------------------------------

PauliLubanski pauli_lubanski(const Kinematics& kin) {
  PauliLubanski out;
  out.w0 = spin_dot(kin.p);
  const Mat4 h = hamiltonian(kin);
  const auto& d = dirac_constants();
  for (int i = 0; i < 3; ++i) out.wvec[i] = 0.5 * (d.spin[i] * h + h * d.spin[i]);
  return out;
}

// ---- center of energy / Pryce ---------------------------------------------------

std::array<MomentumOperator, 3> center_of_energy() {
  std::array<MomentumOperator, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i].label = std::string("N_") + "xyz"[i];
    out[i].rep = Rep::standard;
    out[i].scalar_coeffs = false;
    out[i].coeff_matrix[i] = [](const Kinematics& kin) {
      return Mat4(iu * hamiltonian(kin));
    };
    out[i].matrix_part = {out[i].label,
                          [i](const Kinematics&) {
                            return Mat4(0.5 * iu * dirac_constants().alpha[i]);
                          },
                          false};
  }
  return out;
}

std::array<MomentumOperator, 3> pryce_q() {
  std::array<MomentumOperator, 3> out;
  for (int i = 0; i < 3; ++i) {
    out[i] = bare_position(i, Rep::standard, std::string("q_") + "xyz"[i]);
    out[i].matrix_part = {out[i].label,
                          [i](const Kinematics& kin) {
                            // (i/4)[H^-1, alpha_i] with H^-1 = H/E^2
                            const Mat4 h = hamiltonian(kin);
                            const Mat4 ai = dirac_constants().alpha[i];
                            return Mat4((iu / (4.0 * kin.E * kin.E)) *
                                        (h * ai - ai * h));
                          },
                          true};
  }
  return out;
}

IdentityReport pryce_q_equivalence(int samples, std::uint64_t seed) {
  IdentityReport rep;
  rep.identity = "pryce_q_equals_projected_position";
  rep.tolerance = 1e-8;
  const auto ps = sample_momenta(samples, seed);
  const auto q = pryce_q();
  const auto r = projected_position(Rep::standard);
  std::vector<double> devs(ps.size(), 0.0);
  parallel_for(ps.size(), [&](std::size_t n) {
    for (double m : {0.1, 1.0, 10.0}) {
      const Kinematics kin = Kinematics::of(ps[n], m);
      for (int i = 0; i < 3; ++i)
        devs[n] = std::max(devs[n],
                           max_abs(Mat4(q[i].matrix_at(kin) - r[i].matrix_at(kin))));
    }
  });
  rep.samples = static_cast<int>(ps.size());
  rep.max_deviation = *std::max_element(devs.begin(), devs.end());
  rep.pass = rep.max_deviation < rep.tolerance;
  return rep;
}

// ---- identity suites --------------------------------------------------------------

namespace {

/// Max deviation between two 3-component operator families' matrix parts over
/// a sample set (derivative parts are identical by construction).
double matrix_family_deviation(const std::array<MomentumOperator, 3>& a,
                               const std::array<MomentumOperator, 3>& b,
                               const std::vector<Kinematics>& kins) {
  std::vector<double> devs(kins.size(), 0.0);
  parallel_for(kins.size(), [&](std::size_t n) {
    for (int i = 0; i < 3; ++i)
      devs[n] = std::max(
          devs[n], max_abs(Mat4(a[i].matrix_at(kins[n]) - b[i].matrix_at(kins[n]))));
  });
  return *std::max_element(devs.begin(), devs.end());
}

double matrix_family_deviation(const std::array<SpinOperator, 3>& a,
                               const std::array<SpinOperator, 3>& b,
                               const std::vector<Kinematics>& kins) {
  std::vector<double> devs(kins.size(), 0.0);
  parallel_for(kins.size(), [&](std::size_t n) {
    for (int i = 0; i < 3; ++i)
      devs[n] = std::max(
          devs[n], max_abs(Mat4(a[i].matrix_at(kins[n]) - b[i].matrix_at(kins[n]))));
  });
  return *std::max_element(devs.begin(), devs.end());
}

std::vector<Kinematics> make_kins(const std::vector<Eigen::Vector3d>& ps,
                                  const std::vector<double>& masses) {
  std::vector<Kinematics> kins;
  kins.reserve(ps.size() * masses.size());
  for (const auto& p : ps)
    for (double m : masses) kins.push_back(Kinematics::of(p, m));
  return kins;
}

IdentityReport make_report(std::string identity, double tol, double dev, int samples,
                           std::string note = {}) {
  IdentityReport r;
  r.identity = std::move(identity);
  r.tolerance = tol;
  r.max_deviation = dev;
  r.samples = samples;
  r.pass = dev < tol;
  r.note = std::move(note);
  return r;
}

}  // namespace

std::vector<IdentityReport> verify_operator_table(const TableOptions& opt) {
  std::vector<IdentityReport> out;
  const auto ps = sample_momenta(opt.samples, opt.seed);

  std::vector<double> massive;
  bool has_zero = false;
  for (double m : opt.masses) {
    if (m == 0.0)
      has_zero = true;
    else
      massive.push_back(m);
  }
  const bool nwfw_possible = !massive.empty();

  auto kins = make_kins(ps, massive.empty() ? std::vector<double>{0.0} : massive);
  std::vector<double> proj_masses = massive;
  if (opt.include_massless_projected || has_zero) proj_masses.push_back(0.0);
  auto kins_proj = make_kins(ps, proj_masses);
  const int n_proj = static_cast<int>(kins_proj.size());
  const int n_massive = static_cast<int>(kins.size());

  // -- the eight closed-form vs constructive entries --
  {
    auto closed = projected_position(Rep::standard);
    std::array<MomentumOperator, 3> constructive;
    auto r = canonical_position();
    for (int i = 0; i < 3; ++i) constructive[i] = project_operator(r[i]);
    out.push_back(make_report("projected_position_standard", 1e-8,
                              matrix_family_deviation(closed, constructive, kins_proj),
                              n_proj));
  }
  {
    auto closed = projected_position(Rep::fw);
    std::array<MomentumOperator, 3> constructive;
    auto base = projected_position(Rep::standard);
    for (int i = 0; i < 3; ++i)
      constructive[i] = fw_conjugate(base[i], FwDirection::to_fw);
    out.push_back(make_report("projected_position_fw", 1e-8,
                              matrix_family_deviation(closed, constructive, kins_proj),
                              n_proj));
  }
  {
    auto closed = projected_spin(Rep::standard);
    std::array<SpinOperator, 3> constructive;
    auto s = canonical_spin();
    for (int i = 0; i < 3; ++i) constructive[i] = project_operator(s[i]);
    out.push_back(make_report("projected_spin_standard", 1e-8,
                              matrix_family_deviation(closed, constructive, kins_proj),
                              n_proj));
  }
  {
    auto closed = projected_spin(Rep::fw);
    std::array<SpinOperator, 3> constructive;
    auto base = projected_spin(Rep::standard);
    for (int i = 0; i < 3; ++i)
      constructive[i] = fw_conjugate(base[i], FwDirection::to_fw);
    out.push_back(make_report("projected_spin_fw", 1e-8,
                              matrix_family_deviation(closed, constructive, kins_proj),
                              n_proj));
  }
  if (nwfw_possible) {
    {
      auto closed = nwfw_position(Rep::standard);
      std::array<MomentumOperator, 3> constructive;
      auto r = canonical_position(Rep::fw);
      for (int i = 0; i < 3; ++i)
        constructive[i] = fw_conjugate(r[i], FwDirection::from_fw);
      out.push_back(make_report("nwfw_position_standard", 1e-8,
                                matrix_family_deviation(closed, constructive, kins),
                                n_massive));
    }
    {
      auto closed = nwfw_position(Rep::fw);  // bare r
      std::array<MomentumOperator, 3> constructive;
      auto base = nwfw_position(Rep::standard);
      for (int i = 0; i < 3; ++i)
        constructive[i] = fw_conjugate(base[i], FwDirection::to_fw);
      out.push_back(make_report("nwfw_position_fw", 1e-8,
                                matrix_family_deviation(closed, constructive, kins),
                                n_massive));
    }
    {
      auto closed = nwfw_spin(Rep::standard);
      std::array<SpinOperator, 3> constructive;
      auto s = canonical_spin(Rep::fw);
      for (int i = 0; i < 3; ++i)
        constructive[i] = fw_conjugate(s[i], FwDirection::from_fw);
      out.push_back(make_report("nwfw_spin_standard", 1e-8,
                                matrix_family_deviation(closed, constructive, kins),
                                n_massive));
    }
    {
      auto closed = nwfw_spin(Rep::fw);  // canonical S
      std::array<SpinOperator, 3> constructive;
      auto base = nwfw_spin(Rep::standard);
      for (int i = 0; i < 3; ++i)
        constructive[i] = fw_conjugate(base[i], FwDirection::to_fw);
      out.push_back(make_report("nwfw_spin_fw", 1e-8,
                                matrix_family_deviation(closed, constructive, kins),
                                n_massive));
    }
  } else {
    for (const char* name : {"nwfw_position_standard", "nwfw_position_fw",
                             "nwfw_spin_standard", "nwfw_spin_fw"}) {
      IdentityReport r;
      r.identity = name;
      r.tolerance = 1e-8;
      r.max_deviation = 0.0;
      r.samples = 0;
      r.pass = true;
      r.note = "skipped: rest-frame construction, undefined at m = 0";
      out.push_back(r);
    }
  }

  // -- proper time evolution --
  {
    std::vector<double> devs(kins.size(), 0.0);
    auto calS = projected_spin(Rep::standard);
    auto calL = projected_oam(Rep::standard);
    auto St = nwfw_spin(Rep::standard);
    auto Lt = nwfw_oam(Rep::standard);
    auto calR = projected_position(Rep::standard);
    auto rt = nwfw_position(Rep::standard);
    parallel_for(kins.size(), [&](std::size_t n) {
      const Kinematics& kin = kins[n];
      const Mat4 ph_inv = hamiltonian(kin) / (kin.E * kin.E);
      for (int i = 0; i < 3; ++i) {
        devs[n] = std::max(devs[n], max_abs(heisenberg_velocity(calS[i], kin)));
        devs[n] = std::max(devs[n], max_abs(heisenberg_velocity(calL[i], kin)));
        devs[n] = std::max(devs[n], max_abs(Mat4(heisenberg_velocity(calR[i], kin) -
                                                 kin.p[i] * ph_inv)));
        if (nwfw_possible) {
          devs[n] = std::max(devs[n], max_abs(heisenberg_velocity(St[i], kin)));
          devs[n] = std::max(devs[n], max_abs(heisenberg_velocity(Lt[i], kin)));
          devs[n] = std::max(devs[n], max_abs(Mat4(heisenberg_velocity(rt[i], kin) -
                                                   kin.p[i] * ph_inv)));
        }
      }
    });
    out.push_back(make_report("time_evolution", 1e-8,
                              *std::max_element(devs.begin(), devs.end()), n_massive));
  }

  // -- canonical spin is not conserved: smallest sample still exceeds 0.1 --
  {
    std::vector<double> norms(kins.size(), 0.0);
    auto s = canonical_spin();
    parallel_for(kins.size(), [&](std::size_t n) {
      double worst = 0.0;
      for (int i = 0; i < 3; ++i)
        worst = std::max(worst, max_abs(heisenberg_velocity(s[i], kins[n])));
      norms[n] = worst;
    });
    const double least = *std::min_element(norms.begin(), norms.end());
    IdentityReport r;
    r.identity = "canonical_spin_nonconservation";
    r.tolerance = 0.1;
    r.max_deviation = least;
    r.samples = n_massive;
    r.pass = least > 0.1;
    r.note = "pass requires max_i |[H,S_i]| > 0.1 at every sample";
    out.push_back(r);
  }

  // -- non-canonical position commutator, both printed candidates --
  {
    auto calR = projected_position(Rep::standard);
    auto calS = projected_spin(Rep::standard);
    auto S = canonical_spin();
    std::vector<double> dev_cals(kins_proj.size(), 0.0);
    std::vector<double> dev_s_global(kins_proj.size(), 0.0);
    std::vector<double> dev_both_electron(kins_proj.size(), 0.0);
    parallel_for(kins_proj.size(), [&](std::size_t n) {
      const Kinematics& kin = kins_proj[n];
      const double e2 = kin.E * kin.E;
      const OperatorValue c = commutator(calR[0], calR[1], kin);
      const Mat4 rhs_cals = Mat4(-iu * calS[2].matrix_at(kin) / e2);
      const Mat4 rhs_s = Mat4(-iu * S[2].matrix_at(kin) / e2);
      dev_cals[n] = max_abs(Mat4(c.matrix - rhs_cals));
      dev_s_global[n] = max_abs(Mat4(c.matrix - rhs_s));
      const Mat4 pp = projectors(kin).plus;
      dev_both_electron[n] =
          std::max(max_abs(Mat4(pp * (c.matrix - rhs_cals) * pp)),
                   max_abs(Mat4(pp * (c.matrix - rhs_s) * pp)));
      for (const auto& d : c.deriv)
        dev_cals[n] = std::max(dev_cals[n], std::abs(d));
    });
    const double cals = *std::max_element(dev_cals.begin(), dev_cals.end());
    const double sg = *std::max_element(dev_s_global.begin(), dev_s_global.end());
    const double elec =
        *std::max_element(dev_both_electron.begin(), dev_both_electron.end());
    char note[256];
    std::snprintf(note, sizeof(note),
                  "numeric [R_x,R_y] matches -i eps calS_k/E^2 globally (dev %.2e); "
                  "canonical-S form deviates %.2e globally; on the electron subspace "
                  "both coincide (dev %.2e)",
                  cals, sg, elec);
    out.push_back(make_report("position_commutator_curvature", 1e-6, cals,
                              n_proj, note));
  }

  // -- projected spin / oam commutator algebra --
  {
    auto calS = projected_spin(Rep::standard);
    auto calL = projected_oam(Rep::standard);
    std::vector<double> devs(kins_proj.size(), 0.0);
    parallel_for(kins_proj.size(), [&](std::size_t n) {
      const Kinematics& kin = kins_proj[n];
      const double e2 = kin.E * kin.E;
      Mat4 pdots = Mat4::Zero();
      for (int i = 0; i < 3; ++i) pdots += kin.p[i] * calS[i].matrix_at(kin);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          int k = 3 - i - j;
          const double e = eps(i, j, k);
          {
            const OperatorValue c = commutator(calS[i], calS[j], kin);
            const Mat4 rhs =
                Mat4(iu * e * (calS[k].matrix_at(kin) - pdots * kin.p[k] / e2));
            devs[n] = std::max(devs[n], max_abs(Mat4(c.matrix - rhs)));
          }
          {
            const OperatorValue c = commutator(calL[i], calL[j], kin);
            OperatorValue rhs = evaluate_at(calL[k], kin);
            for (auto& d : rhs.deriv) d *= iu * e;
            rhs.matrix = Mat4(iu * e * (rhs.matrix - pdots * kin.p[k] / e2));
            devs[n] = std::max(devs[n], value_norm(value_diff(c, rhs)));
          }
        }
    });
    out.push_back(make_report("projected_commutator_algebra", 1e-6,
                              *std::max_element(devs.begin(), devs.end()), n_proj));
  }

  // -- NWFW canonical commutators --
  if (nwfw_possible) {
    auto rt = nwfw_position(Rep::standard);
    auto St = nwfw_spin(Rep::standard);
    auto Lt = nwfw_oam(Rep::standard);
    std::vector<double> devs(kins.size(), 0.0);
    parallel_for(kins.size(), [&](std::size_t n) {
      const Kinematics& kin = kins[n];
      devs[n] = std::max(devs[n], value_norm(commutator(rt[0], rt[1], kin)));
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          if (i == j) continue;
          int k = 3 - i - j;
          const double e = eps(i, j, k);
          {
            const OperatorValue c = commutator(St[i], St[j], kin);
            devs[n] = std::max(
                devs[n],
                max_abs(Mat4(c.matrix - iu * e * St[k].matrix_at(kin))));
          }
          {
            const OperatorValue c = commutator(Lt[i], Lt[j], kin);
            OperatorValue rhs = evaluate_at(Lt[k], kin);
            for (auto& d : rhs.deriv) d *= iu * e;
            rhs.matrix *= iu * e;
            devs[n] = std::max(devs[n], value_norm(value_diff(c, rhs)));
          }
        }
    });
    out.push_back(make_report("nwfw_commutator_algebra", 1e-6,
                              *std::max_element(devs.begin(), devs.end()), n_massive));
  } else {
    IdentityReport r;
    r.identity = "nwfw_commutator_algebra";
    r.tolerance = 1e-6;
    r.pass = true;
    r.note = "skipped: rest-frame construction, undefined at m = 0";
    out.push_back(r);
  }

  // -- smooth massless limit of the projected family --
  {
    std::vector<double> devs(ps.size(), 0.0);
    auto famA = projected_position(Rep::standard);
    auto famB = projected_position(Rep::fw);
    auto spA = projected_spin(Rep::standard);
    auto spB = projected_spin(Rep::fw);
    parallel_for(ps.size(), [&](std::size_t n) {
      const Kinematics k0 = Kinematics::of(ps[n], 0.0);
      const Kinematics k1 = Kinematics::of(ps[n], 1e-6);
      for (int i = 0; i < 3; ++i) {
        devs[n] = std::max(devs[n],
                           max_abs(Mat4(famA[i].matrix_at(k0) - famA[i].matrix_at(k1))));
        devs[n] = std::max(devs[n],
                           max_abs(Mat4(famB[i].matrix_at(k0) - famB[i].matrix_at(k1))));
        devs[n] = std::max(devs[n],
                           max_abs(Mat4(spA[i].matrix_at(k0) - spA[i].matrix_at(k1))));
        devs[n] = std::max(devs[n],
                           max_abs(Mat4(spB[i].matrix_at(k0) - spB[i].matrix_at(k1))));
      }
    });
    out.push_back(make_report("massless_continuity", 1e-4,
                              *std::max_element(devs.begin(), devs.end()),
                              static_cast<int>(ps.size())));
  }

  out.push_back(pryce_q_equivalence(opt.samples, opt.seed));
  return out;
}

}  // namespace diracops
