#include "diracops/core.hpp"

#include <cmath>

namespace diracops {

double energy(const Vec3& p, double m) {
  if (m < 0.0) throw std::invalid_argument("energy: mass must be non-negative");
  const double p2 = p.squaredNorm();
  if (m == 0.0 && p2 == 0.0)
    throw std::invalid_argument("energy: m = 0 with p = 0 has E = 0, H is not invertible");
  return std::sqrt(m * m + p2);
}

Kinematics Kinematics::of(const Vec3& p, double m) {
  Kinematics kin;
  kin.p = p;
  kin.m = m;
  kin.E = energy(p, m);
  const double pn = p.norm();
  if (pn > 0.0) {
    kin.pbar = p / pn;
    kin.pbar_defined = true;
  }
  return kin;
}

PolarizationSpinor PolarizationSpinor::of(const Vec2c& w) {
  if (std::abs(w.squaredNorm() - 1.0) > 1e-12)
    throw std::invalid_argument("PolarizationSpinor: w must be normalized");
  return PolarizationSpinor{w};
}

Mat4 MatrixFunction::operator()(const Kinematics& kin) const {
  if (!fn) return Mat4::Zero();
  Mat4 v = fn(kin);
  if (hermitian && max_abs(Mat4(v - v.adjoint())) > 1e-12)
    throw std::runtime_error("MatrixFunction '" + label + "': hermiticity violated");
  if (unitary && max_abs(Mat4(v * v.adjoint() - Mat4::Identity())) > 1e-12)
    throw std::runtime_error("MatrixFunction '" + label + "': unitarity violated");
  return v;
}

const std::array<Mat2, 3>& pauli_matrices() {
  static const std::array<Mat2, 3> sigma = [] {
    std::array<Mat2, 3> s;
    s[0] << 0, 1, 1, 0;
    s[1] << 0, -iu, iu, 0;
    s[2] << 1, 0, 0, -1;
    return s;
  }();
  return sigma;
}

const DiracConstants& dirac_constants() {
  static const DiracConstants c = [] {
    DiracConstants d;
    const auto& sigma = pauli_matrices();
    for (int i = 0; i < 3; ++i) {
      d.alpha[i].setZero();
      d.alpha[i].block<2, 2>(0, 2) = sigma[i];
      d.alpha[i].block<2, 2>(2, 0) = sigma[i];
      d.spin[i].setZero();
      d.spin[i].block<2, 2>(0, 0) = 0.5 * sigma[i];
      d.spin[i].block<2, 2>(2, 2) = 0.5 * sigma[i];
    }
    d.beta.setZero();
    d.beta(0, 0) = d.beta(1, 1) = 1.0;
    d.beta(2, 2) = d.beta(3, 3) = -1.0;
    return d;
  }();
  return c;
}

Mat4 alpha_dot(const Vec3& v) {
  const auto& d = dirac_constants();
  return v.x() * d.alpha[0] + v.y() * d.alpha[1] + v.z() * d.alpha[2];
}

Mat4 spin_dot(const Vec3& v) {
  const auto& d = dirac_constants();
  return v.x() * d.spin[0] + v.y() * d.spin[1] + v.z() * d.spin[2];
}

Mat4 hamiltonian(const Kinematics& kin) {
  return alpha_dot(kin.p) + kin.m * dirac_constants().beta;
}

Bispinor plane_wave_bispinor(const Kinematics& kin, const PolarizationSpinor& w) {
  Bispinor b;
  b.kinematics = kin;
  b.energy_sign = EnergySign::positive;
  const double up = std::sqrt((kin.E + kin.m) / (2.0 * kin.E));
  b.components.setZero();
  b.components.head<2>() = up * w.w;
  if (kin.pbar_defined) {
    const auto& sigma = pauli_matrices();
    Mat2 sp = kin.pbar.x() * sigma[0] + kin.pbar.y() * sigma[1] + kin.pbar.z() * sigma[2];
    const double lo = std::sqrt((kin.E - kin.m) / (2.0 * kin.E));
    b.components.tail<2>() = lo * (sp * w.w);
  }
  // at p = 0 the lower block is exactly zero, no direction convention needed
  return b;
}

Bispinor negative_energy_bispinor(const Kinematics& kin, const PolarizationSpinor& w) {
  Bispinor b;
  b.kinematics = kin;
  b.energy_sign = EnergySign::negative;
  Vec4c lower = Vec4c::Zero();
  lower.tail<2>() = w.w;
  b.components = fw_unitary(kin).adjoint() * lower;
  return b;
}

Mat4 fw_unitary(const Kinematics& kin) {
  const double denom = 2.0 * kin.E * (kin.E + kin.m);
  if (denom <= 0.0) throw std::invalid_argument("fw_unitary: E + m must be positive");
  const auto& d = dirac_constants();
  return ((kin.E + kin.m) * Mat4::Identity() + d.beta * alpha_dot(kin.p)) / std::sqrt(denom);
}

Projectors projectors(const Kinematics& kin) {
  const auto& d = dirac_constants();
  Mat4 base = 0.5 * Mat4::Identity();
  Mat4 massterm = (0.5 * kin.m / kin.E) * d.beta;
  Mat4 fluxterm = alpha_dot(kin.p) / (2.0 * kin.E);
  return Projectors{base + massterm + fluxterm, base - massterm - fluxterm};
}

Mat4 boost_matrix(const Kinematics& kin) {
  if (kin.m <= 0.0)
    throw std::invalid_argument("boost_matrix: rest frame requires m > 0");
  // exp(-(eta/2) alpha.pbar) with tanh(eta) = p/E; sends W to sqrt(m/E)(w,0)
  return ((kin.E + kin.m) * Mat4::Identity() - alpha_dot(kin.p)) /
         std::sqrt(2.0 * kin.m * (kin.E + kin.m));
}

BoostResult generic_boost(const Kinematics& kin, const Vec3& v) {
  const double vn = v.norm();
  if (vn >= 1.0) throw std::invalid_argument("generic_boost: |v| must be < 1");
  BoostResult out;
  if (vn == 0.0) {
    out.kinematics = kin;
    out.spinor_transform = Mat4::Identity();
    return out;
  }
  const Vec3 vh = v / vn;
  const double gamma = 1.0 / std::sqrt(1.0 - vn * vn);
  const double eta = std::atanh(vn);
  Vec3 pp = kin.p + vh * ((gamma - 1.0) * vh.dot(kin.p) - gamma * vn * kin.E);
  out.kinematics = Kinematics::of(pp, kin.m);
  out.spinor_transform =
      std::cosh(eta / 2.0) * Mat4::Identity() - std::sinh(eta / 2.0) * alpha_dot(vh);
  out.gamma = gamma;
  out.rapidity = eta;
  return out;
}

double max_abs(const Mat4& a) { return a.cwiseAbs().maxCoeff(); }
double max_abs(const Vec4c& a) { return a.cwiseAbs().maxCoeff(); }

}  // namespace diracops
