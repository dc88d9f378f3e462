#include "diracops/pauli_limit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "diracops/numerics.hpp"

namespace diracops {

namespace {

double eps(int i, int j, int k) { return 0.5 * (i - j) * (j - k) * (k - i); }

/// Residual norm of (r^2 + (L.S)/m^2) against the exact operator square at
/// one momentum: the mismatched L.S coefficient plus the dropped A^2.
double r2_residual_norm(const Vec3& p, double m) {
  const double E = energy(p, m);
  const double g = 1.0 / (E * (E + m));
  const double c = 2.0 * g - 1.0 / (m * m);
  const auto& d = dirac_constants();
  double coeff_norm = 0.0;
  for (int j = 0; j < 3; ++j) {
    Mat4 mcoef = Mat4::Zero();
    for (int b = 0; b < 3; ++b)
      for (int k = 0; k < 3; ++k) {
        const double e = eps(b, j, k);
        if (e != 0.0) mcoef += e * p[k] * d.spin[b];
      }
    coeff_norm = std::max(coeff_norm, max_abs(Mat4(c * mcoef)));
  }
  Mat4 a2 = Mat4::Zero();
  for (int i = 0; i < 3; ++i) {
    Mat4 ai = Mat4::Zero();
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const double e = eps(i, j, k);
        if (e != 0.0) ai += e * p[j] * d.spin[k];
      }
    ai *= g;
    a2 += ai * ai;
  }
  return coeff_norm + max_abs(a2);
}

}  // namespace

ExpansionReport r_squared_identity(const Kinematics& kin) {
  if (kin.m <= 0.0)
    throw std::invalid_argument("r_squared_identity: requires m > 0");
  const double ratio = kin.p.norm() / kin.m;
  if (ratio > 0.3)
    throw std::invalid_argument("r_squared_identity: requires p/m <= 0.3");
  ExpansionReport rep;
  rep.identity = "r_squared_covariant_expansion";
  rep.ratio = ratio;
  rep.min_order = 1.8;
  const double r1 = r2_residual_norm(kin.p, kin.m);
  const double r2 = r2_residual_norm(0.5 * kin.p, kin.m);
  const double r4 = r2_residual_norm(0.25 * kin.p, kin.m);
  rep.residual = r1;
  rep.observed_order = std::min(std::log2(r1 / r2), std::log2(r2 / r4));
  rep.pass = rep.observed_order >= rep.min_order;
  return rep;
}

namespace {

struct Grid3 {
  int n = 0;
  double dp = 0.0;
  std::vector<double> axis;   // momentum values per index
  std::vector<double> xfreq;  // conjugate position values per index
};

Grid3 make_grid(int n, double extent) {
  Grid3 g;
  g.n = n;
  g.dp = 2.0 * extent / n;
  g.axis.resize(n);
  g.xfreq.resize(n);
  const double window = 2.0 * extent;
  for (int i = 0; i < n; ++i) {
    g.axis[i] = -extent + i * g.dp;
    const int k = (i <= n / 2) ? i : i - n;
    g.xfreq[i] = 2.0 * std::numbers::pi * k / window;
  }
  return g;
}

using Field2 = std::array<std::vector<cplx>, 2>;  // two spinor components

std::size_t idx3(int n, int ix, int iy, int iz) {
  return (static_cast<std::size_t>(ix) * n + iy) * n + iz;
}

/// Spectral d/dp along one axis of a scalar field on the periodic grid.
std::vector<cplx> spectral_deriv(const std::vector<cplx>& f, const Grid3& g, int axis) {
  const int n = g.n;
  std::vector<cplx> out(f.size());
  std::vector<cplx> line(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) {
        const std::size_t id = axis == 0   ? idx3(n, c, a, b)
                               : axis == 1 ? idx3(n, a, c, b)
                                           : idx3(n, a, b, c);
        line[c] = f[id];
      }
      fft(line, -1);
      for (int c = 0; c < n; ++c) {
        int k = (c <= n / 2) ? c : c - n;
        if (2 * c == n) k = 0;
        line[c] *= iu * (2.0 * std::numbers::pi * k / (n * g.dp));
      }
      fft(line, +1);
      for (int c = 0; c < n; ++c) {
        const std::size_t id = axis == 0   ? idx3(n, c, a, b)
                               : axis == 1 ? idx3(n, a, c, b)
                                           : idx3(n, a, b, c);
        out[id] = line[c] / static_cast<double>(n);
      }
    }
  return out;
}

/// Full 3D transform to the position representation (unscaled).
std::vector<cplx> to_position(const std::vector<cplx>& f, const Grid3& g) {
  const int n = g.n;
  std::vector<cplx> out = f;
  std::vector<cplx> line(n);
  for (int axis = 0; axis < 3; ++axis) {
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        for (int c = 0; c < n; ++c) {
          const std::size_t id = axis == 0   ? idx3(n, c, a, b)
                                 : axis == 1 ? idx3(n, a, c, b)
                                             : idx3(n, a, b, c);
          line[c] = out[id];
        }
        fft(line, +1);
        for (int c = 0; c < n; ++c) {
          const std::size_t id = axis == 0   ? idx3(n, c, a, b)
                                 : axis == 1 ? idx3(n, a, c, b)
                                             : idx3(n, a, b, c);
          out[id] = line[c];
        }
      }
  }
  return out;
}

/// (L.S) psi for a two-component field, L_b = eps_bjk p_k (i d_j), S = sigma/2.
Field2 apply_ls(const Field2& psi, const Grid3& g) {
  const int n = g.n;
  const auto& sigma = pauli_matrices();
  std::array<std::array<std::vector<cplx>, 3>, 2> dpsi;
  for (int comp = 0; comp < 2; ++comp)
    for (int axis = 0; axis < 3; ++axis)
      dpsi[comp][axis] = spectral_deriv(psi[comp], g, axis);

  Field2 out;
  for (auto& o : out) o.assign(psi[0].size(), cplx{0.0, 0.0});
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const std::size_t id = idx3(n, ix, iy, iz);
        const double p[3] = {g.axis[ix], g.axis[iy], g.axis[iz]};
        Vec2c l[3];
        for (int b = 0; b < 3; ++b) {
          cplx lb0{0.0, 0.0}, lb1{0.0, 0.0};
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
              const double e = eps(b, j, k);
              if (e == 0.0) continue;
              lb0 += e * p[k] * iu * dpsi[0][j][id];
              lb1 += e * p[k] * iu * dpsi[1][j][id];
            }
          l[b] = Vec2c(lb0, lb1);
        }
        Vec2c acc = Vec2c::Zero();
        for (int b = 0; b < 3; ++b) acc += 0.5 * (sigma[b] * l[b]);
        out[0][id] += acc(0);
        out[1][id] += acc(1);
      }
  return out;
}

}  // namespace

SoiComparison soi_potential_term(const std::function<double(double)>& V,
                                 const std::function<double(double)>& Vprime,
                                 double mass, const PacketOptions& opt) {
  if (mass <= 0.0)
    throw std::invalid_argument("soi_potential_term: requires m > 0");
  const double p0 = opt.width_over_m * mass;
  if (opt.width_over_m > 0.3)
    throw std::invalid_argument(
        "soi_potential_term: packet has significant support beyond p/m = 0.3");
  const Grid3 g = make_grid(opt.grid, opt.extent_sigmas * p0);
  const int n = g.n;
  const std::size_t total = static_cast<std::size_t>(n) * n * n;

  // orbital l = 1 Gaussian packet, stretched spin state
  Field2 psi;
  for (auto& c : psi) c.assign(total, cplx{0.0, 0.0});
  const int spin_comp = opt.spin_up ? 0 : 1;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const double px = g.axis[ix], py = g.axis[iy], pz = g.axis[iz];
        const double p2 = px * px + py * py + pz * pz;
        psi[spin_comp][idx3(n, ix, iy, iz)] =
            cplx(px, py) * std::exp(-p2 / (4.0 * p0 * p0));
      }

  // multiplicative pieces in momentum space
  const auto& sigma = pauli_matrices();
  Field2 u_cov, u_ls;
  for (auto& c : u_cov) c.assign(total, cplx{0.0, 0.0});
  const Field2 ls = apply_ls(psi, g);
  u_ls = ls;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const std::size_t id = idx3(n, ix, iy, iz);
        const Vec3 p(g.axis[ix], g.axis[iy], g.axis[iz]);
        const double E = std::sqrt(mass * mass + p.squaredNorm());
        const double gf = 1.0 / (E * (E + mass));
        // A^2 for the electron block: A_i = g (p x s)_i
        Mat2 a2 = Mat2::Zero();
        for (int i = 0; i < 3; ++i) {
          Mat2 ai = Mat2::Zero();
          for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) {
              const double e = eps(i, j, k);
              if (e != 0.0) ai += e * p[j] * 0.5 * sigma[k];
            }
          ai *= gf;
          a2 += ai * ai;
        }
        const Vec2c ps(psi[0][id], psi[1][id]);
        const Vec2c lsv(ls[0][id], ls[1][id]);
        const Vec2c val = 2.0 * gf * lsv + a2 * ps;
        u_cov[0][id] = val(0);
        u_cov[1][id] = val(1);
      }

  // to position space
  Field2 phi, ucov_x, uls_x;
  for (int c = 0; c < 2; ++c) {
    phi[c] = to_position(psi[c], g);
    ucov_x[c] = to_position(u_cov[c], g);
    uls_x[c] = to_position(u_ls[c], g);
  }
  const double dx = 2.0 * std::numbers::pi / (n * g.dp);

  double norm = 0.0, base = 0.0;
  double cov_corr = 0.0, pauli_corr = 0.0;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const std::size_t id = idx3(n, ix, iy, iz);
        const int kx = (ix <= n / 2) ? ix : ix - n;
        const int ky = (iy <= n / 2) ? iy : iy - n;
        const int kz = (iz <= n / 2) ? iz : iz - n;
        const double x = kx * dx, y = ky * dx, z = kz * dx;
        const double r = std::sqrt(x * x + y * y + z * z);
        const double dens =
            std::norm(phi[0][id]) + std::norm(phi[1][id]);
        norm += dens;
        base += dens * V(r);
        const double b_cov = r > 0.0 ? Vprime(r) / (2.0 * r)
                                     : Vprime(1e-12) / (2e-12);
        const double b_pauli = b_cov / (mass * mass);
        const cplx mix_cov = std::conj(phi[0][id]) * ucov_x[0][id] +
                             std::conj(phi[1][id]) * ucov_x[1][id];
        const cplx mix_ls = std::conj(phi[0][id]) * uls_x[0][id] +
                            std::conj(phi[1][id]) * uls_x[1][id];
        cov_corr += b_cov * mix_cov.real();
        pauli_corr += b_pauli * mix_ls.real();
      }

  SoiComparison out;
  out.base = base / norm;
  out.covariant = out.base + cov_corr / norm;
  out.pauli = out.base + pauli_corr / norm;
  out.correction = pauli_corr / norm;
  out.relative_gap = out.correction != 0.0
                         ? std::abs(out.covariant - out.pauli) / std::abs(out.correction)
                         : std::abs(out.covariant - out.pauli);
  return out;
}

namespace {

double correspondence_residual(double p0, double mass, int n) {
  const double extent = 6.0 * p0;
  const double dp = 2.0 * extent / n;
  const auto& sigma = pauli_matrices();
  double num = 0.0, den = 0.0;
  for (int ix = 0; ix < n; ++ix)
    for (int iy = 0; iy < n; ++iy)
      for (int iz = 0; iz < n; ++iz) {
        const Vec3 p(-extent + ix * dp, -extent + iy * dp, -extent + iz * dp);
        const double p2 = p.squaredNorm();
        const double gauss = std::exp(-p2 / (4.0 * p0 * p0));
        if (gauss < 1e-14) continue;
        const Vec2c phi(gauss, 0.0);
        const Mat2 sp = p.x() * sigma[0] + p.y() * sigma[1] + p.z() * sigma[2];
        const Vec2c chi = (sp * phi) / (2.0 * mass);
        Vec4c psi4;
        psi4 << phi(0), phi(1), chi(0), chi(1);
        Kinematics kin;
        if (p2 > 0.0)
          kin = Kinematics::of(p, mass);
        else
          kin = Kinematics::of(Vec3::Zero(), mass);
        const Vec4c fw = fw_unitary(kin) * psi4;
        const Vec2c target = (1.0 + p2 / (8.0 * mass * mass)) * phi;
        num += (fw.head<2>() - target).squaredNorm();
        den += phi.squaredNorm();
      }
  return std::sqrt(num / den);
}

}  // namespace

ExpansionReport pauli_correspondence(double width_over_m, double mass, int grid) {
  if (width_over_m <= 0.0 || width_over_m > 0.3)
    throw std::invalid_argument(
        "pauli_correspondence: packet width must lie in (0, 0.3] in units of m");
  ExpansionReport rep;
  rep.identity = "pauli_wavefunction_correspondence";
  rep.ratio = width_over_m;
  rep.min_order = 3.0;
  const double r1 = correspondence_residual(width_over_m * mass, mass, grid);
  const double r2 = correspondence_residual(0.5 * width_over_m * mass, mass, grid);
  const double r4 = correspondence_residual(0.25 * width_over_m * mass, mass, grid);
  rep.residual = r1;
  rep.observed_order = std::min(std::log2(r1 / r2), std::log2(r2 / r4));
  rep.pass = rep.observed_order >= rep.min_order;
  return rep;
}

}  // namespace diracops
