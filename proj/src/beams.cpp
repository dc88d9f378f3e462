#include "diracops/beams.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "diracops/numerics.hpp"

namespace diracops {

namespace {

constexpr double kAnnulusHalfWidthSigmas = 7.0;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

struct DerivedSpectrum {
  // Working amplitudes (possibly FW-transformed) plus their grid derivatives.
  std::vector<Vec4c> a;
  std::vector<Vec4c> d_phi;  // dA/dphi
  std::vector<Vec4c> d_r;    // dA/dp_perp (annulus only)
  bool has_radial = false;
};

std::vector<Vec4c> phi_derivative_rows(const std::vector<Vec4c>& a, int n_r, int n_phi) {
  std::vector<Vec4c> out(a.size());
  for (int r = 0; r < n_r; ++r) {
    for (int comp = 0; comp < 4; ++comp) {
      std::vector<cplx> row(n_phi);
      for (int c = 0; c < n_phi; ++c) row[c] = a[r * n_phi + c](comp);
      auto d = spectral_phi_derivative(row);
      for (int c = 0; c < n_phi; ++c) out[r * n_phi + c](comp) = d[c];
    }
  }
  return out;
}

std::vector<Vec4c> radial_derivative_columns(const std::vector<Vec4c>& a,
                                             const Eigen::MatrixXd& D, int n_r,
                                             int n_phi) {
  std::vector<Vec4c> out(a.size());
  parallel_for(n_phi, [&](std::size_t c) {
    Eigen::VectorXcd col(n_r), dcol(n_r);
    for (int comp = 0; comp < 4; ++comp) {
      for (int r = 0; r < n_r; ++r) col(r) = a[r * n_phi + c](comp);
      dcol = D * col;
      for (int r = 0; r < n_r; ++r) out[r * n_phi + c](comp) = dcol(r);
    }
  });
  return out;
}

DerivedSpectrum derive_spectrum(const BeamSpectrum& beam, Rep rep, bool need_radial) {
  DerivedSpectrum d;
  d.a = beam.amps;
  if (rep == Rep::fw) {
    for (std::size_t i = 0; i < d.a.size(); ++i)
      d.a[i] = fw_unitary(beam.kins[i]) * d.a[i];
  }
  d.d_phi = phi_derivative_rows(d.a, beam.n_r, beam.n_phi);
  if (need_radial) {
    if (beam.is_ring())
      throw std::invalid_argument(
          "expectation: operator requires radial derivatives; use a "
          "gaussian_annulus profile instead of the delta ring");
    static thread_local struct {
      std::vector<double> nodes;
      Eigen::MatrixXd D;
    } cache;
    if (cache.nodes != beam.radial_nodes) {
      cache.nodes = beam.radial_nodes;
      cache.D = differentiation_matrix(beam.radial_nodes);
    }
    d.d_r = radial_derivative_columns(d.a, cache.D, beam.n_r, beam.n_phi);
    d.has_radial = true;
  }
  return d;
}

/// Cartesian transverse gradient of the working amplitude at one sample.
std::array<Vec4c, 2> transverse_gradient(const DerivedSpectrum& d,
                                         const BeamSpectrum& beam, int r, int c) {
  const double phi = beam.phi(c);
  const double cp = std::cos(phi), sp = std::sin(phi);
  const double pr = beam.radial_nodes[r];
  const std::size_t idx = static_cast<std::size_t>(r) * beam.n_phi + c;
  const Vec4c dphi_term = d.d_phi[idx] / pr;
  Vec4c dr_term = Vec4c::Zero();
  if (d.has_radial) dr_term = d.d_r[idx];
  return {Vec4c(cp * dr_term - sp * dphi_term), Vec4c(sp * dr_term + cp * dphi_term)};
}

/// True if the in-plane derivative coefficient is tangential at every sample,
/// i.e. a pure d/dphi on the ring.
bool coeffs_tangential(const MomentumOperator& op, const BeamSpectrum& beam) {
  for (int r = 0; r < beam.n_r; r += std::max(1, beam.n_r / 4)) {
    for (int c = 0; c < beam.n_phi; c += std::max(1, beam.n_phi / 8)) {
      const Kinematics& kin = beam.kin(r, c);
      const double phi = beam.phi(c);
      if (op.scalar_coeffs) {
        const cplx radial = std::cos(phi) * op.scalar_coeff_at(0, kin) +
                            std::sin(phi) * op.scalar_coeff_at(1, kin);
        if (std::abs(radial) > 1e-12 * std::max(1.0, beam.p)) return false;
      } else {
        // Matrix coefficients are tangential only if the radial combination
        // vanishes as a matrix.
        const Mat4 radial = std::cos(phi) * op.coeff_at(0, kin) +
                            std::sin(phi) * op.coeff_at(1, kin);
        if (max_abs(radial) > 1e-12 * std::max(1.0, beam.p)) return false;
      }
    }
  }
  return true;
}

void require_no_z_derivative(const MomentumOperator& op, const BeamSpectrum& beam) {
  for (int r = 0; r < beam.n_r; r += std::max(1, beam.n_r / 4)) {
    for (int c = 0; c < beam.n_phi; c += std::max(1, beam.n_phi / 8)) {
      const Kinematics& kin = beam.kin(r, c);
      if (max_abs(op.coeff_at(2, kin)) > 1e-12 * std::max(1.0, beam.p))
        throw std::invalid_argument(
            "expectation: longitudinal derivative is not representable on a "
            "monochromatic transverse spectrum");
    }
  }
}

}  // namespace

double BeamSpectrum::phi(int c) const {
  return 2.0 * std::numbers::pi * c / n_phi;
}

BeamSpectrum build_spectrum(const BeamParameters& params) {
  if (!(params.E > params.m) || params.m < 0.0)
    throw std::invalid_argument("build_spectrum: requires E > m >= 0");
  if (!(params.theta0 > 0.0 && params.theta0 < std::numbers::pi / 2.0))
    throw std::invalid_argument("build_spectrum: theta0 must lie in (0, pi/2)");
  if (std::abs(params.ell) > 100)
    throw std::invalid_argument("build_spectrum: |ell| must be <= 100");
  if (params.n_phi < 64 || !is_power_of_two(params.n_phi))
    throw std::invalid_argument("build_spectrum: n_phi must be a power of two >= 64");

  BeamSpectrum beam;
  beam.params = params;
  beam.p = std::sqrt(params.E * params.E - params.m * params.m);
  beam.kappa = beam.p * std::sin(params.theta0);
  beam.n_phi = params.n_phi;

  const double dphi = 2.0 * std::numbers::pi / params.n_phi;
  if (params.profile == RadialProfile::delta_ring) {
    beam.n_r = 1;
    beam.radial_nodes = {beam.kappa};
    beam.radial_weights = {dphi};
  } else {
    if (params.n_radial < 2)
      throw std::invalid_argument("build_spectrum: annulus needs n_radial >= 2");
    const double sigma = params.sigma_over_kappa * beam.kappa;
    const double half = kAnnulusHalfWidthSigmas * sigma;
    if (beam.kappa - half <= 0.0 || beam.kappa + half >= beam.p)
      throw std::invalid_argument(
          "build_spectrum: annulus support must stay inside p_perp in (0, p)");
    const Quadrature q =
        gauss_legendre(params.n_radial, beam.kappa - half, beam.kappa + half);
    beam.n_r = params.n_radial;
    beam.radial_nodes = q.nodes;
    beam.radial_weights.resize(beam.n_r);
    for (int r = 0; r < beam.n_r; ++r)
      beam.radial_weights[r] = q.weights[r] * q.nodes[r] * dphi;
  }

  beam.kins.reserve(beam.n_r * beam.n_phi);
  beam.amps.reserve(beam.n_r * beam.n_phi);
  const double sigma = params.sigma_over_kappa * beam.kappa;
  for (int r = 0; r < beam.n_r; ++r) {
    const double pperp = beam.radial_nodes[r];
    const double pz = std::sqrt(beam.p * beam.p - pperp * pperp);
    double envelope = 1.0;
    if (params.profile == RadialProfile::gaussian_annulus) {
      const double d = pperp - beam.kappa;
      envelope = std::exp(-d * d / (4.0 * sigma * sigma));
    }
    for (int c = 0; c < beam.n_phi; ++c) {
      const double phi = beam.phi(c);
      const Vec3 p(pperp * std::cos(phi), pperp * std::sin(phi), pz);
      Kinematics kin = Kinematics::of(p, params.m);
      const Bispinor w = plane_wave_bispinor(kin, params.w);
      const cplx vortex = std::exp(iu * static_cast<double>(params.ell) * phi);
      beam.kins.push_back(kin);
      beam.amps.push_back(envelope * vortex * w.components);
    }
  }

  std::vector<double> terms(beam.kins.size());
  for (int r = 0; r < beam.n_r; ++r)
    for (int c = 0; c < beam.n_phi; ++c)
      terms[r * beam.n_phi + c] =
          beam.weight(r) * beam.amp(r, c).squaredNorm();
  const double norm = pairwise_sum(terms);
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& a : beam.amps) a *= scale;
  return beam;
}

double spectrum_norm(const BeamSpectrum& beam) {
  std::vector<double> terms(beam.kins.size());
  for (int r = 0; r < beam.n_r; ++r)
    for (int c = 0; c < beam.n_phi; ++c)
      terms[r * beam.n_phi + c] = beam.weight(r) * beam.amp(r, c).squaredNorm();
  return pairwise_sum(terms);
}

cplx expectation(const MomentumOperator& op, const BeamSpectrum& beam) {
  require_no_z_derivative(op, beam);
  const bool tangential = coeffs_tangential(op, beam);
  const bool need_radial = !tangential;
  const DerivedSpectrum d = derive_spectrum(beam, op.rep, need_radial);

  const std::size_t total = beam.kins.size();
  std::vector<cplx> terms(total);
  parallel_for(total, [&](std::size_t idx) {
    const int r = static_cast<int>(idx) / beam.n_phi;
    const int c = static_cast<int>(idx) % beam.n_phi;
    const Kinematics& kin = beam.kins[idx];
    const Vec4c& a = d.a[idx];
    Vec4c applied = Vec4c::Zero();
    if (!op.matrix_part.empty()) applied += op.matrix_at(kin) * a;
    if (tangential && op.scalar_coeffs) {
      // c . grad = (c . tangent) (1/p_perp) d/dphi, exact on the ring
      const double phi = beam.phi(c);
      const cplx tang = -std::sin(phi) * op.scalar_coeff_at(0, kin) +
                        std::cos(phi) * op.scalar_coeff_at(1, kin);
      if (tang != cplx{0.0, 0.0})
        applied += (tang / beam.radial_nodes[r]) * d.d_phi[idx];
    } else {
      const auto grad = transverse_gradient(d, beam, r, c);
      applied += op.coeff_at(0, kin) * grad[0];
      applied += op.coeff_at(1, kin) * grad[1];
    }
    terms[idx] = beam.weight(r) * a.dot(applied);
  });
  return pairwise_sum(terms);
}

cplx expectation(const SpinOperator& op, const BeamSpectrum& beam) {
  const DerivedSpectrum d = derive_spectrum(beam, op.rep, false);
  std::vector<cplx> terms(beam.kins.size());
  parallel_for(beam.kins.size(), [&](std::size_t idx) {
    const int r = static_cast<int>(idx) / beam.n_phi;
    terms[idx] = beam.weight(r) * d.a[idx].dot(op.matrix_at(beam.kins[idx]) * d.a[idx]);
  });
  return pairwise_sum(terms);
}

cplx expectation(const MatrixFunction& fn, const BeamSpectrum& beam) {
  std::vector<cplx> terms(beam.kins.size());
  parallel_for(beam.kins.size(), [&](std::size_t idx) {
    const int r = static_cast<int>(idx) / beam.n_phi;
    terms[idx] =
        beam.weight(r) * beam.amps[idx].dot(fn(beam.kins[idx]) * beam.amps[idx]);
  });
  return pairwise_sum(terms);
}

const char* family_name(Family f) {
  switch (f) {
    case Family::canonical: return "canonical";
    case Family::projected: return "projected";
    case Family::nwfw: return "nwfw";
  }
  return "?";
}

ObservableSummary family_summary(const BeamSpectrum& beam, Family family) {
  ObservableSummary s;
  s.family = family;
  s.Delta = (1.0 - beam.params.m / beam.params.E) *
            std::sin(beam.params.theta0) * std::sin(beam.params.theta0);
  switch (family) {
    case Family::canonical: {
      s.Sz = expectation(canonical_spin()[2], beam).real();
      s.Lz = expectation(canonical_oam()[2], beam).real();
      break;
    }
    case Family::projected: {
      s.Sz = expectation(projected_spin(Rep::standard)[2], beam).real();
      s.Lz = expectation(projected_oam(Rep::standard)[2], beam).real();
      break;
    }
    case Family::nwfw: {
      s.Sz = expectation(nwfw_spin(Rep::standard)[2], beam).real();
      s.Lz = expectation(nwfw_oam(Rep::standard)[2], beam).real();
      break;
    }
  }
  s.Jz = expectation(total_am()[2], beam).real();
  return s;
}

std::vector<ObservableSummary> all_family_summaries(const BeamSpectrum& beam) {
  return {family_summary(beam, Family::canonical),
          family_summary(beam, Family::projected),
          family_summary(beam, Family::nwfw)};
}

double nwfw_route_deviation(const BeamSpectrum& beam) {
  const double sz_std = expectation(nwfw_spin(Rep::standard)[2], beam).real();
  const double lz_std = expectation(nwfw_oam(Rep::standard)[2], beam).real();
  // FW route: transform the spectrum, apply the canonical operators.
  const double sz_fw = expectation(nwfw_spin(Rep::fw)[2], beam).real();
  const double lz_fw = expectation(nwfw_oam(Rep::fw)[2], beam).real();
  return std::max(std::abs(sz_std - sz_fw), std::abs(lz_std - lz_fw));
}

Vec3 plane_wave_spin(const Kinematics& kin, const PolarizationSpinor& w) {
  const Vec4c W = plane_wave_bispinor(kin, w).components;
  Vec3 out;
  for (int i = 0; i < 3; ++i)
    out[i] = W.dot(dirac_constants().spin[i] * W).real();
  return out;
}

Vec3 plane_wave_spin_closed_form(const Kinematics& kin, const PolarizationSpinor& w) {
  const auto& sigma = pauli_matrices();
  Vec3 sbar;
  for (int i = 0; i < 3; ++i) sbar[i] = 0.5 * w.w.dot(sigma[i] * w.w).real();
  return (kin.m / kin.E) * sbar +
         kin.p.dot(sbar) * kin.p / (kin.E * (kin.E + kin.m));
}

double magnetic_moment_z(const BeamSpectrum& beam) {
  if (beam.is_ring())
    throw std::invalid_argument(
        "magnetic_moment_z: transverse position needs the annulus profile");
  // (r x alpha)_z = alpha_y (i d/dp_x) - alpha_x (i d/dp_y)
  MomentumOperator op;
  op.label = "moment_z";
  op.rep = Rep::standard;
  op.scalar_coeffs = false;
  op.coeff_matrix[0] = [](const Kinematics&) {
    return Mat4(iu * dirac_constants().alpha[1]);
  };
  op.coeff_matrix[1] = [](const Kinematics&) {
    return Mat4(-iu * dirac_constants().alpha[0]);
  };
  return expectation(op, beam).real();
}

Eigen::Vector2d boosted_centroid(const BeamSpectrum& beam, const Vec3& v,
                                 CentroidKind kind) {
  if (beam.is_ring())
    throw std::invalid_argument("boosted_centroid: needs the annulus profile");
  const double vn = v.norm();
  if (vn > 0.2)
    throw std::invalid_argument("boosted_centroid: |v| must be <= 0.2");
  if (std::abs(v.z()) > 1e-14 * std::max(1.0, vn))
    throw std::invalid_argument("boosted_centroid: v must be transverse to the axis");
  if (vn == 0.0) return Eigen::Vector2d::Zero();

  // The boost matrix is momentum-independent; the sample map p -> p' is
  // affine because every sample shares E, so d/dp'_x = (1/gamma) d/dp_x.
  const BoostResult probe = generic_boost(beam.kins.front(), v);
  const Mat4 B = probe.spinor_transform;
  const double gamma = probe.gamma;

  BeamSpectrum boosted = beam;
  std::vector<Kinematics> bkins(beam.kins.size());
  for (std::size_t i = 0; i < beam.kins.size(); ++i) {
    boosted.amps[i] = B * beam.amps[i];
    bkins[i] = generic_boost(beam.kins[i], v).kinematics;
  }
  const double norm = spectrum_norm(boosted);
  const double scale = 1.0 / std::sqrt(norm);
  for (auto& a : boosted.amps) a *= scale;

  const DerivedSpectrum d = derive_spectrum(boosted, Rep::standard, true);
  const std::size_t total = beam.kins.size();
  const auto& alpha = dirac_constants().alpha;

  std::vector<cplx> tx(total), ty(total), th(total);
  parallel_for(total, [&](std::size_t idx) {
    const int r = static_cast<int>(idx) / beam.n_phi;
    const int c = static_cast<int>(idx) % beam.n_phi;
    const auto grad = transverse_gradient(d, beam, r, c);
    const Vec4c dxp = grad[0] / gamma;  // d/dp'_x
    const Vec4c& dyp = grad[1];         // d/dp'_y
    const Vec4c& a = d.a[idx];
    const double wt = beam.weight(r);
    if (kind == CentroidKind::probability) {
      tx[idx] = wt * a.dot(iu * dxp);
      ty[idx] = wt * a.dot(iu * dyp);
      th[idx] = wt * a.squaredNorm();
    } else {
      const Mat4 h = hamiltonian(bkins[idx]);
      tx[idx] = wt * a.dot(h * (iu * dxp) + 0.5 * iu * (alpha[0] * a));
      ty[idx] = wt * a.dot(h * (iu * dyp) + 0.5 * iu * (alpha[1] * a));
      th[idx] = wt * a.dot(h * a);
    }
  });
  const double den = pairwise_sum(th).real();
  return {pairwise_sum(tx).real() / den, pairwise_sum(ty).real() / den};
}

ComponentSynthesis synthesize_components(const BeamSpectrum& beam,
                                         const std::vector<double>& radii,
                                         int n_angle) {
  for (double r : radii)
    if (r <= 0.0)
      throw std::invalid_argument(
          "synthesize_components: winding circles must have radius > 0");
  if (radii.empty())
    throw std::invalid_argument("synthesize_components: empty radial grid");

  ComponentSynthesis out;
  out.radii = radii;
  out.n_angle = n_angle;
  const int nr_field = static_cast<int>(radii.size());
  for (auto& f : out.fields)
    f.assign(static_cast<std::size_t>(nr_field) * n_angle, cplx{0.0, 0.0});

  // psi(rho, phi_r) = sum over samples of w a exp(i p_perp rho cos(phi - phi_r))
  parallel_for(static_cast<std::size_t>(nr_field), [&](std::size_t ir) {
    const double rho = radii[ir];
    for (int ia = 0; ia < n_angle; ++ia) {
      const double phir = 2.0 * std::numbers::pi * ia / n_angle;
      Vec4c acc = Vec4c::Zero();
      for (int r = 0; r < beam.n_r; ++r) {
        const double pr = beam.radial_nodes[r];
        const double wt = beam.weight(r);
        for (int c = 0; c < beam.n_phi; ++c) {
          const double phase = pr * rho * std::cos(beam.phi(c) - phir);
          acc += wt * std::polar(1.0, phase) * beam.amp(r, c);
        }
      }
      for (int comp = 0; comp < 4; ++comp)
        out.fields[comp][ir * n_angle + ia] = acc(comp);
    }
  });

  for (int comp = 0; comp < 4; ++comp)
    for (const auto& v : out.fields[comp])
      out.global_max = std::max(out.global_max, std::abs(v));

  for (int comp = 0; comp < 4; ++comp) {
    // circle of the component's own radial maximum
    int best_ir = 0;
    double best = -1.0;
    for (int ir = 0; ir < nr_field; ++ir) {
      double mean = 0.0;
      for (int ia = 0; ia < n_angle; ++ia)
        mean += std::abs(out.fields[comp][ir * n_angle + ia]);
      mean /= n_angle;
      if (mean > best) {
        best = mean;
        best_ir = ir;
      }
    }
    if (best < 1e-6 * out.global_max) {
      out.windings[comp] = std::nullopt;
      continue;
    }
    double total_arg = 0.0;
    bool ok = true;
    for (int ia = 0; ia < n_angle; ++ia) {
      const cplx a = out.fields[comp][best_ir * n_angle + ia];
      const cplx b = out.fields[comp][best_ir * n_angle + (ia + 1) % n_angle];
      if (std::abs(a) < 1e-9 * out.global_max || std::abs(b) < 1e-9 * out.global_max) {
        ok = false;
        break;
      }
      total_arg += std::arg(b / a);
    }
    if (!ok) {
      out.windings[comp] = std::nullopt;
      continue;
    }
    out.windings[comp] =
        static_cast<int>(std::lround(total_arg / (2.0 * std::numbers::pi)));
  }
  return out;
}

ZitterTrace zitterbewegung_trace(const Kinematics& kin, const Vec2c& mix,
                                 const ZitterOptions& opt) {
  const double mixnorm = std::sqrt(mix.squaredNorm());
  if (mixnorm == 0.0)
    throw std::invalid_argument("zitterbewegung_trace: empty mix");
  const cplx ce = mix(0) / mixnorm;
  const cplx cp = mix(1) / mixnorm;

  const Vec3 axis = kin.pbar_defined ? kin.pbar : Vec3(0.0, 0.0, 1.0);
  const double q0 = kin.p.norm();
  const double sigma = opt.sigma;
  const int nq = opt.n_q;

  // momentum window, wide enough that the Gaussian tail is negligible for
  // the periodic spectral derivative
  const double qlo = q0 - 10.0 * sigma;
  const double window = 20.0 * sigma;
  const double dq = window / nq;

  const PolarizationSpinor w = PolarizationSpinor::up();
  std::vector<double> qs(nq), Es(nq), g(nq);
  std::vector<Vec4c> We(nq), Vp(nq);
  std::vector<Mat4> Aaxis(nq);
  const auto calR = projected_position(Rep::standard);
  for (int i = 0; i < nq; ++i) {
    qs[i] = qlo + i * dq;
    const Kinematics k = Kinematics::of(qs[i] * axis, kin.m);
    Es[i] = k.E;
    g[i] = std::exp(-(qs[i] - q0) * (qs[i] - q0) / (4.0 * sigma * sigma));
    We[i] = plane_wave_bispinor(k, w).components;
    Vp[i] = negative_energy_bispinor(k, w).components;
    Mat4 a = Mat4::Zero();
    for (int j = 0; j < 3; ++j) a += axis[j] * calR[j].matrix_at(k);
    Aaxis[i] = a;
  }
  double norm = 0.0;
  for (int i = 0; i < nq; ++i)
    norm += (std::norm(ce) + std::norm(cp)) * g[i] * g[i] * dq;
  const double amp_scale = 1.0 / std::sqrt(norm);

  const double E0 = energy(q0 * axis, kin.m);
  const double dt = (2.0 * std::numbers::pi / (2.0 * E0)) / opt.samples_per_period;

  ZitterTrace tr;
  tr.expected_frequency = 2.0 * E0;
  tr.times.resize(opt.n_t);
  tr.canonical.resize(opt.n_t);
  tr.projected.resize(opt.n_t);

  std::vector<std::complex<double>> buf(nq);
  std::vector<Vec4c> at(nq), dat(nq);
  for (int it = 0; it < opt.n_t; ++it) {
    const double t = it * dt;
    tr.times[it] = t;
    for (int i = 0; i < nq; ++i) {
      const cplx phase_e = std::exp(-iu * Es[i] * t);
      const cplx phase_p = std::exp(iu * Es[i] * t);
      at[i] = amp_scale * g[i] * (ce * phase_e * We[i] + cp * phase_p * Vp[i]);
    }
    // spectral d/dq over the window
    for (int comp = 0; comp < 4; ++comp) {
      for (int i = 0; i < nq; ++i) buf[i] = at[i](comp);
      fft(buf, -1);
      for (int k = 0; k < nq; ++k) {
        int freq = (k <= nq / 2) ? k : k - nq;
        if (2 * k == nq) freq = 0;
        buf[k] *= iu * (2.0 * std::numbers::pi * freq / window);
      }
      fft(buf, +1);
      for (int i = 0; i < nq; ++i) dat[i](comp) = buf[i] / static_cast<double>(nq);
    }
    cplx zc{0.0, 0.0}, zp{0.0, 0.0};
    for (int i = 0; i < nq; ++i) {
      zc += at[i].dot(iu * dat[i]) * dq;
      zp += at[i].dot(Aaxis[i] * at[i]) * dq;
    }
    tr.canonical[it] = zc.real();
    tr.projected[it] = zc.real() + zp.real();
  }

  auto linear_fit = [&](const std::vector<double>& y, double& slope, double& resid) {
    const int n = static_cast<int>(y.size());
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (int i = 0; i < n; ++i) {
      st += tr.times[i];
      sy += y[i];
      stt += tr.times[i] * tr.times[i];
      sty += tr.times[i] * y[i];
    }
    slope = (n * sty - st * sy) / (n * stt - st * st);
    const double icept = (sy - slope * st) / n;
    resid = 0.0;
    for (int i = 0; i < n; ++i)
      resid = std::max(resid, std::abs(y[i] - slope * tr.times[i] - icept));
  };
  linear_fit(tr.canonical, tr.slope_canonical, tr.resid_canonical);
  linear_fit(tr.projected, tr.slope_projected, tr.resid_projected);

  // FFT peak of the detrended canonical trace, quadratically interpolated
  {
    std::vector<std::complex<double>> z(opt.n_t);
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (int i = 0; i < opt.n_t; ++i) {
      st += tr.times[i];
      sy += tr.canonical[i];
      stt += tr.times[i] * tr.times[i];
      sty += tr.times[i] * tr.canonical[i];
    }
    const double slope = (opt.n_t * sty - st * sy) / (opt.n_t * stt - st * st);
    const double icept = (sy - slope * st) / opt.n_t;
    double amp = 0.0;
    for (int i = 0; i < opt.n_t; ++i) {
      const double r = tr.canonical[i] - slope * tr.times[i] - icept;
      z[i] = r;
      amp = std::max(amp, std::abs(r));
    }
    tr.oscillation_amplitude = amp;
    fft(z, -1);
    int peak = 1;
    double best = 0.0;
    for (int k = 1; k < opt.n_t / 2; ++k) {
      const double m = std::abs(z[k]);
      if (m > best) {
        best = m;
        peak = k;
      }
    }
    const double dw = 2.0 * std::numbers::pi / (opt.n_t * dt);
    double shift = 0.0;
    if (peak > 1 && peak < opt.n_t / 2 - 1) {
      const double y0 = std::abs(z[peak - 1]);
      const double y1 = std::abs(z[peak]);
      const double y2 = std::abs(z[peak + 1]);
      const double denom = y0 - 2.0 * y1 + y2;
      if (denom != 0.0) shift = 0.5 * (y0 - y2) / denom;
    }
    tr.peak_frequency = (peak + shift) * dw;
  }
  return tr;
}

}  // namespace diracops
