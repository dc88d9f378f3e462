#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "diracops/core.hpp"
#include "diracops/numerics.hpp"
#include "diracops/operators.hpp"

using namespace diracops;

namespace {
const double kSqrt3 = std::sqrt(3.0);
Kinematics kz3() { return Kinematics::of({0.0, 0.0, kSqrt3}, 1.0); }

Vec4c electron(const Kinematics& kin, const PolarizationSpinor& w) {
  return plane_wave_bispinor(kin, w).components;
}
}  // namespace

TEST_CASE("canonical position commutators") {
  auto r = canonical_position();
  auto p = momentum_multiplication();
  const Kinematics kin = Kinematics::of({0.4, -0.7, 1.1}, 1.0);
  SUBCASE("[r_x, p_x] = i") {
    const OperatorValue c = commutator(r[0], p[0], kin);
    CHECK(max_abs(Mat4(c.matrix - iu * Mat4::Identity())) < 1e-10);
  }
  SUBCASE("[r_x, r_y] = 0") {
    CHECK(value_norm(commutator(r[0], r[1], kin)) < 1e-12);
  }
  SUBCASE("velocity is alpha") {
    for (int i = 0; i < 3; ++i)
      CHECK(max_abs(Mat4(heisenberg_velocity(r[i], kin) -
                         dirac_constants().alpha[i])) < 1e-12);
  }
}

TEST_CASE("total AM commutes with H, pieces do not") {
  auto J = total_am();
  auto L = canonical_oam();
  auto S = canonical_spin();
  auto H = hamiltonian_operator();
  for (const auto& p : sample_momenta(20, 7)) {
    const Kinematics kin = Kinematics::of(p, 1.0);
    CHECK(value_norm(commutator(J[2], H, kin)) < 1e-10 * std::max(1.0, kin.E));
  }
  const Kinematics kin = Kinematics::of({1, 0, 0}, 1.0);
  CHECK(value_norm(commutator(L[2], H, kin)) > 0.1);
  CHECK(max_abs(heisenberg_velocity(S[2], kin)) > 0.1);
  SUBCASE("su(2) for canonical spin") {
    const OperatorValue c = commutator(S[0], S[1], kin);
    CHECK(max_abs(Mat4(c.matrix - iu * S[2].matrix_at(kin))) < 1e-14);
  }
}

TEST_CASE("projected position closed form") {
  SUBCASE("rest frame matrix part is i beta alpha / 2") {
    const Kinematics kin = Kinematics::of({0, 0, 0}, 1.0);
    const auto& d = dirac_constants();
    auto R = projected_position(Rep::standard);
    CHECK(max_abs(Mat4(R[0].matrix_at(kin) - 0.5 * iu * d.beta * d.alpha[0])) <
          1e-15);
    auto Rfw = projected_position(Rep::fw);
    CHECK(max_abs(Rfw[0].matrix_at(kin)) < 1e-15);
  }
  SUBCASE("matches the projector sandwich") {
    auto R = projected_position(Rep::standard);
    auto r = canonical_position();
    for (const auto& p : sample_momenta(50, 12345)) {
      for (double m : {0.0, 0.1, 1.0, 10.0}) {
        const Kinematics kin = Kinematics::of(p, m);
        for (int i = 0; i < 3; ++i) {
          auto constructed = project_operator(r[i]);
          CHECK(max_abs(Mat4(constructed.matrix_at(kin) - R[i].matrix_at(kin))) <
                1e-10);
        }
      }
    }
  }
}

TEST_CASE("projected spin closed form and sum rule") {
  SUBCASE("rest frame gives canonical spin") {
    const Kinematics kin = Kinematics::of({0, 0, 0}, 1.0);
    auto S = projected_spin(Rep::standard);
    CHECK(max_abs(Mat4(S[2].matrix_at(kin) - dirac_constants().spin[2])) < 1e-15);
  }
  SUBCASE("longitudinal spin is unchanged in the FW form") {
    auto Sfw = projected_spin(Rep::fw);
    const Kinematics kin = kz3();
    CHECK(max_abs(Mat4(Sfw[2].matrix_at(kin) - dirac_constants().spin[2])) <
          1e-14);
    const Vec4c w = electron(kin, PolarizationSpinor::up());
    auto Sstd = projected_spin(Rep::standard);
    CHECK(w.dot(Sstd[2].matrix_at(kin) * w).real() ==
          doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("matches the projector sandwich") {
    auto S = projected_spin(Rep::standard);
    auto s = canonical_spin();
    for (const auto& p : sample_momenta(50, 4242)) {
      for (double m : {0.0, 1.0}) {
        const Kinematics kin = Kinematics::of(p, m);
        for (int i = 0; i < 3; ++i) {
          auto constructed = project_operator(s[i]);
          CHECK(max_abs(Mat4(constructed.matrix_at(kin) - S[i].matrix_at(kin))) <
                1e-10);
        }
      }
    }
  }
  SUBCASE("oam + spin = total AM at sampled momenta") {
    auto L = projected_oam(Rep::standard);
    auto S = projected_spin(Rep::standard);
    auto Lt = nwfw_oam(Rep::standard);
    auto St = nwfw_spin(Rep::standard);
    auto J = total_am();
    for (const auto& p : sample_momenta(10, 5)) {
      const Kinematics kin = Kinematics::of(p, 1.0);
      for (int i = 0; i < 3; ++i) {
        CHECK(max_abs(Mat4(L[i].matrix_at(kin) + S[i].matrix_at(kin) -
                           J[i].matrix_at(kin))) < 1e-12);
        CHECK(max_abs(Mat4(Lt[i].matrix_at(kin) + St[i].matrix_at(kin) -
                           J[i].matrix_at(kin))) < 1e-12);
        for (int l = 0; l < 3; ++l)
          CHECK(std::abs(L[i].scalar_coeff_at(l, kin) -
                         J[i].scalar_coeff_at(l, kin)) < 1e-15);
      }
    }
  }
}

TEST_CASE("nwfw operators") {
  SUBCASE("rest-frame matrix part of the position") {
    const Kinematics kin = Kinematics::of({0, 0, 0}, 2.0);
    auto rt = nwfw_position(Rep::standard);
    const auto& d = dirac_constants();
    CHECK(max_abs(Mat4(rt[0].matrix_at(kin) -
                       iu * d.beta * d.alpha[0] / (2.0 * kin.m))) < 1e-15);
  }
  SUBCASE("canonical commutators") {
    auto rt = nwfw_position(Rep::standard);
    auto St = nwfw_spin(Rep::standard);
    for (const auto& p : sample_momenta(20, 88)) {
      const Kinematics kin = Kinematics::of(p, 1.0);
      CHECK(value_norm(commutator(rt[0], rt[1], kin)) < 1e-8);
      const OperatorValue c = commutator(St[0], St[1], kin);
      CHECK(max_abs(Mat4(c.matrix - iu * St[2].matrix_at(kin))) < 1e-12);
    }
  }
  SUBCASE("fw conjugation recovers the closed forms both ways") {
    auto rt = nwfw_position(Rep::standard);
    auto St = nwfw_spin(Rep::standard);
    auto r_fw = canonical_position(Rep::fw);
    auto s_fw = canonical_spin(Rep::fw);
    for (const auto& p : sample_momenta(50, 31415)) {
      for (double m : {0.1, 1.0, 10.0}) {
        const Kinematics kin = Kinematics::of(p, m);
        for (int i = 0; i < 3; ++i) {
          auto from = fw_conjugate(r_fw[i], FwDirection::from_fw);
          CHECK(max_abs(Mat4(from.matrix_at(kin) - rt[i].matrix_at(kin))) < 1e-8);
          auto back = fw_conjugate(rt[i], FwDirection::to_fw);
          CHECK(max_abs(back.matrix_at(kin)) < 1e-8);
          auto sfrom = fw_conjugate(s_fw[i], FwDirection::from_fw);
          CHECK(max_abs(Mat4(sfrom.matrix_at(kin) - St[i].matrix_at(kin))) < 1e-8);
        }
      }
    }
  }
  SUBCASE("H conjugates to beta E") {
    auto H = hamiltonian_operator();
    for (const auto& p : sample_momenta(10, 11)) {
      const Kinematics kin = Kinematics::of(p, 1.0);
      auto hfw = fw_conjugate(H, FwDirection::to_fw);
      CHECK(max_abs(Mat4(hfw.matrix_at(kin) - kin.E * dirac_constants().beta)) <
            1e-12 * kin.E);
    }
  }
}

TEST_CASE("representation and coefficient guards") {
  auto r = canonical_position();
  auto r_fw = canonical_position(Rep::fw);
  CHECK_THROWS_AS(commutator(r[0], r_fw[1], kz3()), std::invalid_argument);
  CHECK_THROWS_AS(project_operator(r_fw[0]), std::invalid_argument);
  CHECK_THROWS_AS(fw_conjugate(r_fw[0], FwDirection::to_fw), std::invalid_argument);
  CHECK_THROWS_AS(fw_conjugate(r[0], FwDirection::from_fw), std::invalid_argument);
  auto N = center_of_energy();
  CHECK_THROWS_AS(commutator(N[0], r[0], kz3()), std::invalid_argument);
  CHECK_THROWS_AS(commutator(r[0], r[1], kz3(), -1.0), std::invalid_argument);
  SUBCASE("projection leaves p and J unchanged") {
    auto p = momentum_multiplication();
    auto J = total_am();
    for (const auto& pp : sample_momenta(10, 3)) {
      const Kinematics kin = Kinematics::of(pp, 1.0);
      CHECK(max_abs(Mat4(project_operator(p[2]).matrix_at(kin) -
                         p[2].matrix_at(kin))) < 1e-10 * std::max(1.0, kin.E));
      CHECK(max_abs(Mat4(project_operator(J[2]).matrix_at(kin) -
                         J[2].matrix_at(kin))) < 1e-10);
    }
  }
}

TEST_CASE("commutator structure of the projected family") {
  auto S = projected_spin(Rep::standard);
  auto R = projected_position(Rep::standard);
  for (const auto& p : sample_momenta(20, 606)) {
    const Kinematics kin = Kinematics::of(p, 1.0);
    const double e2 = kin.E * kin.E;
    Mat4 pdots = Mat4::Zero();
    for (int i = 0; i < 3; ++i) pdots += kin.p[i] * S[i].matrix_at(kin);
    const OperatorValue c = commutator(S[0], S[1], kin);
    const Mat4 rhs = iu * (S[2].matrix_at(kin) - pdots * kin.p[2] / e2);
    CHECK(max_abs(Mat4(c.matrix - rhs)) < 1e-6);
    const OperatorValue cr = commutator(R[0], R[1], kin);
    CHECK(max_abs(Mat4(cr.matrix + iu * S[2].matrix_at(kin) / e2)) < 1e-6);
  }
}

TEST_CASE("heisenberg velocities of the dressed positions") {
  auto R = projected_position(Rep::standard);
  auto S = projected_spin(Rep::standard);
  const Kinematics kin = kz3();
  const Mat4 phinv = hamiltonian(kin) / (kin.E * kin.E);
  CHECK(max_abs(Mat4(heisenberg_velocity(R[2], kin) - kin.p[2] * phinv)) < 1e-12);
  const Vec4c w = electron(kin, PolarizationSpinor::up());
  CHECK(w.dot(heisenberg_velocity(R[2], kin) * w).real() ==
        doctest::Approx(kSqrt3 / 2.0).epsilon(1e-12));
  for (const auto& p : sample_momenta(20, 13)) {
    const Kinematics k = Kinematics::of(p, 1.0);
    for (int i = 0; i < 3; ++i)
      CHECK(max_abs(heisenberg_velocity(S[i], k)) < 1e-10 * std::max(1.0, k.E));
  }
}

TEST_CASE("berry connection and curvature") {
  SUBCASE("connection vanishes at rest, curvature is -S/m^2 on electrons") {
    const Kinematics kin = Kinematics::of({1e-7, 0, 0}, 1.0);
    const auto a = berry_connection(kin);
    for (const auto& m : a) CHECK(max_abs(m) < 1e-6);
    const auto f = berry_curvature(kin);
    const Vec4c w = electron(kin, PolarizationSpinor::up());
    CHECK(w.dot(f[2] * w).real() == doctest::Approx(-0.5).epsilon(1e-5));
  }
  SUBCASE("electron-subspace value at the reference momentum") {
    const auto f = berry_curvature(kz3());
    const Vec4c w =
        fw_unitary(kz3()) * electron(kz3(), PolarizationSpinor::up());
    CHECK(w.dot(f[2] * w).real() == doctest::Approx(-0.125).epsilon(1e-9));
  }
  SUBCASE("matches the position commutator route") {
    auto Rfw = projected_position(Rep::fw);
    for (const auto& p : sample_momenta(15, 500)) {
      for (double m : {0.0, 1.0}) {
        const Kinematics kin = Kinematics::of(p, m);
        const auto f = berry_curvature(kin);
        const OperatorValue c = commutator(Rfw[0], Rfw[1], kin);
        CHECK(max_abs(Mat4(c.matrix - iu * f[2])) < 1e-6);
        // the curvature is -projected_spin/E^2 in the same representation
        auto Sfw = projected_spin(Rep::fw);
        CHECK(max_abs(Mat4(f[2] + Sfw[2].matrix_at(kin) / (kin.E * kin.E))) <
              1e-6);
      }
    }
  }
}

TEST_CASE("pauli-lubanski vector") {
  SUBCASE("rest frame") {
    const Kinematics kin = Kinematics::of({0, 0, 0}, 1.0);
    const auto pl = pauli_lubanski(kin);
    const auto& d = dirac_constants();
    CHECK(max_abs(pl.w0) < 1e-15);
    for (int i = 0; i < 3; ++i)
      CHECK(max_abs(Mat4(pl.wvec[i] - d.beta * d.spin[i])) < 1e-15);
  }
  SUBCASE("spatial part over H is the projected spin") {
    auto S = projected_spin(Rep::standard);
    for (const auto& p : sample_momenta(20, 321)) {
      const Kinematics kin = Kinematics::of(p, 1.0);
      const auto pl = pauli_lubanski(kin);
      const Mat4 hinv = hamiltonian(kin) / (kin.E * kin.E);
      for (int i = 0; i < 3; ++i)
        CHECK(max_abs(Mat4(pl.wvec[i] * hinv - S[i].matrix_at(kin))) <
              1e-12 * std::max(1.0, kin.E));
    }
  }
  SUBCASE("longitudinal expectation and the invariant") {
    const auto pl = pauli_lubanski(kz3());
    const Vec4c w = electron(kz3(), PolarizationSpinor::up());
    CHECK(w.dot(pl.w0 * w).real() ==
          doctest::Approx(kSqrt3 * 0.5).epsilon(1e-12));
    Mat4 inv = pl.w0 * pl.w0;
    for (int i = 0; i < 3; ++i) inv -= pl.wvec[i] * pl.wvec[i];
    CHECK(w.dot(inv * w).real() == doctest::Approx(-0.75).epsilon(1e-10));
    CHECK(max_abs(Mat4(inv + 0.75 * Mat4::Identity())) < 1e-10);
  }
}

TEST_CASE("center of energy and the Pryce construction") {
  SUBCASE("matrix part of N at rest") {
    const Kinematics kin = Kinematics::of({0, 0, 0}, 1.0);
    auto N = center_of_energy();
    CHECK(max_abs(Mat4(N[0].matrix_at(kin) -
                       0.5 * iu * dirac_constants().alpha[0])) < 1e-15);
  }
  SUBCASE("q equals the projected position") {
    const auto rep = pryce_q_equivalence(50, 7);
    CHECK(rep.pass);
    CHECK(rep.max_deviation < 1e-8);
  }
  SUBCASE("N velocity is the momentum") {
    for (const auto& p : sample_momenta(10, 17)) {
      const Kinematics kin = Kinematics::of(p, 1.0);
      auto N = center_of_energy();
      for (int i = 0; i < 3; ++i)
        CHECK(max_abs(Mat4(heisenberg_velocity(N[i], kin) -
                           kin.p[i] * Mat4::Identity())) < 1e-12 * kin.E);
    }
  }
}

TEST_CASE("massless continuity of the projected family") {
  auto R = projected_position(Rep::standard);
  auto S = projected_spin(Rep::fw);
  for (const auto& p : sample_momenta(20, 2718)) {
    const Kinematics k0 = Kinematics::of(p, 0.0);
    const Kinematics k1 = Kinematics::of(p, 1e-6);
    for (int i = 0; i < 3; ++i) {
      CHECK(max_abs(Mat4(R[i].matrix_at(k0) - R[i].matrix_at(k1))) < 1e-4);
      CHECK(max_abs(Mat4(S[i].matrix_at(k0) - S[i].matrix_at(k1))) < 1e-4);
    }
  }
}

TEST_CASE("operator table suite is green and deterministic") {
  TableOptions opt;
  opt.samples = 10;
  opt.seed = 7;
  const auto a = verify_operator_table(opt);
  const auto b = verify_operator_table(opt);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].pass);
    CHECK(a[i].max_deviation == b[i].max_deviation);
  }
  SUBCASE("massless run skips the rest-frame family") {
    TableOptions m0;
    m0.samples = 5;
    m0.masses = {0.0};
    const auto rows = verify_operator_table(m0);
    bool found_skip = false;
    for (const auto& r : rows) {
      if (r.identity.rfind("nwfw_", 0) == 0) {
        CHECK(r.note.find("skipped") != std::string::npos);
        found_skip = true;
      }
      CHECK(r.pass);
    }
    CHECK(found_skip);
  }
}

TEST_CASE("hermiticity pattern of observable operators") {
  for (const auto& p : sample_momenta(10, 40)) {
    const Kinematics kin = Kinematics::of(p, 1.0);
    for (auto rep : {Rep::standard, Rep::fw}) {
      for (const auto& fam :
           {projected_position(rep), nwfw_position(rep), projected_oam(rep)}) {
        for (const auto& op : fam) {
          const Mat4 m = op.matrix_at(kin);
          CHECK(max_abs(Mat4(m - m.adjoint())) < 1e-12 * std::max(1.0, kin.E));
          for (int l = 0; l < 3; ++l)
            CHECK(std::abs(op.scalar_coeff_at(l, kin).real()) <
                  1e-12 * std::max(1.0, kin.E));
        }
      }
    }
  }
}
