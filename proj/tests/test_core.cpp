#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "diracops/core.hpp"
#include "diracops/numerics.hpp"

using namespace diracops;

namespace {
const double kSqrt3 = std::sqrt(3.0);

Kinematics kz3() { return Kinematics::of({0.0, 0.0, kSqrt3}, 1.0); }
}  // namespace

TEST_CASE("dirac matrices act as expected on basis spinors") {
  const auto& d = dirac_constants();
  Vec4c e1(1, 0, 0, 0);
  CHECK(max_abs(Vec4c(d.beta * e1 - e1)) == 0.0);
  CHECK(max_abs(Vec4c(d.alpha[2] * e1 - Vec4c(0, 0, 1, 0))) == 0.0);

  Eigen::SelfAdjointEigenSolver<Mat4> es(d.spin[2]);
  Eigen::Vector4d ev = es.eigenvalues();
  std::sort(ev.data(), ev.data() + 4);
  CHECK(ev(0) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(ev(1) == doctest::Approx(-0.5).epsilon(1e-15));
  CHECK(ev(2) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ev(3) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("clifford algebra holds exactly") {
  const auto& d = dirac_constants();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Mat4 anti = d.alpha[i] * d.alpha[j] + d.alpha[j] * d.alpha[i];
      Mat4 expect = (i == j) ? Mat4(2.0 * Mat4::Identity()) : Mat4(Mat4::Zero());
      CHECK(max_abs(Mat4(anti - expect)) < 1e-15);
    }
    CHECK(max_abs(Mat4(d.alpha[i] * d.beta + d.beta * d.alpha[i])) < 1e-15);
  }
  CHECK(max_abs(Mat4(d.beta * d.beta - Mat4::Identity())) < 1e-15);
}

TEST_CASE("energy and its rejections") {
  CHECK(energy({3, 0, 4}, 0.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(energy({0, 0, 0}, 2.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(energy({0, 0, kSqrt3}, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(energy({1, 0, 0}, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(energy({0, 0, 0}, 0.0), std::invalid_argument);
  CHECK_FALSE(Kinematics::of({0, 0, 0}, 1.0).pbar_defined);
  CHECK(Kinematics::of({0, 0, 2}, 1.0).pbar_defined);
}

TEST_CASE("plane-wave bispinor") {
  SUBCASE("rest frame") {
    auto b = plane_wave_bispinor(Kinematics::of({0, 0, 0}, 1.0),
                                 PolarizationSpinor::up());
    CHECK(max_abs(Vec4c(b.components - Vec4c(1, 0, 0, 0))) < 1e-15);
  }
  SUBCASE("longitudinal momentum") {
    auto b = plane_wave_bispinor(kz3(), PolarizationSpinor::up());
    CHECK(max_abs(Vec4c(b.components -
                        Vec4c(std::sqrt(3.0) / 2.0, 0, 0.5, 0))) < 1e-15);
  }
  SUBCASE("eigenvector property at random momenta") {
    for (const auto& p : sample_momenta(40, 991)) {
      for (double m : {0.0, 0.1, 1.0, 10.0}) {
        const Kinematics kin = Kinematics::of(p, m);
        const auto b = plane_wave_bispinor(kin, PolarizationSpinor::down());
        CHECK(std::abs(b.components.squaredNorm() - 1.0) < 1e-12);
        CHECK(max_abs(Vec4c(hamiltonian(kin) * b.components -
                            kin.E * b.components)) < 1e-10 * kin.E);
      }
    }
  }
}

TEST_CASE("negative-energy bispinor") {
  SUBCASE("rest frame") {
    auto v = negative_energy_bispinor(Kinematics::of({0, 0, 0}, 1.0),
                                      PolarizationSpinor::up());
    CHECK(max_abs(Vec4c(v.components - Vec4c(0, 0, 1, 0))) < 1e-15);
  }
  SUBCASE("eigenvalue, orthogonality and projector membership") {
    for (const auto& p : sample_momenta(20, 313)) {
      const Kinematics kin = Kinematics::of(p, 1.0);
      const auto v = negative_energy_bispinor(kin, PolarizationSpinor::up());
      CHECK(std::abs(v.components.squaredNorm() - 1.0) < 1e-12);
      CHECK(max_abs(Vec4c(hamiltonian(kin) * v.components +
                          kin.E * v.components)) < 1e-10 * kin.E);
      for (auto w : {PolarizationSpinor::up(), PolarizationSpinor::down()}) {
        const auto e = plane_wave_bispinor(kin, w);
        CHECK(std::abs(e.components.dot(v.components)) < 1e-12);
      }
      CHECK(max_abs(Vec4c(projectors(kin).minus * v.components - v.components)) <
            1e-12);
    }
  }
}

TEST_CASE("fw unitary diagonalizes H") {
  SUBCASE("identity at rest") {
    CHECK(max_abs(Mat4(fw_unitary(Kinematics::of({0, 0, 0}, 1.0)) -
                       Mat4::Identity())) < 1e-15);
  }
  SUBCASE("sends the electron bispinor to the upper block") {
    const auto b = plane_wave_bispinor(kz3(), PolarizationSpinor::up());
    CHECK(max_abs(Vec4c(fw_unitary(kz3()) * b.components - Vec4c(1, 0, 0, 0))) <
          1e-12);
  }
  SUBCASE("unitarity and diagonalization over samples, massless included") {
    const auto& beta = dirac_constants().beta;
    for (const auto& p : sample_momenta(30, 555)) {
      for (double m : {0.0, 0.1, 1.0, 10.0}) {
        const Kinematics kin = Kinematics::of(p, m);
        const Mat4 u = fw_unitary(kin);
        CHECK(max_abs(Mat4(u * u.adjoint() - Mat4::Identity())) < 1e-12);
        CHECK(max_abs(Mat4(u * hamiltonian(kin) * u.adjoint() - kin.E * beta)) <
              1e-12 * kin.E);
      }
    }
  }
}

TEST_CASE("projectors") {
  const auto& beta = dirac_constants().beta;
  SUBCASE("rest frame reduces to (1 +- beta)/2") {
    const auto pi = projectors(Kinematics::of({0, 0, 0}, 1.0));
    CHECK(max_abs(Mat4(pi.plus - 0.5 * (Mat4::Identity() + beta))) < 1e-15);
    CHECK(max_abs(Mat4(pi.minus - 0.5 * (Mat4::Identity() - beta))) < 1e-15);
  }
  SUBCASE("electron bispinor is a + eigenstate, trace is two") {
    const Kinematics kin = Kinematics::of({1, 0, 0}, 1.0);
    const auto pi = projectors(kin);
    const auto b = plane_wave_bispinor(kin, PolarizationSpinor::up());
    CHECK(max_abs(Vec4c(pi.plus * b.components - b.components)) < 1e-12);
    CHECK(std::abs(pi.plus.trace().real() - 2.0) < 1e-14);
  }
  SUBCASE("idempotence, completeness, FW compatibility") {
    for (const auto& p : sample_momenta(30, 77)) {
      for (double m : {0.0, 0.1, 1.0, 10.0}) {
        const Kinematics kin = Kinematics::of(p, m);
        const auto pi = projectors(kin);
        CHECK(max_abs(Mat4(pi.plus * pi.plus - pi.plus)) < 1e-12);
        CHECK(max_abs(Mat4(pi.plus * pi.minus)) < 1e-12);
        CHECK(max_abs(Mat4(pi.plus + pi.minus - Mat4::Identity())) < 1e-12);
        const Mat4 u = fw_unitary(kin);
        CHECK(max_abs(Mat4(pi.plus - u.adjoint() * 0.5 *
                                         (Mat4::Identity() + beta) * u)) < 1e-12);
      }
    }
  }
}

TEST_CASE("rest-frame boost") {
  SUBCASE("identity at rest") {
    CHECK(max_abs(Mat4(boost_matrix(Kinematics::of({0, 0, 0}, 1.0)) -
                       Mat4::Identity())) < 1e-15);
  }
  SUBCASE("carries W to sqrt(m/E)(w,0)") {
    const auto b = plane_wave_bispinor(kz3(), PolarizationSpinor::up());
    const Vec4c out = boost_matrix(kz3()) * b.components;
    CHECK(max_abs(Vec4c(out - Vec4c(std::sqrt(0.5), 0, 0, 0))) < 1e-12);
  }
  SUBCASE("hermitian, norm ratio sqrt(m/E); FW keeps norm one") {
    for (const auto& p : sample_momenta(20, 2024)) {
      for (double m : {0.1, 1.0, 10.0}) {
        const Kinematics kin = Kinematics::of(p, m);
        const Mat4 lam = boost_matrix(kin);
        CHECK(max_abs(Mat4(lam - lam.adjoint())) < 1e-12);
        const auto b = plane_wave_bispinor(kin, PolarizationSpinor::down());
        const Vec4c rest = lam * b.components;
        CHECK(std::abs(rest.tail<2>().norm()) < 1e-12);
        CHECK(rest.norm() ==
              doctest::Approx(std::sqrt(kin.m / kin.E)).epsilon(1e-12));
        const Vec4c fw = fw_unitary(kin) * b.components;
        CHECK(std::abs(fw.tail<2>().norm()) < 1e-12);
        CHECK(fw.norm() == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
  SUBCASE("rejects massless") {
    CHECK_THROWS_AS(boost_matrix(Kinematics::of({1, 0, 0}, 0.0)),
                    std::invalid_argument);
  }
}

TEST_CASE("generic boost") {
  SUBCASE("zero velocity is the identity") {
    const Kinematics kin = kz3();
    const auto b = generic_boost(kin, {0, 0, 0});
    CHECK(max_abs(Mat4(b.spinor_transform - Mat4::Identity())) == 0.0);
    CHECK((b.kinematics.p - kin.p).norm() == 0.0);
  }
  SUBCASE("rejects superluminal") {
    CHECK_THROWS_AS(generic_boost(kz3(), {1.0, 0, 0}), std::invalid_argument);
  }
  SUBCASE("rest frame acquires opposite momentum, E' = gamma E") {
    const double eta = 0.4;
    const Kinematics kin = Kinematics::of({0, 0, 0}, 1.0);
    const auto b = generic_boost(kin, {0, 0, std::tanh(eta)});
    CHECK(b.kinematics.p.z() == doctest::Approx(-std::sinh(eta)).epsilon(1e-12));
    CHECK(b.kinematics.E == doctest::Approx(std::cosh(eta)).epsilon(1e-12));
  }
  SUBCASE("mass shell and eigenvector survival") {
    DeterministicRng rng(42);
    for (const auto& p : sample_momenta(25, 99)) {
      for (double m : {0.0, 1.0}) {
        if (m == 0.0 && p.norm() == 0.0) continue;
        const Kinematics kin = Kinematics::of(p, m);
        const Vec3 v(0.3 * (2 * rng.next_unit() - 1), 0.3 * (2 * rng.next_unit() - 1),
                     0.3 * (2 * rng.next_unit() - 1));
        const auto b = generic_boost(kin, v);
        const double gamma = 1.0 / std::sqrt(1.0 - v.squaredNorm());
        const double eprime = gamma * (kin.E - v.dot(kin.p));
        CHECK(std::abs(eprime * eprime - b.kinematics.p.squaredNorm() - m * m) <
              1e-12 * eprime * eprime);
        CHECK(std::abs(b.kinematics.E - eprime) < 1e-12 * eprime);
        const auto w = plane_wave_bispinor(kin, PolarizationSpinor::up());
        const Vec4c bw = b.spinor_transform * w.components;
        CHECK(max_abs(Vec4c(hamiltonian(b.kinematics) * bw - eprime * bw)) <
              1e-10 * eprime * bw.norm());
      }
    }
  }
}

TEST_CASE("H spectrum is {+E, +E, -E, -E}") {
  for (const auto& p : sample_momenta(100, 20240101)) {
    for (double m : {0.0, 0.1, 1.0, 10.0}) {
      const Kinematics kin = Kinematics::of(p, m);
      Eigen::SelfAdjointEigenSolver<Mat4> es(hamiltonian(kin));
      const Eigen::Vector4d ev = es.eigenvalues();
      CHECK(std::abs(ev(0) + kin.E) < 1e-10 * kin.E);
      CHECK(std::abs(ev(1) + kin.E) < 1e-10 * kin.E);
      CHECK(std::abs(ev(2) - kin.E) < 1e-10 * kin.E);
      CHECK(std::abs(ev(3) - kin.E) < 1e-10 * kin.E);
    }
  }
}

TEST_CASE("matrix function flags are enforced") {
  MatrixFunction bad{"not_hermitian",
                     [](const Kinematics&) {
                       Mat4 m = Mat4::Zero();
                       m(0, 1) = 1.0;
                       return m;
                     },
                     true};
  CHECK_THROWS_AS(bad(kz3()), std::runtime_error);
  MatrixFunction good{"alpha_x",
                      [](const Kinematics&) { return dirac_constants().alpha[0]; },
                      true};
  CHECK(max_abs(Mat4(good(kz3()) - dirac_constants().alpha[0])) == 0.0);
}

TEST_CASE("polarization spinor must be normalized") {
  CHECK_THROWS_AS(PolarizationSpinor::of(Vec2c(1.0, 1.0)), std::invalid_argument);
}
