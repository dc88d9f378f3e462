#pragma once

#include <functional>

#include "diracops/core.hpp"
#include "diracops/report.hpp"

namespace diracops {

/// Residual of replacing the exact square of the FW projected position,
///   R_fw^2 = r^2 + 2 (L.S)/(E(E+m)) + A^2,
/// by the nonrelativistic form r^2 + (L.S)/m^2, measured at |p|, |p|/2 and
/// |p|/4 along the direction of kin.p. The cross term contracts exactly; only
/// the E(E+m) -> 2m^2 replacement and the dropped A^2 contribute.
ExpansionReport r_squared_identity(const Kinematics& kin);

struct PacketOptions {
  int grid = 64;              // momentum grid points per axis
  double width_over_m = 0.05; // Gaussian momentum width p0/m
  bool spin_up = true;
  double extent_sigmas = 8.0; // momentum half-extent in units of p0
};

struct SoiComparison {
  double base = 0.0;        // <V(r)>
  double covariant = 0.0;   // <V(|R_fw|)> via the exact operator square
  double pauli = 0.0;       // <V(r)> + <V'(r) L.S/(2 m^2 r)>
  double correction = 0.0;  // the Pauli SOI term alone
  double relative_gap = 0.0;  // |covariant - pauli| / |correction|
};

/// Compares the covariant-coordinate potential energy against the canonical
/// potential plus the explicit spin-orbit term, on an orbital l = 1 Gaussian
/// packet, using spectral momentum derivatives on a 3D grid.
SoiComparison soi_potential_term(const std::function<double(double)>& V,
                                 const std::function<double(double)>& Vprime,
                                 double mass, const PacketOptions& opt = {});

/// Residual of the FW wavefunction against the Pauli spinor
/// (1 + p^2/(8 m^2)) phi, with the lower component chi = (sigma.p/2m) phi.
/// The halving study is over the packet width.
ExpansionReport pauli_correspondence(double width_over_m, double mass = 1.0,
                                     int grid = 64);

}  // namespace diracops
