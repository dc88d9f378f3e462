// Command-line front end: verification reports and beam observable tables.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "diracops/beams.hpp"
#include "diracops/core.hpp"
#include "diracops/numerics.hpp"
#include "diracops/operators.hpp"
#include "diracops/pauli_limit.hpp"
#include "diracops/report.hpp"

using namespace diracops;
using nlohmann::json;

namespace {

void write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << text;
}

struct BeamFlags {
  double energy = 2.0;
  double mass = 1.0;
  double theta0 = std::numbers::pi / 6.0;
  int ell = 1;
  bool spin_up = false;
  bool spin_down = false;
  std::vector<double> wraw;
  std::string config;
  std::string profile = "delta_ring";
  double sigma_over_kappa = 0.05;
  int n_phi = 256;
  int n_radial = 64;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--energy", energy, "beam energy E");
    cmd->add_option("--mass", mass, "electron mass m");
    cmd->add_option("--theta0", theta0, "polar aperture angle in (0, pi/2)");
    cmd->add_option("--ell", ell, "integer vortex charge");
    cmd->add_flag("--spin-up", spin_up, "polarization w = (1, 0)");
    cmd->add_flag("--spin-down", spin_down, "polarization w = (0, 1)");
    cmd->add_option("--w", wraw, "polarization as re,im,re,im")->expected(4);
    cmd->add_option("--profile", profile, "delta_ring or gaussian_annulus");
    cmd->add_option("--sigma", sigma_over_kappa, "annulus width over its center");
    cmd->add_option("--nphi", n_phi, "azimuthal samples (power of two >= 64)");
    cmd->add_option("--nradial", n_radial, "radial samples (annulus)");
    cmd->add_option("--config", config, "JSON beam parameter file; flags override");
  }

  BeamParameters resolve(CLI::App* cmd) const {
    BeamParameters p;
    if (!config.empty()) {
      std::ifstream f(config);
      if (!f) throw std::invalid_argument("cannot open config file: " + config);
      json j;
      f >> j;
      p.E = j.value("E", p.E);
      p.m = j.value("m", p.m);
      p.theta0 = j.value("theta0", p.theta0);
      p.ell = j.value("ell", p.ell);
      if (j.contains("w")) {
        const auto& w = j["w"];
        p.w = PolarizationSpinor::of(
            Vec2c(cplx(w.at(0).get<double>(), w.at(1).get<double>()),
                  cplx(w.at(2).get<double>(), w.at(3).get<double>())));
      }
      if (j.contains("profile")) {
        const auto& pr = j["profile"];
        const std::string type = pr.value("type", "delta_ring");
        p.profile = type == "gaussian_annulus" ? RadialProfile::gaussian_annulus
                                               : RadialProfile::delta_ring;
        p.sigma_over_kappa = pr.value("sigma_over_kappa", p.sigma_over_kappa);
        p.n_phi = pr.value("n_phi", p.n_phi);
        p.n_radial = pr.value("n_radial", p.n_radial);
      }
    }
    auto set_if = [&](const char* flag, auto setter) {
      if (cmd->count(flag) > 0) setter();
    };
    set_if("--energy", [&] { p.E = energy; });
    set_if("--mass", [&] { p.m = mass; });
    set_if("--theta0", [&] { p.theta0 = theta0; });
    set_if("--ell", [&] { p.ell = ell; });
    set_if("--profile", [&] {
      p.profile = profile == "gaussian_annulus" ? RadialProfile::gaussian_annulus
                                                : RadialProfile::delta_ring;
    });
    set_if("--sigma", [&] { p.sigma_over_kappa = sigma_over_kappa; });
    set_if("--nphi", [&] { p.n_phi = n_phi; });
    set_if("--nradial", [&] { p.n_radial = n_radial; });
    if (spin_up && spin_down)
      throw std::invalid_argument("choose one of --spin-up / --spin-down");
    if (spin_up) p.w = PolarizationSpinor::up();
    if (spin_down) p.w = PolarizationSpinor::down();
    if (!wraw.empty())
      p.w = PolarizationSpinor::of(Vec2c(cplx(wraw[0], wraw[1]),
                                         cplx(wraw[2], wraw[3])));
    if (config.empty() && !spin_up && !spin_down && wraw.empty())
      p.w = PolarizationSpinor::up();
    return p;
  }
};

std::string summaries_csv(const std::vector<ObservableSummary>& rows) {
  std::ostringstream os;
  os << "family,Sz,Lz,Jz,Delta\n";
  for (const auto& r : rows)
    os << family_name(r.family) << ',' << format_double(r.Sz) << ','
       << format_double(r.Lz) << ',' << format_double(r.Jz) << ','
       << format_double(r.Delta) << '\n';
  return os.str();
}

int run_table1(int samples, std::uint64_t seed, std::vector<double> masses,
               const std::string& out, bool as_json) {
  TableOptions opt;
  opt.samples = samples;
  opt.seed = seed;
  if (!masses.empty()) opt.masses = masses;
  const auto rows = verify_operator_table(opt);
  bool all = true;
  for (const auto& r : rows) all = all && r.pass;
  std::string text;
  if (as_json) {
    text = reports_to_json(rows) + "\n";
  } else {
    std::ostringstream os;
    os << "operator identity cross-checks  (samples " << samples << ", seed "
       << seed << ")\n\n";
    os << reports_to_text(rows);
    os << "\nresult: " << (all ? "all identities pass" : "FAILURES PRESENT")
       << "\n";
    text = os.str();
  }
  write_output(out, text);
  return all ? 0 : 1;
}

int run_beam(const BeamParameters& p, const std::string& out) {
  const auto beam = build_spectrum(p);
  write_output(out, summaries_csv(all_family_summaries(beam)));
  return 0;
}

int run_hall(const BeamParameters& base, double v, const std::string& out) {
  BeamParameters p = base;
  p.profile = RadialProfile::gaussian_annulus;
  const auto beam = build_spectrum(p);
  const auto prob = boosted_centroid(beam, {v, 0, 0}, CentroidKind::probability);
  const auto en = boosted_centroid(beam, {v, 0, 0}, CentroidKind::energy);
  const double sz = 0.5 * (p.w.w(0).real() * p.w.w(0).real() +
                           p.w.w(0).imag() * p.w.w(0).imag()) -
                    0.5 * (p.w.w(1).real() * p.w.w(1).real() +
                           p.w.w(1).imag() * p.w.w(1).imag());
  const double jz = p.ell + sz;
  const double formula_prob = v * jz / (2.0 * p.E);
  const double formula_energy = v * jz / p.E;

  // internal consistency gates: the unboosted centroid must vanish and every
  // boosted sample must stay on the mass shell
  const auto zero = boosted_centroid(beam, {0, 0, 0}, CentroidKind::probability);
  double shell_dev = 0.0;
  const double gamma = 1.0 / std::sqrt(1.0 - v * v);
  for (int c = 0; c < beam.n_phi; c += 7) {
    const auto& kin = beam.kin(0, c);
    const auto b = generic_boost(kin, {v, 0, 0});
    const double eprime = gamma * (kin.E - v * kin.p.x());
    shell_dev = std::max(shell_dev,
                         std::abs(eprime * eprime - b.kinematics.p.squaredNorm() -
                                  kin.m * kin.m) /
                             (eprime * eprime));
  }
  std::ostringstream os;
  os << "kind,shift_x,shift_y,am_reference,deviation\n";
  os << "probability," << format_double(prob.x()) << ',' << format_double(prob.y())
     << ',' << format_double(formula_prob) << ','
     << format_double(prob.y() - formula_prob) << '\n';
  os << "energy," << format_double(en.x()) << ',' << format_double(en.y()) << ','
     << format_double(formula_energy) << ','
     << format_double(en.y() - formula_energy) << '\n';
  write_output(out, os.str());
  const bool sane = zero.norm() < 1e-10 && shell_dev < 1e-12;
  return sane ? 0 : 1;
}

int run_moment(const BeamParameters& base, bool unpolarized,
               const std::string& out) {
  BeamParameters p = base;
  p.profile = RadialProfile::gaussian_annulus;
  std::ostringstream os;
  os << "quantity,value\n";
  double mu = 0.0;
  if (unpolarized) {
    p.w = PolarizationSpinor::up();
    const double up = magnetic_moment_z(build_spectrum(p));
    p.w = PolarizationSpinor::down();
    const double dn = magnetic_moment_z(build_spectrum(p));
    mu = 0.5 * (up + dn);
    os << "moment_z_up," << format_double(up) << '\n';
    os << "moment_z_down," << format_double(dn) << '\n';
  } else {
    mu = magnetic_moment_z(build_spectrum(p));
  }
  os << "moment_z," << format_double(mu) << '\n';
  os << "E_moment_z," << format_double(p.E * mu) << '\n';
  write_output(out, os.str());
  return 0;
}

int run_zitter(const std::string& mix_spec, double pz, double mass, double sigma,
               const std::string& out, const std::string& series) {
  Vec2c mix;
  if (mix_spec == "pure") {
    mix = Vec2c(1.0, 0.0);
  } else if (mix_spec == "mixed") {
    mix = Vec2c(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));
  } else {
    double a, b, c, d;
    if (std::sscanf(mix_spec.c_str(), "%lf,%lf,%lf,%lf", &a, &b, &c, &d) != 4)
      throw std::invalid_argument(
          "zitter: --mix must be 'pure', 'mixed' or re,im,re,im");
    mix = Vec2c(cplx(a, b), cplx(c, d));
  }
  ZitterOptions zopt;
  zopt.sigma = sigma;
  const auto tr =
      zitterbewegung_trace(Kinematics::of({0, 0, pz}, mass), mix, zopt);
  json j;
  j["slope_canonical"] = tr.slope_canonical;
  j["resid_canonical"] = tr.resid_canonical;
  j["slope_projected"] = tr.slope_projected;
  j["resid_projected"] = tr.resid_projected;
  j["peak_frequency"] = tr.peak_frequency;
  j["expected_frequency"] = tr.expected_frequency;
  j["oscillation_amplitude"] = tr.oscillation_amplitude;
  write_output(out, j.dump(2) + "\n");
  if (!series.empty()) {
    std::ostringstream os;
    os << "t,canonical,projected\n";
    for (std::size_t i = 0; i < tr.times.size(); ++i)
      os << format_double(tr.times[i]) << ',' << format_double(tr.canonical[i])
         << ',' << format_double(tr.projected[i]) << '\n';
    write_output(series, os.str());
  }
  return 0;
}

int run_pauli(double p_over_m, double width, int grid, const std::string& out) {
  const Vec3 dir = Vec3(0.3, -0.5, 0.81).normalized();
  const auto r2 = r_squared_identity(Kinematics::of(dir * p_over_m, 1.0));
  const auto pc = pauli_correspondence(width, 1.0, grid);
  PacketOptions popt;
  popt.grid = grid;
  const auto soi = soi_potential_term([](double r) { return 0.5 * r * r; },
                                      [](double r) { return r; }, 1.0, popt);
  json j;
  j["reports"] = json::array(
      {json::parse(report_to_json(r2)), json::parse(report_to_json(pc))});
  j["soi_potential"] = {{"base", soi.base},
                        {"covariant", soi.covariant},
                        {"pauli", soi.pauli},
                        {"correction", soi.correction},
                        {"relative_gap", soi.relative_gap},
                        {"pass", soi.relative_gap < 0.05}};
  write_output(out, j.dump(2) + "\n");
  return (r2.pass && pc.pass && soi.relative_gap < 0.05) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical operator algebra for the free Dirac electron"};
  app.require_subcommand(1);

  // table1
  auto* t1 = app.add_subcommand(
      "table1", "closed-form vs constructive operator cross-checks");
  int samples = 50;
  std::uint64_t seed = 12345;
  std::vector<double> masses;
  std::string t1_out;
  bool t1_json = false;
  t1->add_option("--samples", samples, "sampled momenta per identity");
  t1->add_option("--seed", seed, "seed for the momentum sample");
  t1->add_option("--mass", masses, "mass values (repeatable; 0 skips rest-frame rows)");
  t1->add_option("--out", t1_out, "output path (default stdout)");
  t1->add_flag("--json", t1_json, "emit the JSON report");

  // beam
  auto* bm = app.add_subcommand("beam", "three-family AM table for a vortex beam");
  BeamFlags beam_flags;
  beam_flags.add_to(bm);
  std::string bm_out;
  bm->add_option("--out", bm_out, "output path (default stdout)");

  // hall
  auto* hl = app.add_subcommand("hall", "transverse centroid of the boosted beam");
  BeamFlags hall_flags;
  hall_flags.n_radial = 64;
  hall_flags.n_phi = 64;
  hall_flags.add_to(hl);
  double v = 0.1;
  std::string hl_out;
  hl->add_option("--v", v, "transverse frame velocity (|v| <= 0.2)");
  hl->add_option("--out", hl_out, "output path (default stdout)");

  // moment
  auto* mm = app.add_subcommand("moment", "magnetic moment of an annulus beam");
  BeamFlags moment_flags;
  moment_flags.theta0 = 0.05;
  moment_flags.n_radial = 256;
  moment_flags.n_phi = 256;
  moment_flags.add_to(mm);
  bool unpolarized = false;
  std::string mm_out;
  mm->add_flag("--unpolarized", unpolarized, "average the two spin states");
  mm->add_option("--out", mm_out, "output path (default stdout)");

  // zitter
  auto* zt = app.add_subcommand("zitter", "centroid traces of mixed-energy packets");
  std::string mix = "mixed";
  double zp = 1.0, zm = 1.0, zsig = 1e-3;
  std::string zt_out, zt_series;
  zt->add_option("--mix", mix, "'pure', 'mixed' or re,im,re,im amplitudes");
  zt->add_option("--p", zp, "longitudinal momentum");
  zt->add_option("--mass", zm, "mass");
  zt->add_option("--sigma", zsig, "packet momentum width");
  zt->add_option("--out", zt_out, "analysis JSON path (default stdout)");
  zt->add_option("--series", zt_series, "optional CSV path for the time series");

  // pauli
  auto* pl = app.add_subcommand("pauli", "nonrelativistic expansion reports");
  double p_over_m = 0.1, width = 0.2;
  int grid = 48;
  std::string pl_out;
  pl->add_option("--p-over-m", p_over_m, "momentum ratio for the position-square study");
  pl->add_option("--width", width, "packet width over m for the correspondence study");
  pl->add_option("--grid", grid, "momentum grid points per axis");
  pl->add_option("--out", pl_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_name() == "CallForHelp" ? 0 : 2;
  }

  try {
    if (t1->parsed()) return run_table1(samples, seed, masses, t1_out, t1_json);
    if (bm->parsed()) return run_beam(beam_flags.resolve(bm), bm_out);
    if (hl->parsed()) return run_hall(hall_flags.resolve(hl), v, hl_out);
    if (mm->parsed()) return run_moment(moment_flags.resolve(mm), unpolarized, mm_out);
    if (zt->parsed()) return run_zitter(mix, zp, zm, zsig, zt_out, zt_series);
    if (pl->parsed()) return run_pauli(p_over_m, width, grid, pl_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "parameter error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
