// qrf: quantum-reference-frame laboratory CLI.
//
// Subcommands: transform, reduce, analytics, uncertainty, phase-probe,
// evolve, scenario, selftest. Exit codes: 0 success, 2 configuration error,
// 3 numeric-budget violation.

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "qrf/analytics.hpp"
#include "qrf/dynamics.hpp"
#include "qrf/phase_probe.hpp"
#include "qrf/reduction.hpp"
#include "qrf/report_io.hpp"
#include "qrf/scenarios.hpp"
#include "qrf/state_io.hpp"
#include "qrf/transforms.hpp"
#include "qrf/uncertainty.hpp"
#include "qrf/version.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace qrf;

namespace {

struct GlobalOptions {
  double hbar = 0.0;  // 0 = take it from the input file
  int threads = 1;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json parse_json_file(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
    int line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    throw config_error(path + ":" + std::to_string(line) + ":" + std::to_string(col) +
                       ": malformed JSON (" + e.what() + ")");
  }
}

StateFile load_state_with_hbar(const std::string& path, const GlobalOptions& g) {
  StateFile f = load_state(path);
  if (g.hbar > 0.0 && g.hbar != f.state.hbar()) {
    MassConfig m(f.state.masses().masses(), g.hbar);
    f.state = GaussianSuperposition(f.state.frame(), m, f.state.branches());
  }
  return f;
}

void finish_manifest(RunManifest m, const std::string& out_path) {
  m.version = kVersion;
  m.finished = iso8601_now();
  fs::path dir = fs::path(out_path).parent_path();
  if (dir.empty()) dir = ".";
  write_manifest(m, dir.string());
}

std::vector<GridAxis> parse_axes(const std::string& text) {
  std::vector<GridAxis> axes;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ';')) {
    double lo, hi;
    int n;
    if (std::sscanf(part.c_str(), "%lf,%lf,%d", &lo, &hi, &n) != 3)
      throw config_error("axis spec must be 'min,max,n' (got '" + part + "')");
    axes.emplace_back(lo, hi, n);
  }
  if (axes.empty()) throw config_error("empty axis spec");
  return axes;
}

PotentialSpec parse_potential(const ordered_json& j, std::size_t n_particles) {
  std::vector<PotentialTerm> terms;
  for (const auto& tj : j) {
    PotentialTerm t;
    const std::string kind = tj.at("kind").get<std::string>();
    t.j = tj.value("j", 0);
    t.k = tj.value("k", 1);
    if (kind == "harmonic") {
      t.kind = PotentialTerm::Kind::harmonic;
      t.spring = tj.value("spring", 1.0);
    } else if (kind == "gaussian_well") {
      t.kind = PotentialTerm::Kind::gaussian_well;
      t.depth = tj.value("depth", 1.0);
      t.width = tj.value("width", 1.0);
    } else if (kind == "tabulated") {
      t.kind = PotentialTerm::Kind::tabulated;
      t.table = CubicSpline(tj.at("x").get<std::vector<double>>(),
                            tj.at("v").get<std::vector<double>>());
    } else {
      throw config_error("unknown potential kind '" + kind + "'");
    }
    terms.push_back(std::move(t));
  }
  return PotentialSpec(terms, n_particles);
}

// ---------------------------------------------------------------- transform
int cmd_transform(const GlobalOptions& g, const std::string& state_path,
                  const std::string& name, const std::string& out,
                  const std::string& matrix_csv) {
  RunManifest man{"transform", fnv1a_hex(read_file(state_path)), kVersion,
                  g.hbar, iso8601_now(), "", {out}};
  StateFile f = load_state_with_hbar(state_path, g);
  man.hbar = f.state.hbar();

  LinearCanonicalTransform t;
  const MassConfig& m = f.state.masses();
  if (name == "cm_relative") t = catalog::cm_relative(m);
  else if (name == "cm_relative_inverse") t = catalog::cm_relative_inverse(m);
  else if (name == "xrpi3") t = catalog::xrpi3(m);
  else if (name == "qpr3") t = catalog::qpr3(m);
  else if (name == "ak") t = catalog::ak(m);
  else throw config_error("unknown transform '" + name + "'");

  StateFile outf{apply_to_gaussian(t, f.state), f.grid};
  save_state(outf, out);

  if (!matrix_csv.empty()) {
    std::vector<std::vector<double>> rows;
    for (Eigen::Index row = 0; row < t.position_block.rows(); ++row) {
      std::vector<double> r;
      for (Eigen::Index c = 0; c < t.position_block.cols(); ++c)
        r.push_back(t.position_block(row, c));
      for (Eigen::Index c = 0; c < t.momentum_block.cols(); ++c)
        r.push_back(t.momentum_block(row, c));
      rows.push_back(r);
    }
    std::vector<std::string> header;
    for (const auto& pos : t.input.positions()) header.push_back("A:" + pos);
    for (const auto& mom : t.input.momenta()) header.push_back("B:" + mom);
    write_csv(matrix_csv, header, rows);
    man.outputs.push_back(matrix_csv);
  }
  finish_manifest(man, out);
  std::cout << "transform " << name << ": symplectic defect " << t.symplectic_defect()
            << ", wrote " << out << "\n";
  return 0;
}

// ------------------------------------------------------------------- reduce
int cmd_reduce(const GlobalOptions& g, const std::string& state_path,
               const std::string& keep, int particle, const std::string& axes_spec,
               const std::string& out) {
  RunManifest man{"reduce", fnv1a_hex(read_file(state_path)), kVersion,
                  g.hbar, iso8601_now(), "", {out, out + ".json"}};
  StateFile f = load_state_with_hbar(state_path, g);
  man.hbar = f.state.hbar();

  DensityMatrix rho;
  if (keep == "relative") {
    std::vector<GridAxis> axes;
    if (!axes_spec.empty()) {
      axes = parse_axes(axes_spec);
    } else {
      auto rel = f.state.frame().is_cm_relative()
                     ? f.state
                     : apply_to_gaussian(catalog::cm_relative(f.state.masses()), f.state);
      auto all = choose_axes(rel, 128);
      axes.assign(all.begin() + 1, all.end());
    }
    rho = reduce_relative(f.state, axes);
  } else if (keep == "external") {
    GridAxis axis = axes_spec.empty() ? choose_axes(f.state, 256)[particle]
                                      : parse_axes(axes_spec).at(0);
    rho = reduce_external(f.state, particle, axis);
  } else {
    throw config_error("--keep must be 'relative' or 'external'");
  }
  write_density_matrix(rho, out);
  finish_manifest(man, out);
  std::cout << "reduce --keep " << keep << ": trace " << rho.trace().real() << ", purity "
            << rho.purity() << ", wrote " << out << "\n";
  return 0;
}

// ---------------------------------------------------------------- analytics
int cmd_analytics(const GlobalOptions& g, const std::string& curve, int samples,
                  const std::string& out, const std::string& svg) {
  (void)g;
  RunManifest man{"analytics", fnv1a_hex(curve), kVersion, 1.0, iso8601_now(), "", {out}};
  std::vector<std::vector<double>> rows;
  std::vector<std::string> header;
  Eigen::VectorXd xs(samples), ys(samples);
  if (curve == "dispersion-ratio") {
    header = {"entanglement", "ratio"};
    for (int i = 0; i < samples; ++i) {
      const double e = 0.4999 * i / (samples - 1);
      xs(i) = e;
      ys(i) = dispersion_ratio(e);
      rows.push_back({e, ys(i)});
    }
  } else if (curve == "two-branch-purity") {
    header = {"alpha", "purity"};
    for (int i = 0; i < samples; ++i) {
      const double a = 6.0 * i / (samples - 1);
      xs(i) = a;
      ys(i) = two_branch_purity(a);
      rows.push_back({a, ys(i)});
    }
  } else {
    throw config_error("unknown curve '" + curve + "'");
  }
  write_csv(out, header, rows);
  if (!svg.empty()) {
    write_svg_lines(svg, xs, {{header[1], ys}}, curve);
    man.outputs.push_back(svg);
  }
  finish_manifest(man, out);
  std::cout << "analytics " << curve << ": " << samples << " samples, wrote " << out << "\n";
  return 0;
}

// -------------------------------------------------------------- uncertainty
int cmd_uncertainty(const GlobalOptions& g, const std::string& state_path,
                    const std::string& out) {
  RunManifest man{"uncertainty", fnv1a_hex(read_file(state_path)), kVersion,
                  g.hbar, iso8601_now(), "", {out}};
  StateFile f = load_state_with_hbar(state_path, g);
  man.hbar = f.state.hbar();
  const auto obs = observable_catalog(f.state.masses());
  const auto rep = moments(f.state, obs);
  const auto checks = verify_bounds(f.state);

  ordered_json j;
  j["schema"] = "qrf-report/1";
  j["kind"] = "uncertainty";
  j["labels"] = rep.labels;
  j["means"] = std::vector<double>(rep.means.data(), rep.means.data() + rep.means.size());
  j["variances"] =
      std::vector<double>(rep.variances.data(), rep.variances.data() + rep.variances.size());
  j["covariance"] = ordered_json::array();
  j["bounds"] = ordered_json::array();
  for (Eigen::Index i = 0; i < rep.covariance.rows(); ++i) {
    ordered_json crow = ordered_json::array(), brow = ordered_json::array();
    for (Eigen::Index c = 0; c < rep.covariance.cols(); ++c) {
      crow.push_back(rep.covariance(i, c));
      brow.push_back(rep.bounds(i, c));
    }
    j["covariance"].push_back(crow);
    j["bounds"].push_back(brow);
  }
  j["relative_pair_checks"] = ordered_json::array();
  for (const auto& c : checks) {
    j["relative_pair_checks"].push_back({{"position", c.position_label},
                                         {"momentum", c.momentum_label},
                                         {"product", c.product},
                                         {"bound", c.bound},
                                         {"margin", c.margin}});
  }
  std::ofstream os(out);
  if (!os) throw config_error("cannot write '" + out + "'");
  os << j.dump(2) << "\n";
  finish_manifest(man, out);
  std::cout << "uncertainty: " << rep.labels.size() << " observables, " << checks.size()
            << " pair checks, wrote " << out << "\n";
  return 0;
}

// -------------------------------------------------------------- phase-probe
int cmd_phase_probe(const GlobalOptions& g, const std::string& state_path,
                    const std::string& delta_spec, const std::string& out) {
  RunManifest man{"phase-probe", fnv1a_hex(read_file(state_path) + delta_spec), kVersion,
                  g.hbar, iso8601_now(), "", {out}};
  StateFile f = load_state_with_hbar(state_path, g);
  man.hbar = f.state.hbar();
  const MassConfig& m = f.state.masses();

  std::vector<double> ds;
  std::stringstream ss(delta_spec);
  std::string part;
  while (std::getline(ss, part, ',')) ds.push_back(std::stod(part));
  if (ds.size() != m.count())
    throw config_error("--delta needs one displacement per particle");
  Eigen::VectorXd delta(static_cast<Eigen::Index>(ds.size()));
  for (std::size_t i = 0; i < ds.size(); ++i) delta(static_cast<Eigen::Index>(i)) = ds[i];

  ordered_json j;
  j["schema"] = "qrf-report/1";
  j["kind"] = "phase-probe";
  const auto val = shift_expectation(f.state, delta);
  j["expectation"] = {{"magnitude", std::abs(val)}, {"phase", std::arg(val)}};

  auto decomposition_json = [&](const ShiftDecomposition& d) {
    ordered_json dj;
    dj["transform"] = d.transform_name;
    dj["momentum_labels"] = d.momentum_labels;
    dj["coefficients"] = std::vector<double>(d.coefficients.data(),
                                             d.coefficients.data() + d.coefficients.size());
    dj["delta_cm"] = d.delta_cm;
    dj["accessible"] = d.accessible;
    dj["reconstruction_error"] = d.reconstruction_error;
    return dj;
  };
  j["decompositions"] = ordered_json::array();
  j["decompositions"].push_back(decomposition_json(decompose_shift(delta, m, "cm_relative")));
  if (m.count() == 3) {
    j["decompositions"].push_back(decomposition_json(decompose_shift(delta, m, "qpr3")));
    const auto piform = heavy_limit_pi_form(delta, m);
    j["pi_form"] = {{"labels", piform.labels},
                    {"exact", std::vector<double>(piform.exact.data(),
                                                  piform.exact.data() + piform.exact.size())},
                    {"truncated",
                     std::vector<double>(piform.truncated.data(),
                                         piform.truncated.data() + piform.truncated.size())},
                    {"pi_cm_coefficient", piform.pi_cm_coefficient},
                    {"mass_ratio", piform.mass_ratio}};
  }
  std::ofstream os(out);
  if (!os) throw config_error("cannot write '" + out + "'");
  os << j.dump(2) << "\n";
  finish_manifest(man, out);
  std::cout << "phase-probe: |<exp(iS/hbar)>| = " << std::abs(val)
            << ", arg = " << std::arg(val) << ", wrote " << out << "\n";
  return 0;
}

// ------------------------------------------------------------------- evolve
int cmd_evolve(const GlobalOptions& g, const std::string& config_path,
               const std::string& out_dir) {
  RunManifest man{"evolve", fnv1a_hex(read_file(config_path)), kVersion,
                  g.hbar, iso8601_now(), "", {}};
  const ordered_json cfg = parse_json_file(config_path);
  if (cfg.value("schema", "") != "qrf-run/1")
    throw config_error("run config: expected schema \"qrf-run/1\"");

  const double hbar = g.hbar > 0.0 ? g.hbar : cfg.value("hbar", 1.0);
  man.hbar = hbar;
  const MassConfig masses(cfg.at("masses").get<std::vector<double>>(), hbar);
  const std::string mode = cfg.value("mode", "relative");

  std::vector<GridAxis> axes;
  for (const auto& aj : cfg.at("grid").at("axes"))
    axes.emplace_back(aj.at("min").get<double>(), aj.at("max").get<double>(),
                      aj.at("n").get<int>());

  std::vector<GaussianBranch> branches;
  for (const auto& bj : cfg.at("initial").at("branches")) {
    const auto cf = bj.at("coefficient");
    auto getv = [&](const char* key) {
      const auto v = bj.at(key).get<std::vector<double>>();
      return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()))
          .eval();
    };
    branches.push_back(GaussianBranch::axis_aligned(
        {cf[0].get<double>(), cf[1].get<double>()}, getv("centers"), getv("widths"),
        getv("momentum_offsets")));
  }

  const double dt = cfg.at("dt").get<double>();
  const int steps = cfg.at("steps").get<int>();
  const int stride = cfg.value("snapshot_stride", 0);

  EvolutionResult traj;
  if (mode == "relative") {
    GaussianSuperposition psi(CoordinateFrame::relative_only(masses.relative_count()), masses,
                              branches);
    RelativeHamiltonian h{masses, parse_potential(cfg.value("potential", ordered_json::array()),
                                                  masses.count())};
    traj = evolve_relative(h, rasterize(psi, axes), dt, steps, stride);
  } else if (mode == "classical") {
    const auto mvec = cfg.at("masses").get<std::vector<double>>();
    GaussianSuperposition psi(CoordinateFrame::classical(mvec.size()), MassConfig(mvec, hbar),
                              branches);
    const auto coeffs = cfg.at("trajectory").at("polynomial").get<std::vector<double>>();
    ClassicalFrameHamiltonian h{
        cfg.value("epsilon", 0.0), mvec,
        parse_potential(cfg.value("potential", ordered_json::array()), mvec.size() + 1),
        FrameTrajectory::polynomial(
            Eigen::Map<const Eigen::VectorXd>(coeffs.data(),
                                              static_cast<Eigen::Index>(coeffs.size())))};
    traj = evolve_classical_frame(h, rasterize(psi, axes), dt, steps, stride);
  } else {
    throw config_error("mode must be 'relative' or 'classical'");
  }

  fs::create_directories(out_dir);
  {
    std::vector<std::string> header{"t"};
    const auto N = traj.mean_positions.cols();
    for (Eigen::Index a = 0; a < N; ++a) header.push_back("mean_x" + std::to_string(a + 1));
    for (Eigen::Index a = 0; a < N; ++a) header.push_back("mean_p" + std::to_string(a + 1));
    header.push_back("energy");
    header.push_back("norm");
    const bool has_pi = traj.pi_means.size() > 0;
    if (has_pi) {
      header.push_back("pi_mean");
      header.push_back("pi_sigma");
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t t = 0; t < traj.times.size(); ++t) {
      std::vector<double> row{traj.times[t]};
      const auto ti = static_cast<Eigen::Index>(t);
      for (Eigen::Index a = 0; a < N; ++a) row.push_back(traj.mean_positions(ti, a));
      for (Eigen::Index a = 0; a < N; ++a) row.push_back(traj.mean_rel_momenta(ti, a));
      row.push_back(traj.energies(ti));
      row.push_back(traj.norms(ti));
      if (has_pi) {
        row.push_back(traj.pi_means(ti));
        row.push_back(traj.pi_sigmas(ti));
      }
      rows.push_back(std::move(row));
    }
    write_csv(out_dir + "/track.csv", header, rows);
    man.outputs.push_back(out_dir + "/track.csv");
  }
  ordered_json snaps = ordered_json::array();
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", i);
    const auto& [t, snap] = traj.snapshots[i];
    std::vector<std::vector<double>> rows;
    for (Eigen::Index p = 0; p < snap.total_points(); ++p) {
      std::vector<double> row;
      const auto x = snap.point(p);
      for (Eigen::Index a = 0; a < x.size(); ++a) row.push_back(x(a));
      row.push_back(snap.amplitudes()(p).real());
      row.push_back(snap.amplitudes()(p).imag());
      rows.push_back(std::move(row));
    }
    std::vector<std::string> header(snap.frame().positions());
    header.push_back("re");
    header.push_back("im");
    write_csv(out_dir + "/" + name, header, rows);
    snaps.push_back({{"file", name}, {"t", t}});
    man.outputs.push_back(out_dir + "/" + name);
  }
  {
    ordered_json j;
    j["schema"] = "qrf-report/1";
    j["kind"] = "trajectory";
    j["mode"] = mode;
    j["dt"] = dt;
    j["steps"] = steps;
    j["snapshots"] = snaps;
    std::ofstream os(out_dir + "/trajectory.json");
    os << j.dump(2) << "\n";
    man.outputs.push_back(out_dir + "/trajectory.json");
  }
  man.version = kVersion;
  man.finished = iso8601_now();
  write_manifest(man, out_dir);
  std::cout << "evolve: " << steps << " steps, " << traj.snapshots.size()
            << " snapshots, wrote " << out_dir << "\n";
  return 0;
}

// ----------------------------------------------------------------- scenario
int cmd_scenario(const GlobalOptions& g, const std::string& id,
                 const std::string& config_path, const std::string& out,
                 const std::string& svg) {
  (void)g;
  RunManifest man{"scenario " + id,
                  config_path.empty() ? fnv1a_hex(id) : fnv1a_hex(read_file(config_path)),
                  kVersion, 1.0, iso8601_now(), "", {out}};
  ScenarioConfig cfg;
  cfg.id = id;
  if (!config_path.empty()) {
    const ordered_json j = parse_json_file(config_path);
    cfg.m_p = j.value("m_p", cfg.m_p);
    cfg.m_b = j.value("m_b", cfg.m_b);
    cfg.m_md = j.value("m_md", cfg.m_md);
    cfg.m_3 = j.value("m_3", cfg.m_3);
    cfg.L = j.value("L", cfg.L);
    cfg.x = j.value("x", cfg.x);
    cfg.phase = j.value("phase", cfg.phase);
    cfg.width = j.value("width", cfg.width);
    cfg.sharp_ratio = j.value("sharp_ratio", cfg.sharp_ratio);
    cfg.attachment = j.value("attachment", cfg.attachment);
  }
  const auto rep = run_scenario(cfg);
  std::ofstream os(out);
  if (!os) throw config_error("cannot write '" + out + "'");
  os << scenario_report_json(rep).dump(2) << "\n";
  if (!svg.empty()) {
    Eigen::VectorXd xs(2), ps(2);
    xs << 1, 2;
    ps << rep.port1_probability, rep.port2_probability;
    write_svg_lines(svg, xs, {{"port probability", ps}}, rep.scenario);
    man.outputs.push_back(svg);
  }
  finish_manifest(man, out);
  std::cout << "scenario " << rep.scenario << ": P = (" << rep.port1_probability << ", "
            << rep.port2_probability << "), relative purity " << rep.relative_purity
            << ", accessible " << (rep.phase_accessible ? "yes" : "no") << ", wrote " << out
            << "\n";
  return 0;
}

// ----------------------------------------------------------------- selftest
int cmd_selftest() {
  int failures = 0;
  const auto check = [&](const char* name, bool ok) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << name << "\n";
    if (!ok) ++failures;
  };

  {
    MassConfig m2({1.0, 2.0}), m3({1.0, 2.0, 3.0});
    check("symplectic: cm_relative/qpr3/ak below 1e-12",
          catalog::cm_relative(m3).symplectic_defect() < 1e-12 &&
              catalog::qpr3(m3).symplectic_defect() < 1e-12 &&
              catalog::ak(m2).symplectic_defect() < 1e-12);
  }
  {
    MassConfig m({1.0, 1.0});
    Eigen::VectorXd c(2), w(2), k(2);
    c << -1.0, 1.0;
    w << 1.0, 1.0;
    k << 0.0, 0.0;
    GaussianSuperposition psi(CoordinateFrame::absolute(2), m,
                              {GaussianBranch::axis_aligned(1.0, c, w, k)});
    auto grid = rasterize(psi, {GridAxis(-9, 9, 64), GridAxis(-9, 9, 64)});
    check("grid normalization within 1e-10", std::abs(grid.norm2() - 1.0) < 1e-10);
    check("gaussian/grid inner products agree to 1e-6",
          std::abs(inner_product(grid, grid) - inner_product(psi, psi)) < 1e-6);
  }
  {
    MassConfig m({1.0, 2.0});
    Eigen::VectorXd c(2), w(2), k(2);
    c << 0.0, 0.7;
    w << 1.0, 1.0;
    k << 0.0, 0.0;
    GaussianSuperposition psi(CoordinateFrame::absolute(2), m,
                              {GaussianBranch::axis_aligned(1.0, c, w, k)});
    auto rel = apply_to_gaussian(catalog::cm_relative(m), psi);
    check("relative purity matches the closed form to 1e-10",
          std::abs(subsystem_purity(rel, {0}) - internal_purity(1, 2, 1, 1)) < 1e-10);
  }
  {
    MassConfig m({1.0, 1.0});
    Eigen::VectorXd c(2), w(2), k(2);
    c << 0.0, 0.6;
    w << 0.8, 0.8;
    k << 0.0, 0.0;
    GaussianSuperposition psi(CoordinateFrame::absolute(2), m,
                              {GaussianBranch::axis_aligned(1.0, c, w, k)});
    bool ok = true;
    for (const auto& chk : verify_bounds(psi)) ok &= chk.margin >= -1e-9;
    check("relative uncertainty floors respected", ok);
  }
  {
    MassConfig m({1.0, 1.0});
    RelativeHamiltonian h{m, PotentialSpec({}, 2)};
    GaussianSuperposition psi(
        CoordinateFrame::relative_only(1), m,
        {GaussianBranch::axis_aligned(1.0, Eigen::VectorXd::Zero(1),
                                      Eigen::VectorXd::Constant(1, 1.0),
                                      Eigen::VectorXd::Constant(1, 0.3))});
    auto traj = evolve_relative(h, rasterize(psi, {GridAxis(-10, 10, 128)}), 1e-3, 200);
    check("free evolution: norm drift below 1e-10",
          std::abs(traj.norms(200) - traj.norms(0)) < 1e-10);
    check("free evolution: <Pi> constant to 1e-10",
          std::abs(traj.pi_means(200) - traj.pi_means(0)) < 1e-10);
  }

  std::cout << (failures == 0 ? "selftest: all checks passed\n"
                              : "selftest: FAILURES present\n");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrf: one-dimensional quantum reference frame laboratory"};
  app.set_version_flag("--version", std::string("qrf ") + kVersion);
  app.require_subcommand(1);

  GlobalOptions g;
  app.add_option("--hbar", g.hbar, "override hbar for loaded states (default: from file)");
  if (const char* env = std::getenv("QRF_THREADS")) {
    g.threads = std::max(1, std::atoi(env));  // cap honored; the engine is sequential
  }

  std::string state_path, out, transform_name, matrix_csv, keep = "relative";
  std::string axes_spec, curve = "dispersion-ratio", delta_spec, config_path, svg;
  std::string scenario_id, pairs = "all";
  int particle = 1, samples = 100;

  auto* t = app.add_subcommand("transform", "apply a catalog transform to a state file");
  t->add_option("--state", state_path)->required();
  t->add_option("--transform", transform_name)->required();
  t->add_option("--out", out)->required();
  t->add_option("--matrix-csv", matrix_csv);

  auto* r = app.add_subcommand("reduce", "partial-trace a state to a density matrix CSV");
  r->add_option("--state", state_path)->required();
  r->add_option("--keep", keep)->check(CLI::IsMember({"relative", "external"}));
  r->add_option("--particle", particle);
  r->add_option("--axes", axes_spec, "min,max,n[;min,max,n]");
  r->add_option("--out", out)->required();

  auto* a = app.add_subcommand("analytics", "closed-form curves as CSV");
  a->add_option("--curve", curve)
      ->check(CLI::IsMember({"dispersion-ratio", "two-branch-purity"}));
  a->add_option("--samples", samples)->check(CLI::PositiveNumber);
  a->add_option("--out", out)->required();
  a->add_option("--svg", svg);

  auto* u = app.add_subcommand("uncertainty", "moments, covariances and bounds");
  u->add_option("--state", state_path)->required();
  u->add_option("--pairs", pairs)->check(CLI::IsMember({"all"}));
  u->add_option("--out", out)->required();

  auto* p = app.add_subcommand("phase-probe", "shift-operator decomposition and expectation");
  p->add_option("--state", state_path)->required();
  p->add_option("--delta", delta_spec)->required();
  p->add_option("--out", out)->required();

  auto* e = app.add_subcommand("evolve", "split-step time evolution");
  e->add_option("--config", config_path)->required();
  e->add_option("--out", out)->required();

  auto* s = app.add_subcommand("scenario", "board / board-md / third-particle reproductions");
  s->add_option("id", scenario_id)
      ->required()
      ->check(CLI::IsMember({"board", "board-md", "third-particle"}));
  s->add_option("--config", config_path);
  s->add_option("--out", out)->required();
  s->add_option("--svg", svg);

  app.add_subcommand("selftest", "run the built-in invariant battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("transform"))
      return cmd_transform(g, state_path, transform_name, out, matrix_csv);
    if (app.got_subcommand("reduce"))
      return cmd_reduce(g, state_path, keep, particle, axes_spec, out);
    if (app.got_subcommand("analytics")) return cmd_analytics(g, curve, samples, out, svg);
    if (app.got_subcommand("uncertainty")) return cmd_uncertainty(g, state_path, out);
    if (app.got_subcommand("phase-probe"))
      return cmd_phase_probe(g, state_path, delta_spec, out);
    if (app.got_subcommand("evolve")) return cmd_evolve(g, config_path, out);
    if (app.got_subcommand("scenario"))
      return cmd_scenario(g, scenario_id, config_path, out, svg);
    if (app.got_subcommand("selftest")) return cmd_selftest();
  } catch (const config_error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  } catch (const numeric_error& err) {
    std::cerr << "numeric budget violated: " << err.what() << "\n";
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "internal error: " << err.what() << "\n";
    return 1;
  }
  return 2;
}
