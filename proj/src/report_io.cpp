#include "qrf/report_io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>

#include "qrf/errors.hpp"

namespace qrf {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write '" + path + "'");
  for (std::size_t i = 0; i < header.size(); ++i)
    out << header[i] << (i + 1 < header.size() ? "," : "\n");
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << format_double(row[i]) << (i + 1 < row.size() ? "," : "\n");
  }
}

void write_density_matrix(const DensityMatrix& rho, const std::string& path) {
  {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write '" + path + "'");
    for (Eigen::Index i = 0; i < rho.rho.rows(); ++i) {
      for (Eigen::Index j = 0; j < rho.rho.cols(); ++j) {
        out << format_double(rho.rho(i, j).real()) << ','
            << format_double(rho.rho(i, j).imag());
        out << (j + 1 < rho.rho.cols() ? "," : "\n");
      }
    }
  }
  nlohmann::ordered_json j;
  j["schema"] = "qrf-report/1";
  j["kind"] = "density-matrix";
  j["labels"] = rho.labels;
  j["axes"] = nlohmann::ordered_json::array();
  for (const auto& a : rho.axes) j["axes"].push_back({{"min", a.min}, {"max", a.max}, {"n", a.n}});
  j["cell_volume"] = rho.cell_volume();
  j["layout"] = "rows: kernel row index; columns: re,im interleaved over column index";
  std::ofstream side(path + ".json");
  if (!side) throw config_error("cannot write '" + path + ".json'");
  side << j.dump(2) << "\n";
}

namespace {
nlohmann::ordered_json vec_json(const Eigen::VectorXd& v) {
  auto j = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}
}  // namespace

nlohmann::ordered_json scenario_report_json(const ScenarioReport& rep) {
  nlohmann::ordered_json j;
  j["schema"] = "qrf-report/1";
  j["kind"] = "scenario";
  j["scenario"] = rep.scenario;
  j["recoil"] = rep.recoil;
  j["visibility_external"] = rep.visibility_external;
  if (rep.visibility_internal >= 0.0) j["visibility_internal"] = rep.visibility_internal;
  j["port_probabilities"] = {rep.port1_probability, rep.port2_probability};
  j["relative_purity"] = rep.relative_purity;
  j["phase_accessible"] = rep.phase_accessible;
  if (rep.final_branch_overlap >= 0.0) j["final_branch_overlap"] = rep.final_branch_overlap;
  j["center_spread"] = rep.center_spread;
  j["branch_tables"] = nlohmann::ordered_json::array();
  for (const auto& t : rep.branch_tables) {
    nlohmann::ordered_json tj;
    tj["coordinates"] = t.coordinates;
    tj["labels"] = t.labels;
    tj["centers"] = t.centers;
    j["branch_tables"].push_back(tj);
  }
  if (rep.s_qpr_exact.size() > 0) {
    j["shift_decomposition"] = {
        {"qpr_labels", rep.s_qpr_labels},       {"qpr_exact", vec_json(rep.s_qpr_exact)},
        {"qpr_heavy_limit", vec_json(rep.s_qpr_limit)}, {"pi_labels", rep.s_pi_labels},
        {"pi_exact", vec_json(rep.s_pi_exact)}, {"pi_truncated", vec_json(rep.s_pi_truncated)},
    };
  }
  return j;
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string iso8601_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void write_manifest(const RunManifest& m, const std::string& directory) {
  nlohmann::ordered_json j;
  j["schema"] = "qrf-manifest/1";
  j["command"] = m.command;
  j["config_hash"] = m.config_hash;
  j["version"] = m.version;
  j["hbar"] = m.hbar;
  j["started"] = m.started;
  j["finished"] = m.finished;
  j["outputs"] = m.outputs;
  const std::string path = directory + "/run_manifest.json";
  std::ofstream out(path);
  if (!out) throw config_error("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

void write_svg_lines(const std::string& path, const Eigen::VectorXd& x,
                     const std::vector<std::pair<std::string, Eigen::VectorXd>>& series,
                     const std::string& title) {
  if (x.size() < 2 || series.empty()) throw config_error("svg plot: need data");
  const int W = 640, H = 420, ml = 60, mr = 20, mt = 40, mb = 40;
  double ymin = 1e300, ymax = -1e300;
  for (const auto& [name, y] : series) {
    ymin = std::min(ymin, y.minCoeff());
    ymax = std::max(ymax, y.maxCoeff());
  }
  if (ymax <= ymin) ymax = ymin + 1.0;
  const double xmin = x.minCoeff(), xmax = x.maxCoeff();
  const auto px = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * (W - ml - mr); };
  const auto py = [&](double v) { return H - mb - (v - ymin) / (ymax - ymin) * (H - mt - mb); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ofstream out(path);
  if (!out) throw config_error("cannot write '" + path + "'");
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<text x='" << W / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
      << "</text>\n";
  out << "<rect x='" << ml << "' y='" << mt << "' width='" << W - ml - mr << "' height='"
      << H - mt - mb << "' fill='none' stroke='black'/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const double yv = ymin + tick * (ymax - ymin) / 4.0;
    out << "<text x='" << ml - 6 << "' y='" << py(yv) + 4
        << "' text-anchor='end' font-size='11'>" << format_double(yv).substr(0, 8)
        << "</text>\n";
    const double xv = xmin + tick * (xmax - xmin) / 4.0;
    out << "<text x='" << px(xv) << "' y='" << H - mb + 16
        << "' text-anchor='middle' font-size='11'>" << format_double(xv).substr(0, 8)
        << "</text>\n";
  }
  int ci = 0;
  for (const auto& [name, y] : series) {
    out << "<polyline fill='none' stroke='" << colors[ci % 5] << "' stroke-width='1.5' points='";
    for (Eigen::Index i = 0; i < x.size(); ++i) out << px(x(i)) << "," << py(y(i)) << " ";
    out << "'/>\n";
    out << "<text x='" << W - mr - 8 << "' y='" << mt + 16 + 14 * ci
        << "' text-anchor='end' font-size='12' fill='" << colors[ci % 5] << "'>" << name
        << "</text>\n";
    ++ci;
  }
  out << "</svg>\n";
}

}  // namespace qrf
