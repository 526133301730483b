#pragma once
#include <Eigen/Dense>
#include <json.hpp>
#include <string>
#include <vector>

#include "qrf/density_matrix.hpp"
#include "qrf/scenarios.hpp"

namespace qrf {

// All numeric text output uses round-trip decimal formatting.
std::string format_double(double v);

// CSV with a fixed header row; every cell printed with format_double.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

// Density-matrix CSV: per row, re/im interleaved across columns, plus a JSON
// sidecar (<path>.json) describing labels, axes and cell volume.
void write_density_matrix(const DensityMatrix& rho, const std::string& path);

nlohmann::ordered_json scenario_report_json(const ScenarioReport& rep);

// Run manifest, one per output directory ("qrf-manifest/1").
struct RunManifest {
  std::string command;
  std::string config_hash;  // FNV-1a of the exact config bytes
  std::string version;
  double hbar = 1.0;
  std::string started;
  std::string finished;
  std::vector<std::string> outputs;
};

std::string fnv1a_hex(const std::string& bytes);
std::string iso8601_now();
void write_manifest(const RunManifest& m, const std::string& directory);

// Minimal static line plot; series share the x vector.
void write_svg_lines(const std::string& path, const Eigen::VectorXd& x,
                     const std::vector<std::pair<std::string, Eigen::VectorXd>>& series,
                     const std::string& title);

}  // namespace qrf
