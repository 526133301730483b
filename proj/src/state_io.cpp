#include "qrf/state_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace qrf {

namespace {

using ordered_json = nlohmann::ordered_json;

// line/column of a byte offset, for parse diagnostics
std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Eigen::VectorXd to_vector(const ordered_json& j, const char* what) {
  if (!j.is_array()) throw config_error(std::string("state file: ") + what + " must be an array");
  Eigen::VectorXd v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v(i) = j[i].get<double>();
  return v;
}

ordered_json from_vector(const Eigen::VectorXd& v) {
  ordered_json j = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) j.push_back(v(i));
  return j;
}

}  // namespace

StateFile parse_state(const std::string& text, const std::string& origin) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
    throw config_error(origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                       ": malformed JSON (" + e.what() + ")");
  }
  try {
    if (j.value("schema", "") != "qrf-state/1")
      throw config_error("state file: expected schema \"qrf-state/1\"");
    const double hbar = j.value("hbar", 1.0);
    std::vector<double> masses = j.at("masses").get<std::vector<double>>();
    const MassConfig mc(masses, hbar);

    CoordinateFrame frame = CoordinateFrame::absolute(mc.count());
    if (j.contains("frame")) {
      frame = CoordinateFrame(j["frame"].at("positions").get<std::vector<std::string>>(),
                              j["frame"].at("momenta").get<std::vector<std::string>>());
    }

    std::vector<GaussianBranch> branches;
    for (const auto& bj : j.at("branches")) {
      const auto coeff = bj.at("coefficient");
      if (!coeff.is_array() || coeff.size() != 2)
        throw config_error("state file: branch coefficient must be [re, im]");
      auto b = GaussianBranch::axis_aligned(
          {coeff[0].get<double>(), coeff[1].get<double>()},
          to_vector(bj.at("centers"), "centers"), to_vector(bj.at("widths"), "widths"),
          to_vector(bj.at("momentum_offsets"), "momentum_offsets"));
      if (bj.contains("covariance")) {
        // optional full covariance (row list) for correlated branches
        const auto& cj = bj["covariance"];
        const auto n = static_cast<Eigen::Index>(b.dim());
        if (static_cast<Eigen::Index>(cj.size()) != n)
          throw config_error("state file: covariance must have one row per coordinate");
        for (Eigen::Index r = 0; r < n; ++r)
          for (Eigen::Index c = 0; c < n; ++c) b.covariance(r, c) = cj[r][c].get<double>();
        b.validate();
      }
      branches.push_back(std::move(b));
    }

    StateFile out{GaussianSuperposition(frame, mc, std::move(branches)), std::nullopt};
    if (j.contains("grid")) {
      std::vector<GridAxis> axes;
      for (const auto& aj : j["grid"].at("axes"))
        axes.emplace_back(aj.at("min").get<double>(), aj.at("max").get<double>(),
                          aj.at("n").get<int>());
      out.grid = axes;
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(origin + ": invalid state file (" + e.what() + ")");
  }
}

StateFile load_state(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open state file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_state(ss.str(), path);
}

std::string serialize_state(const StateFile& s) {
  ordered_json j;
  j["schema"] = "qrf-state/1";
  j["hbar"] = s.state.hbar();
  j["masses"] = s.state.masses().masses();
  j["frame"] = {{"positions", s.state.frame().positions()},
                {"momenta", s.state.frame().momenta()}};
  j["branches"] = ordered_json::array();
  for (const auto& b : s.state.branches()) {
    ordered_json bj;
    bj["coefficient"] = {b.coefficient.real(), b.coefficient.imag()};
    bj["centers"] = from_vector(b.centers);
    ordered_json widths = ordered_json::array();
    for (std::size_t i = 0; i < b.dim(); ++i) widths.push_back(b.width(i));
    bj["widths"] = widths;
    bj["momentum_offsets"] = from_vector(b.momentum_offsets);
    bool diagonal = true;
    for (Eigen::Index r = 0; r < b.covariance.rows(); ++r)
      for (Eigen::Index c = 0; c < b.covariance.cols(); ++c)
        if (r != c && b.covariance(r, c) != 0.0) diagonal = false;
    if (!diagonal) {
      ordered_json cov = ordered_json::array();
      for (Eigen::Index r = 0; r < b.covariance.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < b.covariance.cols(); ++c) row.push_back(b.covariance(r, c));
        cov.push_back(row);
      }
      bj["covariance"] = cov;
    }
    j["branches"].push_back(bj);
  }
  if (s.grid) {
    ordered_json axes = ordered_json::array();
    for (const auto& a : *s.grid) axes.push_back({{"min", a.min}, {"max", a.max}, {"n", a.n}});
    j["grid"] = {{"axes", axes}};
  }
  return j.dump(2) + "\n";
}

void save_state(const StateFile& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw config_error("cannot write state file '" + path + "'");
  out << serialize_state(s);
}

}  // namespace qrf
