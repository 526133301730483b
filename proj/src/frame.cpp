#include "qrf/frame.hpp"

#include <set>

namespace qrf {

CoordinateFrame::CoordinateFrame(std::vector<std::string> positions,
                                 std::vector<std::string> momenta)
    : positions_(std::move(positions)), momenta_(std::move(momenta)) {
  if (positions_.empty() || positions_.size() != momenta_.size())
    throw config_error("CoordinateFrame: positions and momenta must pair up");
  std::set<std::string> seen(positions_.begin(), positions_.end());
  for (const auto& m : momenta_) seen.insert(m);
  if (seen.size() != 2 * positions_.size())
    throw config_error("CoordinateFrame: labels must be unique");
}

int CoordinateFrame::index_of_position(const std::string& label) const {
  for (std::size_t i = 0; i < positions_.size(); ++i)
    if (positions_[i] == label) return static_cast<int>(i);
  return -1;
}

CoordinateFrame CoordinateFrame::absolute(std::size_t n) {
  std::vector<std::string> xs, ps;
  for (std::size_t i = 0; i < n; ++i) {
    xs.push_back("x" + std::to_string(i));
    ps.push_back("p" + std::to_string(i));
  }
  return {xs, ps};
}

CoordinateFrame CoordinateFrame::cm_relative(std::size_t n) {
  std::vector<std::string> xs{"x_cm"}, ps{"p_cm"};
  for (std::size_t j = 1; j < n; ++j) {
    xs.push_back("x_r" + std::to_string(j));
    ps.push_back("pi_" + std::to_string(j));
  }
  return {xs, ps};
}

CoordinateFrame CoordinateFrame::qpr(std::size_t n) {
  std::vector<std::string> xs{"q_cm"}, ps{"p_cm"};
  for (std::size_t j = 1; j < n; ++j) {
    xs.push_back("q" + std::to_string(j));
    ps.push_back("p_r" + std::to_string(j));
  }
  return {xs, ps};
}

CoordinateFrame CoordinateFrame::ak() { return {{"q0", "q1"}, {"pi_0", "pi_1"}}; }

CoordinateFrame CoordinateFrame::relative_only(std::size_t n_rel) {
  std::vector<std::string> xs, ps;
  for (std::size_t j = 1; j <= n_rel; ++j) {
    xs.push_back("x_r" + std::to_string(j));
    ps.push_back("pi_" + std::to_string(j));
  }
  return {xs, ps};
}

CoordinateFrame CoordinateFrame::classical(std::size_t n) {
  std::vector<std::string> xs, ps;
  for (std::size_t k = 1; k <= n; ++k) {
    xs.push_back("xp" + std::to_string(k));
    ps.push_back("pp" + std::to_string(k));
  }
  return {xs, ps};
}

bool CoordinateFrame::is_absolute() const {
  return !positions_.empty() && positions_[0] == "x0";
}

bool CoordinateFrame::is_cm_relative() const {
  return !positions_.empty() && positions_[0] == "x_cm";
}

bool CoordinateFrame::is_relative_only() const {
  return !positions_.empty() && positions_[0] == "x_r1";
}

void require_same_frame(const CoordinateFrame& a, const CoordinateFrame& b,
                        const char* where) {
  if (!(a == b))
    throw config_error(std::string(where) + ": frame mismatch (" +
                       (a.size() ? a.position(0) : "?") + "... vs " +
                       (b.size() ? b.position(0) : "?") + "...)");
}

}  // namespace qrf
