#pragma once
#include <string>
#include <vector>

#include "qrf/errors.hpp"

namespace qrf {

// Ordered coordinate labels with their conjugate momenta. Frames are compared
// structurally; operations refuse to mix states expressed in different frames.
class CoordinateFrame {
 public:
  CoordinateFrame() = default;
  CoordinateFrame(std::vector<std::string> positions, std::vector<std::string> momenta);

  std::size_t size() const { return positions_.size(); }
  const std::vector<std::string>& positions() const { return positions_; }
  const std::vector<std::string>& momenta() const { return momenta_; }
  const std::string& position(std::size_t i) const { return positions_.at(i); }
  const std::string& momentum(std::size_t i) const { return momenta_.at(i); }
  int index_of_position(const std::string& label) const;  // -1 if absent

  // x0..xN / p0..pN
  static CoordinateFrame absolute(std::size_t n_coords);
  // x_cm,x_r1..x_rN / p_cm,pi_1..pi_N
  static CoordinateFrame cm_relative(std::size_t n_coords);
  // q_cm,q1,q2 / p_cm,p_r1,p_r2
  static CoordinateFrame qpr(std::size_t n_coords);
  // q0,q1 / pi_0,pi_1
  static CoordinateFrame ak();
  // x_r1..x_rN / pi_1..pi_N (relative block only, center of mass split off)
  static CoordinateFrame relative_only(std::size_t n_rel);
  // xp1..xpN / pp1..ppN (particles relative to a prescribed classical origin)
  static CoordinateFrame classical(std::size_t n_coords);

  bool is_absolute() const;
  bool is_cm_relative() const;
  bool is_relative_only() const;

  bool operator==(const CoordinateFrame&) const = default;

 private:
  std::vector<std::string> positions_;
  std::vector<std::string> momenta_;
};

void require_same_frame(const CoordinateFrame& a, const CoordinateFrame& b,
                        const char* where);

}  // namespace qrf
