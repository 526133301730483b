#pragma once
#include <cstddef>
#include <vector>

#include "qrf/errors.hpp"

namespace qrf {

// Particle masses m0..mN in natural units. Particle 0 is the candidate
// reference frame throughout; hbar rides along so every state carries one
// consistent unit system.
class MassConfig {
 public:
  MassConfig() = default;
  explicit MassConfig(std::vector<double> masses, double hbar = 1.0);

  std::size_t count() const { return masses_.size(); }                // N+1
  std::size_t relative_count() const { return masses_.size() - 1; }   // N
  double mass(std::size_t i) const;
  const std::vector<double>& masses() const { return masses_; }
  double hbar() const { return hbar_; }
  double total() const { return total_; }

  // mu_0j = m0*mj/(m0+mj), j in 1..N
  double reduced(std::size_t j) const;

  // gamma = m0*m1*m2 / (M*mu01*mu02); defined for exactly three particles
  double gamma3() const;

  bool operator==(const MassConfig&) const = default;

 private:
  std::vector<double> masses_;
  double hbar_ = 1.0;
  double total_ = 0.0;
};

}  // namespace qrf
