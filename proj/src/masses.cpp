#include "qrf/masses.hpp"

#include <numeric>
#include <string>

namespace qrf {

MassConfig::MassConfig(std::vector<double> masses, double hbar)
    : masses_(std::move(masses)), hbar_(hbar) {
  if (masses_.empty()) throw config_error("MassConfig: needs at least one mass");
  if (hbar_ <= 0.0) throw config_error("MassConfig: hbar must be positive");
  for (std::size_t i = 0; i < masses_.size(); ++i) {
    if (!(masses_[i] > 0.0))
      throw config_error("MassConfig: mass " + std::to_string(i) + " must be positive");
  }
  total_ = std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

double MassConfig::mass(std::size_t i) const {
  if (i >= masses_.size()) throw config_error("MassConfig: mass index out of range");
  return masses_[i];
}

double MassConfig::reduced(std::size_t j) const {
  if (j < 1 || j >= masses_.size())
    throw config_error("MassConfig: reduced mass index must be in 1..N");
  return masses_[0] * masses_[j] / (masses_[0] + masses_[j]);
}

double MassConfig::gamma3() const {
  if (masses_.size() != 3) throw config_error("MassConfig: gamma needs exactly three particles");
  return masses_[0] * masses_[1] * masses_[2] / (total_ * reduced(1) * reduced(2));
}

}  // namespace qrf
