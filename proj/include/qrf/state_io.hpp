#pragma once
#include <optional>
#include <string>
#include <vector>

#include "qrf/gaussian_state.hpp"
#include "qrf/grid_state.hpp"

namespace qrf {

// On-disk state bundle, schema "qrf-state/1": masses, hbar, frame labels,
// branch list and an optional grid specification.
struct StateFile {
  GaussianSuperposition state;
  std::optional<std::vector<GridAxis>> grid;
};

StateFile load_state(const std::string& path);
StateFile parse_state(const std::string& json_text, const std::string& origin = "<string>");
void save_state(const StateFile& s, const std::string& path);
std::string serialize_state(const StateFile& s);

}  // namespace qrf
