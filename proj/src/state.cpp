#include "coupledrd/state.hpp"

#include <algorithm>
#include <cmath>

namespace crd {

double StateField::min_value() const {
  double m = std::numeric_limits<double>::infinity();
  for (double v : values) m = std::min(m, v);
  return m;
}

bool StateField::finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

double species_mass(const StateField& u, const Mesh& mesh, Side side, int species) {
  double m = 0.0;
  for (int c = 0; c < mesh.n_cells(); ++c)
    if (mesh.cells[c].side == side) m += mesh.cells[c].volume * u.at(c, species);
  return m;
}

double sup_distance(const StateField& a, const StateField& b) {
  double d = 0.0;
  for (std::size_t k = 0; k < a.values.size(); ++k)
    d = std::max(d, std::abs(a.values[k] - b.values[k]));
  return d;
}

}  // namespace crd
