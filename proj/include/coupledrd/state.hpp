#pragma once

#include <span>
#include <vector>

#include "coupledrd/core.hpp"
#include "coupledrd/mesh.hpp"

namespace crd {

/// Cell-averaged densities for all species at one time instant.
struct StateField {
  int n_species = 0;
  double time = 0.0;
  std::vector<double> values;  // [cell * n_species + species]

  StateField() = default;
  StateField(int n_cells, int n_sp, double v = 0.0)
      : n_species(n_sp), values(static_cast<std::size_t>(n_cells) * n_sp, v) {}

  int n_cells() const { return n_species == 0 ? 0 : static_cast<int>(values.size()) / n_species; }
  double& at(int cell, int sp) { return values[static_cast<std::size_t>(cell) * n_species + sp]; }
  double at(int cell, int sp) const { return values[static_cast<std::size_t>(cell) * n_species + sp]; }
  std::span<const double> cell(int c) const {
    return {values.data() + static_cast<std::size_t>(c) * n_species, static_cast<std::size_t>(n_species)};
  }
  std::span<double> cell(int c) {
    return {values.data() + static_cast<std::size_t>(c) * n_species, static_cast<std::size_t>(n_species)};
  }

  double min_value() const;
  bool finite() const;
};

/// Total mass of one species over one compartment.
double species_mass(const StateField& u, const Mesh& mesh, Side side, int species);

/// Max-norm distance between two states on the same mesh.
double sup_distance(const StateField& a, const StateField& b);

}  // namespace crd
