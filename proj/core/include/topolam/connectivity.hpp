#pragma once

#include <vector>

#include "topolam/geometry.hpp"

namespace topolam {

// Disconnection penalties for the cantilever: distance to the load point
// (psi1), distance to the clamped wall (psi2), and fragmentation of the
// solid phase into disjoint pieces (psi3). All distances are Euclidean in
// physical units, measured on solid-element centroids.

// Boolean view of a density field (true = solid) together with the domain
// geometry needed to place centroids.
struct SolidMask {
  Domain domain;
  std::vector<bool> mask;  // nx * ny, index j * nx + i

  bool at(int i, int j) const {
    return mask[static_cast<std::size_t>(j * domain.nx + i)];
  }
};

SolidMask solid_mask(const DensityField& rho, const Domain& domain);

// 4-connected component labeling; ids are assigned in raster-scan discovery
// order (row j = 0 first, i ascending), starting at 0. Void elements get -1.
struct ComponentLabels {
  std::vector<int> label;  // nx * ny, -1 for void
  int count = 0;

  int at(int i, int j, int nx) const {
    return label[static_cast<std::size_t>(j * nx + i)];
  }
};

ComponentLabels label_components(const SolidMask& mask);

struct ConnectivityReport {
  double psi1 = 0.0;  // load connection
  double psi2 = 0.0;  // support connection
  double psi3 = 0.0;  // fragmentation
  double psi_total = 0.0;
  int n_components = 0;
};

// Distance from the load application point (lx, ly/2) to the nearest solid
// centroid; exactly 0 when either element touching the load node is solid.
// Empty designs get the sentinel sqrt(lx^2 + ly^2).
double psi_load(const SolidMask& mask);

// Minimum horizontal centroid distance to the wall x = 0; exactly 0 when any
// first-column element is solid. Empty designs get the sentinel lx.
double psi_support(const SolidMask& mask);

// Sum over components of the minimum centroid-to-centroid distance to any
// other component; 0 when the solid phase has at most one component.
double psi_fragmentation(const SolidMask& mask, const ComponentLabels& labels);

// All three measures plus their sum; psi_total == 0 exactly when the design
// is admissible for FE evaluation.
ConnectivityReport connectivity_penalty(const SolidMask& mask);

}  // namespace topolam
