#pragma once

#include <iosfwd>
#include <vector>

namespace topolam {

// Moving-morphable-component geometry: superellipse level sets composed by
// max, mirrored across the horizontal midline, and mapped to a crisp ersatz
// density field on the analysis mesh.

// Rectangular design domain, fixed at 100 x 50 length units for the
// benchmark, discretized into nx x ny rectangular elements.
struct Domain {
  double lx = 100.0;
  double ly = 50.0;
  int nx = 100;
  int ny = 50;

  double dx() const { return lx / nx; }
  double dy() const { return ly / ny; }
  int element_count() const { return nx * ny; }
};

// One component: center, orientation, full length l and thickness t of the
// superellipse (the level set uses the half extents l/2 and t/2).
struct Component {
  double xc;
  double yc;
  double theta;
  double len;
  double thick;
};

// The mirrored 3-component layout; m is the (even) superellipse exponent.
struct DesignTopology {
  std::vector<Component> components;
  bool mirror = true;
  int exponent = 6;
};

// Nodal samples of the global level-set on the (nx+1) x (ny+1) lattice.
class LevelSetField {
 public:
  LevelSetField(int nx, int ny)
      : nx_(nx), ny_(ny),
        values_(static_cast<std::size_t>((nx + 1) * (ny + 1)), 0.0) {}

  double& at(int i, int j) {
    return values_[static_cast<std::size_t>(j * (nx_ + 1) + i)];
  }
  double at(int i, int j) const {
    return values_[static_cast<std::size_t>(j * (nx_ + 1) + i)];
  }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

 private:
  int nx_, ny_;
  std::vector<double> values_;
};

// Crisp element densities: every entry is exactly 1 (solid) or 1e-9 (void).
class DensityField {
 public:
  static constexpr double kVoid = 1e-9;

  DensityField(int nx, int ny)
      : nx_(nx), ny_(ny),
        rho_(static_cast<std::size_t>(nx * ny), kVoid) {}

  double& at(int i, int j) {
    return rho_[static_cast<std::size_t>(j * nx_ + i)];
  }
  double at(int i, int j) const {
    return rho_[static_cast<std::size_t>(j * nx_ + i)];
  }
  bool solid(int i, int j) const { return at(i, j) == 1.0; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }

 private:
  int nx_, ny_;
  std::vector<double> rho_;
};

// Local level set of one component at point (x, y):
//   phi = -[(xi/(l/2))^m + (eta/(t/2))^m - 1]
// with (xi, eta) the component-frame coordinates. phi(center) = 1 and
// phi = 0 on the superellipse boundary. m must be even.
double local_lsf(const Component& c, int exponent, double x, double y);

// Reflection across y = ly/2: (xc, ly - yc, -theta, len, thick).
Component mirror_component(const Component& c, double ly);

// Pointwise maximum of all local level sets (components plus their mirror
// images when topo.mirror is set), sampled at the mesh nodes.
LevelSetField global_lsf(const DesignTopology& topo, const Domain& domain);

// Modified Heaviside of the element-center level-set value: 1 for
// nonnegative arguments, 1e-9 otherwise. The center value is the bilinear
// interpolation of the four corner nodes (their mean).
DensityField density_field(const LevelSetField& phi);

struct VolumeCount {
  int count;        // elements with density 1
  double fraction;  // count / (nx * ny)
};

VolumeCount volume_count(const DensityField& rho);

// CSV export: ny rows of nx comma-separated {0,1} values, top row (j = ny-1)
// first so the file reads like the rendered picture; 0 encodes void.
void export_density_csv(const DensityField& rho, std::ostream& out);

}  // namespace topolam
