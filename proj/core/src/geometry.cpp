#include "topolam/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace topolam {

namespace {

double ipow(double base, int n) {
  double r = 1.0;
  for (int k = 0; k < n; ++k) r *= base;
  return r;
}

}  // namespace

double local_lsf(const Component& c, int exponent, double x, double y) {
  if (exponent < 2 || exponent % 2 != 0) {
    throw std::invalid_argument("local_lsf: exponent must be even and >= 2");
  }
  const double ct = std::cos(c.theta);
  const double st = std::sin(c.theta);
  const double xi = ct * (x - c.xc) + st * (y - c.yc);
  const double eta = -st * (x - c.xc) + ct * (y - c.yc);
  return -(ipow(xi / (c.len / 2.0), exponent) +
           ipow(eta / (c.thick / 2.0), exponent) - 1.0);
}

Component mirror_component(const Component& c, double ly) {
  return {c.xc, ly - c.yc, -c.theta, c.len, c.thick};
}

LevelSetField global_lsf(const DesignTopology& topo, const Domain& domain) {
  std::vector<Component> all = topo.components;
  if (topo.mirror) {
    for (const Component& c : topo.components) {
      all.push_back(mirror_component(c, domain.ly));
    }
  }
  LevelSetField phi(domain.nx, domain.ny);
  const double dx = domain.dx();
  const double dy = domain.dy();
  for (int j = 0; j <= domain.ny; ++j) {
    for (int i = 0; i <= domain.nx; ++i) {
      const double x = i * dx;
      const double y = j * dy;
      double v = -std::numeric_limits<double>::infinity();
      for (const Component& c : all) {
        v = std::max(v, local_lsf(c, topo.exponent, x, y));
      }
      phi.at(i, j) = v;
    }
  }
  return phi;
}

DensityField density_field(const LevelSetField& phi) {
  DensityField rho(phi.nx(), phi.ny());
  for (int j = 0; j < phi.ny(); ++j) {
    for (int i = 0; i < phi.nx(); ++i) {
      const double center = 0.25 * (phi.at(i, j) + phi.at(i + 1, j) +
                                    phi.at(i, j + 1) + phi.at(i + 1, j + 1));
      rho.at(i, j) = center >= 0.0 ? 1.0 : DensityField::kVoid;
    }
  }
  return rho;
}

VolumeCount volume_count(const DensityField& rho) {
  int count = 0;
  for (int j = 0; j < rho.ny(); ++j) {
    for (int i = 0; i < rho.nx(); ++i) {
      if (rho.solid(i, j)) ++count;
    }
  }
  return {count, static_cast<double>(count) / (rho.nx() * rho.ny())};
}

void export_density_csv(const DensityField& rho, std::ostream& out) {
  for (int j = rho.ny() - 1; j >= 0; --j) {
    for (int i = 0; i < rho.nx(); ++i) {
      out << (rho.solid(i, j) ? '1' : '0');
      out << (i + 1 < rho.nx() ? ',' : '\n');
    }
  }
}

}  // namespace topolam
