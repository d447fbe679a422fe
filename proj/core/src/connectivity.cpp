#include "topolam/connectivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace topolam {

namespace {

double centroid_x(const Domain& d, int i) { return (i + 0.5) * d.dx(); }
double centroid_y(const Domain& d, int j) { return (j + 0.5) * d.dy(); }

}  // namespace

SolidMask solid_mask(const DensityField& rho, const Domain& domain) {
  if (rho.nx() != domain.nx || rho.ny() != domain.ny) {
    throw std::invalid_argument("solid_mask: density/domain size mismatch");
  }
  SolidMask m{domain, std::vector<bool>(
                          static_cast<std::size_t>(domain.nx * domain.ny))};
  for (int j = 0; j < domain.ny; ++j) {
    for (int i = 0; i < domain.nx; ++i) {
      m.mask[static_cast<std::size_t>(j * domain.nx + i)] = rho.solid(i, j);
    }
  }
  return m;
}

ComponentLabels label_components(const SolidMask& mask) {
  const int nx = mask.domain.nx;
  const int ny = mask.domain.ny;
  ComponentLabels out;
  out.label.assign(static_cast<std::size_t>(nx * ny), -1);

  std::vector<int> stack;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int idx = j * nx + i;
      if (!mask.mask[static_cast<std::size_t>(idx)] ||
          out.label[static_cast<std::size_t>(idx)] >= 0) {
        continue;
      }
      const int id = out.count++;
      stack.assign(1, idx);
      out.label[static_cast<std::size_t>(idx)] = id;
      while (!stack.empty()) {
        const int cur = stack.back();
        stack.pop_back();
        const int ci = cur % nx;
        const int cj = cur / nx;
        const int neighbors[4][2] = {
            {ci - 1, cj}, {ci + 1, cj}, {ci, cj - 1}, {ci, cj + 1}};
        for (const auto& nb : neighbors) {
          if (nb[0] < 0 || nb[0] >= nx || nb[1] < 0 || nb[1] >= ny) continue;
          const int nidx = nb[1] * nx + nb[0];
          if (mask.mask[static_cast<std::size_t>(nidx)] &&
              out.label[static_cast<std::size_t>(nidx)] < 0) {
            out.label[static_cast<std::size_t>(nidx)] = id;
            stack.push_back(nidx);
          }
        }
      }
    }
  }
  return out;
}

double psi_load(const SolidMask& mask) {
  const Domain& d = mask.domain;
  // The load node (lx, ly/2) touches the two right-edge elements just below
  // and above the midline.
  const int jlo = d.ny / 2 - 1;
  const int jhi = d.ny / 2;
  if ((jlo >= 0 && mask.at(d.nx - 1, jlo)) ||
      (jhi < d.ny && mask.at(d.nx - 1, jhi))) {
    return 0.0;
  }
  const double px = d.lx;
  const double py = d.ly / 2.0;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < d.ny; ++j) {
    for (int i = 0; i < d.nx; ++i) {
      if (!mask.at(i, j)) continue;
      best = std::min(best,
                      std::hypot(centroid_x(d, i) - px, centroid_y(d, j) - py));
    }
  }
  if (!std::isfinite(best)) return std::hypot(d.lx, d.ly);
  return best;
}

double psi_support(const SolidMask& mask) {
  const Domain& d = mask.domain;
  for (int j = 0; j < d.ny; ++j) {
    if (mask.at(0, j)) return 0.0;
  }
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < d.ny; ++j) {
    for (int i = 0; i < d.nx; ++i) {
      if (mask.at(i, j)) {
        best = std::min(best, centroid_x(d, i));
        break;  // centroid x grows with i within a row
      }
    }
  }
  if (!std::isfinite(best)) return d.lx;
  return best;
}

double psi_fragmentation(const SolidMask& mask,
                         const ComponentLabels& labels) {
  if (labels.count <= 1) return 0.0;
  const Domain& d = mask.domain;

  std::vector<std::vector<std::pair<double, double>>> centroids(
      static_cast<std::size_t>(labels.count));
  for (int j = 0; j < d.ny; ++j) {
    for (int i = 0; i < d.nx; ++i) {
      const int id = labels.at(i, j, d.nx);
      if (id >= 0) {
        centroids[static_cast<std::size_t>(id)].emplace_back(
            centroid_x(d, i), centroid_y(d, j));
      }
    }
  }

  // Minimum centroid distance for every unordered component pair, then each
  // component contributes its nearest-neighbour distance.
  std::vector<double> nearest(static_cast<std::size_t>(labels.count),
                              std::numeric_limits<double>::infinity());
  for (int a = 0; a < labels.count; ++a) {
    for (int b = a + 1; b < labels.count; ++b) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& pa : centroids[static_cast<std::size_t>(a)]) {
        for (const auto& pb : centroids[static_cast<std::size_t>(b)]) {
          best = std::min(best, std::hypot(pa.first - pb.first,
                                           pa.second - pb.second));
        }
      }
      nearest[static_cast<std::size_t>(a)] =
          std::min(nearest[static_cast<std::size_t>(a)], best);
      nearest[static_cast<std::size_t>(b)] =
          std::min(nearest[static_cast<std::size_t>(b)], best);
    }
  }
  double total = 0.0;
  for (double v : nearest) total += v;
  return total;
}

ConnectivityReport connectivity_penalty(const SolidMask& mask) {
  ConnectivityReport r;
  const ComponentLabels labels = label_components(mask);
  r.n_components = labels.count;
  r.psi1 = psi_load(mask);
  r.psi2 = psi_support(mask);
  r.psi3 = psi_fragmentation(mask, labels);
  r.psi_total = r.psi1 + r.psi2 + r.psi3;
  return r;
}

}  // namespace topolam
