#include "doctest.h"

#include <cmath>
#include <sstream>

#include "topolam/geometry.hpp"
#include "topolam/rng.hpp"

using namespace topolam;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Direct re-evaluation of the rotated superellipse, independent of the
// library routine.
double lsf_oracle(const Component& c, int m, double x, double y) {
  const double xi = std::cos(c.theta) * (x - c.xc) +
                    std::sin(c.theta) * (y - c.yc);
  const double eta = -std::sin(c.theta) * (x - c.xc) +
                     std::cos(c.theta) * (y - c.yc);
  return -(std::pow(xi / (c.len / 2.0), m) +
           std::pow(eta / (c.thick / 2.0), m) - 1.0);
}

}  // namespace

TEST_CASE("local level set: center and boundary") {
  const Component c{30.0, 20.0, 0.0, 40.0, 8.0};
  CHECK(local_lsf(c, 6, c.xc, c.yc) == 1.0);
  CHECK(local_lsf(c, 6, c.xc + c.len / 2.0, c.yc) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK(local_lsf(c, 6, c.xc, c.yc + c.thick / 2.0) ==
        doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(local_lsf(c, 5, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("local level set matches direct formula at generic points") {
  const Component c{42.0, 17.0, kPi / 4.0, 33.0, 6.0};
  Rng rng(99);
  for (int k = 0; k < 1000; ++k) {
    const double x = rng.uniform(0.0, 100.0);
    const double y = rng.uniform(0.0, 50.0);
    const double ours = local_lsf(c, 6, x, y);
    const double oracle = lsf_oracle(c, 6, x, y);
    CHECK(ours == doctest::Approx(oracle).epsilon(1e-12));
  }
}

TEST_CASE("superellipse interior stays in the l x t rectangle") {
  const Component c{50.0, 25.0, 0.3, 30.0, 7.0};
  Rng rng(5);
  for (int k = 0; k < 20000; ++k) {
    const double x = rng.uniform(0.0, 100.0);
    const double y = rng.uniform(0.0, 50.0);
    if (local_lsf(c, 6, x, y) <= 0.0) continue;
    const double xi = std::cos(c.theta) * (x - c.xc) +
                      std::sin(c.theta) * (y - c.yc);
    const double eta = -std::sin(c.theta) * (x - c.xc) +
                       std::cos(c.theta) * (y - c.yc);
    CHECK(std::abs(xi) <= c.len / 2.0);
    CHECK(std::abs(eta) <= c.thick / 2.0);
  }
}

TEST_CASE("mirror component arithmetic and involution") {
  const Component c{10.0, 10.0, 0.3, 12.0, 3.0};
  const Component m = mirror_component(c, 50.0);
  CHECK(m.xc == 10.0);
  CHECK(m.yc == 40.0);
  CHECK(m.theta == -0.3);
  CHECK(m.len == c.len);
  CHECK(m.thick == c.thick);
  const Component mm = mirror_component(m, 50.0);
  CHECK(mm.yc == c.yc);
  CHECK(mm.theta == c.theta);

  const Component on_line{25.0, 25.0, 0.0, 10.0, 4.0};
  const Component same = mirror_component(on_line, 50.0);
  CHECK(same.yc == on_line.yc);
  CHECK(same.theta == -0.0);
}

TEST_CASE("global level set is the max of the locals") {
  const Domain d{100.0, 50.0, 20, 10};
  DesignTopology topo;
  topo.components.push_back({30.0, 25.0, 0.0, 30.0, 10.0});
  topo.components.push_back({70.0, 25.0, 0.0, 30.0, 10.0});
  topo.mirror = false;
  const LevelSetField phi = global_lsf(topo, d);
  for (int j = 0; j <= d.ny; ++j) {
    for (int i = 0; i <= d.nx; ++i) {
      const double x = i * d.dx();
      const double y = j * d.dy();
      const double p1 = local_lsf(topo.components[0], 6, x, y);
      const double p2 = local_lsf(topo.components[1], 6, x, y);
      CHECK(phi.at(i, j) == std::max(p1, p2));
      CHECK(phi.at(i, j) >= p1);
      CHECK(phi.at(i, j) >= p2);
      // Sign positive exactly on the union of interiors.
      if (p1 > 0.0 || p2 > 0.0) CHECK(phi.at(i, j) > 0.0);
    }
  }
}

TEST_CASE("single component on the symmetry line dominates its mirror") {
  const Domain d{100.0, 50.0, 20, 10};
  DesignTopology topo;
  topo.components.push_back({50.0, 25.0, 0.0, 40.0, 10.0});
  topo.mirror = true;  // the mirror image coincides with the original
  const LevelSetField phi = global_lsf(topo, d);
  for (int j = 0; j <= d.ny; ++j) {
    for (int i = 0; i <= d.nx; ++i) {
      CHECK(phi.at(i, j) ==
            local_lsf(topo.components[0], 6, i * d.dx(), j * d.dy()));
    }
  }
}

TEST_CASE("density field thresholds the element-center value") {
  LevelSetField pos(4, 3);
  LevelSetField neg(4, 3);
  for (int j = 0; j <= 3; ++j) {
    for (int i = 0; i <= 4; ++i) {
      pos.at(i, j) = 0.5;
      neg.at(i, j) = -0.5;
    }
  }
  const DensityField dp = density_field(pos);
  const DensityField dn = density_field(neg);
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 4; ++i) {
      CHECK(dp.at(i, j) == 1.0);
      CHECK(dn.at(i, j) == DensityField::kVoid);
    }
  }
  // Exactly zero at the center counts as solid.
  LevelSetField zero(1, 1);
  zero.at(0, 0) = -1.0;
  zero.at(1, 0) = 1.0;
  zero.at(0, 1) = 1.0;
  zero.at(1, 1) = -1.0;
  CHECK(density_field(zero).at(0, 0) == 1.0);
}

TEST_CASE("densities are crisp for arbitrary topologies") {
  const Domain d{100.0, 50.0, 50, 25};
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    DesignTopology topo;
    for (int c = 0; c < 3; ++c) {
      topo.components.push_back({rng.uniform(0.0, 100.0),
                                 rng.uniform(0.0, 50.0),
                                 rng.uniform(-kPi / 2.0, kPi / 2.0),
                                 rng.uniform(5.0, 100.0),
                                 rng.uniform(1.0, 25.0)});
    }
    const DensityField rho = density_field(global_lsf(topo, d));
    for (int j = 0; j < d.ny; ++j) {
      for (int i = 0; i < d.nx; ++i) {
        const double v = rho.at(i, j);
        REQUIRE((v == 1.0 || v == DensityField::kVoid));
        // Mirror symmetry is exact.
        REQUIRE(v == rho.at(i, d.ny - 1 - j));
      }
    }
  }
}

TEST_CASE("adding a component never shrinks the volume") {
  const Domain d{100.0, 50.0, 40, 20};
  DesignTopology one;
  one.components.push_back({30.0, 20.0, 0.2, 30.0, 8.0});
  DesignTopology two = one;
  two.components.push_back({70.0, 30.0, -0.4, 25.0, 6.0});
  const DensityField r1 = density_field(global_lsf(one, d));
  const DensityField r2 = density_field(global_lsf(two, d));
  CHECK(volume_count(r2).count >= volume_count(r1).count);
  for (int j = 0; j < d.ny; ++j) {
    for (int i = 0; i < d.nx; ++i) {
      if (r1.solid(i, j)) CHECK(r2.solid(i, j));
    }
  }
}

TEST_CASE("volume counting") {
  const Domain d{100.0, 50.0, 100, 50};
  DensityField all(100, 50);
  DensityField left(100, 50);
  for (int j = 0; j < 50; ++j) {
    for (int i = 0; i < 100; ++i) {
      all.at(i, j) = 1.0;
      left.at(i, j) = i < 50 ? 1.0 : DensityField::kVoid;
    }
  }
  const VolumeCount va = volume_count(all);
  CHECK(va.count == 5000);
  CHECK(va.fraction == 1.0);
  const VolumeCount v0 = volume_count(DensityField(100, 50));
  CHECK(v0.count == 0);
  CHECK(v0.fraction == 0.0);
  const VolumeCount vl = volume_count(left);
  CHECK(vl.count == 2500);
  CHECK(vl.fraction == 0.5);
}

TEST_CASE("density CSV export") {
  DensityField rho(3, 2);
  rho.at(0, 0) = 1.0;
  rho.at(2, 1) = 1.0;
  std::ostringstream out;
  export_density_csv(rho, out);
  CHECK(out.str() == "0,0,1\n1,0,0\n");
}
