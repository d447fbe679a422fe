#include "doctest.h"

#include <cmath>
#include <utility>
#include <vector>

#include "topolam/connectivity.hpp"

using namespace topolam;

namespace {

const Domain kStd{100.0, 50.0, 100, 50};

SolidMask empty_mask(const Domain& d = kStd) {
  return SolidMask{d, std::vector<bool>(
                          static_cast<std::size_t>(d.nx * d.ny), false)};
}

SolidMask full_mask(const Domain& d = kStd) {
  return SolidMask{d, std::vector<bool>(
                          static_cast<std::size_t>(d.nx * d.ny), true)};
}

void fill_rect(SolidMask& m, int i0, int i1, int j0, int j1) {
  for (int j = j0; j < j1; ++j) {
    for (int i = i0; i < i1; ++i) {
      m.mask[static_cast<std::size_t>(j * m.domain.nx + i)] = true;
    }
  }
}

}  // namespace

TEST_CASE("labeling: whole grid is one component") {
  const ComponentLabels l = label_components(full_mask());
  CHECK(l.count == 1);
  CHECK(l.at(0, 0, 100) == 0);
  CHECK(l.at(99, 49, 100) == 0);
}

TEST_CASE("labeling: two blocks split by a void column") {
  SolidMask m = empty_mask();
  fill_rect(m, 0, 40, 10, 20);
  fill_rect(m, 41, 80, 10, 20);
  const ComponentLabels l = label_components(m);
  CHECK(l.count == 2);
  CHECK(l.at(0, 10, 100) == 0);   // discovered first in raster order
  CHECK(l.at(41, 10, 100) == 1);
}

TEST_CASE("labeling: checkerboard count under 4-connectivity") {
  const Domain d{100.0, 50.0, 10, 10};
  SolidMask m = empty_mask(d);
  int expected = 0;
  for (int j = 0; j < 10; ++j) {
    for (int i = 0; i < 10; ++i) {
      if ((i + j) % 2 == 0) {
        m.mask[static_cast<std::size_t>(j * 10 + i)] = true;
        ++expected;
      }
    }
  }
  const ComponentLabels l = label_components(m);
  CHECK(l.count == expected);
  CHECK(l.count == 50);
}

TEST_CASE("psi_load cases") {
  SolidMask at_load = empty_mask();
  fill_rect(at_load, 99, 100, 25, 26);  // touches the load node from above
  CHECK(psi_load(at_load) == 0.0);
  SolidMask below = empty_mask();
  fill_rect(below, 99, 100, 24, 25);
  CHECK(psi_load(below) == 0.0);

  CHECK(psi_load(empty_mask()) ==
        doctest::Approx(std::hypot(100.0, 50.0)).epsilon(1e-15));

  // Solid block on x in [0, 50): nearest centroid to (100, 25) is at
  // (49.5, 24.5) or (49.5, 25.5).
  SolidMask half = empty_mask();
  fill_rect(half, 0, 50, 0, 50);
  const double expect = std::hypot(100.0 - 49.5, 25.0 - 24.5);
  CHECK(psi_load(half) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("psi_support cases") {
  SolidMask touching = empty_mask();
  fill_rect(touching, 0, 5, 40, 45);
  CHECK(psi_support(touching) == 0.0);

  CHECK(psi_support(empty_mask()) == 100.0);

  SolidMask shifted = empty_mask();
  fill_rect(shifted, 10, 30, 20, 30);
  CHECK(psi_support(shifted) == doctest::Approx(10.5).epsilon(1e-15));
}

TEST_CASE("psi_support translation grows by the shift") {
  for (int k = 1; k <= 5; ++k) {
    SolidMask a = empty_mask();
    SolidMask b = empty_mask();
    fill_rect(a, 3, 20, 10, 20);
    fill_rect(b, 3 + k, 20 + k, 10, 20);
    CHECK(psi_support(b) - psi_support(a) == doctest::Approx(k).epsilon(1e-14));
  }
}

TEST_CASE("psi_fragmentation: single component and simple gaps") {
  SolidMask one = empty_mask();
  fill_rect(one, 0, 30, 10, 20);
  CHECK(psi_fragmentation(one, label_components(one)) == 0.0);

  // Two 1-wide columns separated by one void column: nearest centroids are
  // 2 apart, each block contributes 2.
  SolidMask gap = empty_mask();
  fill_rect(gap, 10, 11, 25, 26);
  fill_rect(gap, 12, 13, 25, 26);
  CHECK(psi_fragmentation(gap, label_components(gap)) ==
        doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("psi_fragmentation: three collinear blocks against brute force") {
  SolidMask m = empty_mask();
  fill_rect(m, 0, 10, 20, 25);    // block A
  fill_rect(m, 14, 24, 20, 25);   // block B, gap 4 columns from A
  fill_rect(m, 40, 50, 20, 25);   // block C, gap 16 columns from B
  const ComponentLabels l = label_components(m);
  REQUIRE(l.count == 3);

  // Brute-force all-pairs centroid distances over per-label cell lists.
  std::vector<std::vector<std::pair<int, int>>> cells(3);
  for (int j = 0; j < 50; ++j)
    for (int i = 0; i < 100; ++i)
      if (l.at(i, j, 100) >= 0) cells[l.at(i, j, 100)].emplace_back(i, j);
  auto min_dist = [&](int a, int b) {
    double best = 1e18;
    for (const auto& p : cells[a])
      for (const auto& q : cells[b])
        best = std::min(best, std::hypot(p.first - q.first + 0.0,
                                         p.second - q.second + 0.0));
    return best;
  };
  double expected = 0.0;
  for (int a = 0; a < 3; ++a) {
    double nearest = 1e18;
    for (int b = 0; b < 3; ++b) {
      if (a != b) nearest = std::min(nearest, min_dist(a, b));
    }
    expected += nearest;
  }
  CHECK(psi_fragmentation(m, l) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("relabeling invariance of psi3") {
  // Mirror the mask left-right: component ids change discovery order but the
  // geometry (and psi3) is unchanged.
  SolidMask m = empty_mask();
  fill_rect(m, 5, 15, 10, 14);
  fill_rect(m, 60, 90, 30, 40);
  SolidMask flipped = empty_mask();
  for (int j = 0; j < 50; ++j) {
    for (int i = 0; i < 100; ++i) {
      if (m.at(i, j)) {
        flipped.mask[static_cast<std::size_t>(j * 100 + (99 - i))] = true;
      }
    }
  }
  CHECK(psi_fragmentation(m, label_components(m)) ==
        doctest::Approx(psi_fragmentation(flipped,
                                          label_components(flipped)))
            .epsilon(1e-12));
}

TEST_CASE("aggregate penalty: full, empty, and L-bracket") {
  const ConnectivityReport full = connectivity_penalty(full_mask());
  CHECK(full.psi_total == 0.0);
  CHECK(full.n_components == 1);

  const ConnectivityReport empty = connectivity_penalty(empty_mask());
  CHECK(empty.psi1 == doctest::Approx(std::hypot(100.0, 50.0)));
  CHECK(empty.psi2 == 100.0);
  CHECK(empty.psi3 == 0.0);
  CHECK(empty.n_components == 0);

  // L-shaped bracket: spine along the wall plus an arm out to the load.
  SolidMask bracket = empty_mask();
  fill_rect(bracket, 0, 10, 0, 50);
  fill_rect(bracket, 0, 100, 20, 30);
  const ConnectivityReport r = connectivity_penalty(bracket);
  CHECK(r.psi_total == 0.0);
  CHECK(r.n_components == 1);
}

TEST_CASE("monotone repair: filling the gap clears psi3") {
  SolidMask broken = empty_mask();
  fill_rect(broken, 0, 40, 22, 28);
  fill_rect(broken, 60, 100, 22, 28);
  const ConnectivityReport before = connectivity_penalty(broken);
  CHECK(before.psi3 > 0.0);
  SolidMask repaired = broken;
  fill_rect(repaired, 40, 60, 22, 28);
  const ConnectivityReport after = connectivity_penalty(repaired);
  CHECK(after.psi3 == 0.0);
  CHECK(after.psi1 <= before.psi1);
  CHECK(after.psi2 <= before.psi2);
  CHECK(after.psi_total == 0.0);
}
