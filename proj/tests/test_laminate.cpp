#include "doctest.h"

#include <cmath>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "topolam/laminate.hpp"
#include "topolam/rng.hpp"

using namespace topolam;

namespace {

constexpr double kPi = 3.14159265358979323846;
double deg(double d) { return d * kPi / 180.0; }

// Independent oracle: the invariant rows written out one by one, kept apart
// from the library's implementation on purpose.
MaterialInvariants invariants_oracle(double q11, double q22, double q12,
                                     double q66) {
  MaterialInvariants u;
  u.u1 = 0.375 * q11 + 0.375 * q22 + 0.25 * q12 + 0.5 * q66;
  u.u2 = 0.5 * q11 - 0.5 * q22;
  u.u3 = 0.125 * q11 + 0.125 * q22 - 0.25 * q12 - 0.5 * q66;
  u.u4 = 0.125 * q11 + 0.125 * q22 + 0.75 * q12 - 0.5 * q66;
  u.u5 = 0.125 * q11 + 0.125 * q22 - 0.25 * q12 + 0.5 * q66;
  return u;
}

// Trapezoid-rule oracle for the fixed-rr curve length between two V3 values.
double arc_length_quadrature(double rr, double v3_a, double v3_b,
                             long panels) {
  const double a = 2.0 * rr - 1.0;
  const double ta = std::sqrt((v3_a + 1.0) / 2.0);
  const double tb = std::sqrt((v3_b + 1.0) / 2.0);
  auto f = [a](double t) { return std::sqrt(a * a + 16.0 * t * t); };
  const double h = (tb - ta) / panels;
  double sum = 0.5 * (f(ta) + f(tb));
  for (long k = 1; k < panels; ++k) sum += f(ta + k * h);
  return sum * h;
}

}  // namespace

TEST_CASE("reduced stiffness of the benchmark material") {
  const ReducedStiffness q = reduced_stiffness(benchmark_material());
  // gamma = 1 - 0.25 * (0.25 * 1 / 25) = 0.9975
  CHECK(q.q11 == doctest::Approx(25.0 / 0.9975).epsilon(1e-14));
  CHECK(q.q22 == doctest::Approx(1.0 / 0.9975).epsilon(1e-14));
  CHECK(q.q12 == doctest::Approx(0.25 / 0.9975).epsilon(1e-14));
  CHECK(q.q66 == 0.5);
  CHECK(q.q11 == doctest::Approx(25.0627).epsilon(1e-5));
  CHECK(q.q22 == doctest::Approx(1.00251).epsilon(1e-5));
  CHECK(q.q12 == doctest::Approx(0.250627).epsilon(1e-5));
}

TEST_CASE("reduced stiffness: zero Poisson ratio") {
  const ReducedStiffness q = reduced_stiffness({1.0, 1.0, 0.5, 0.0});
  CHECK(q.q11 == 1.0);
  CHECK(q.q22 == 1.0);
  CHECK(q.q12 == 0.0);
  CHECK(q.q66 == 0.5);
}

TEST_CASE("reduced stiffness: degenerate material throws") {
  CHECK_THROWS_AS(reduced_stiffness({1.0, 1.0, 1.0, 1.1}), std::domain_error);
  CHECK_THROWS_AS(reduced_stiffness({-1.0, 1.0, 1.0, 0.1}),
                  std::domain_error);
}

TEST_CASE("material invariants match the independent oracle") {
  const ReducedStiffness q = reduced_stiffness(benchmark_material());
  const MaterialInvariants u = material_invariants(q);
  const MaterialInvariants o = invariants_oracle(q.q11, q.q22, q.q12, q.q66);
  CHECK(u.u1 == doctest::Approx(o.u1).epsilon(1e-14));
  CHECK(u.u2 == doctest::Approx(o.u2).epsilon(1e-14));
  CHECK(u.u3 == doctest::Approx(o.u3).epsilon(1e-14));
  CHECK(u.u4 == doctest::Approx(o.u4).epsilon(1e-14));
  CHECK(u.u5 == doctest::Approx(o.u5).epsilon(1e-14));
  // Frozen oracle values for the benchmark material.
  CHECK(u.u1 == doctest::Approx(10.087092731829573).epsilon(1e-12));
  CHECK(u.u2 == doctest::Approx(12.030075187969924).epsilon(1e-12));
}

TEST_CASE("material invariants: isotropic and zero inputs") {
  const double nu = 0.3;
  const MaterialInvariants iso =
      material_invariants({1.0, 1.0, nu, (1.0 - nu) / 2.0});
  CHECK(iso.u2 == 0.0);
  CHECK(std::abs(iso.u3) < 1e-15);
  const MaterialInvariants zero = material_invariants({0.0, 0.0, 0.0, 0.0});
  CHECK(zero.u1 == 0.0);
  CHECK(zero.u5 == 0.0);
}

TEST_CASE("a_matrix at the quasi-isotropic point") {
  const MaterialInvariants u =
      material_invariants(reduced_stiffness(benchmark_material()));
  const Eigen::Matrix3d a = a_matrix(u, {0.0, 0.0});
  CHECK(a(0, 0) == doctest::Approx(u.u1));
  CHECK(a(1, 1) == doctest::Approx(u.u1));
  CHECK(a(0, 1) == doctest::Approx(u.u4));
  CHECK(a(2, 2) == doctest::Approx(u.u5));
  CHECK(a(0, 2) == 0.0);
  CHECK(a(1, 2) == 0.0);
}

TEST_CASE("a_matrix at diagram corners") {
  const MaterialInvariants u =
      material_invariants(reduced_stiffness(benchmark_material()));
  const Eigen::Matrix3d all_zero_deg = a_matrix(u, {1.0, 1.0});
  CHECK(all_zero_deg(0, 0) == doctest::Approx(u.u1 + u.u2 + u.u3));
  const Eigen::Matrix3d pm45 = a_matrix(u, {0.0, -1.0});
  CHECK(pm45(2, 2) == doctest::Approx(u.u5 + u.u3));
}

TEST_CASE("a_matrix rejects infeasible points") {
  const MaterialInvariants u =
      material_invariants(reduced_stiffness(benchmark_material()));
  CHECK_THROWS_AS(a_matrix(u, {1.0, -0.5}), std::domain_error);
  CHECK_THROWS_AS(a_matrix(u, {0.0, 1.5}), std::domain_error);
  CHECK_THROWS_AS(a_matrix(u, {0.0, 0.0}, -1.0), std::invalid_argument);
}

TEST_CASE("a_matrix SPD over random feasible points") {
  const MaterialInvariants u =
      material_invariants(reduced_stiffness(benchmark_material()));
  Rng rng(20240901);
  for (int k = 0; k < 10000; ++k) {
    const double rr = rng.uniform();
    const double v3 = rng.uniform(-1.0, 1.0);
    const LaminationPoint p{v1_on_curve(rr, v3), v3};
    REQUIRE(miki_feasible(p, 1e-12));
    const Eigen::Matrix3d a = a_matrix(u, p);
    CHECK((a - a.transpose()).norm() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(a);
    REQUIRE(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("lamination moments of simple stacks") {
  const LaminationMoments single = lps_from_plies({{{0.0, 1.0}}});
  CHECK(single.v1 == 1.0);
  CHECK(single.v2 == 0.0);
  CHECK(single.v3 == 1.0);
  CHECK(single.v4 == 0.0);

  const LaminationMoments pm45 =
      lps_from_plies({{{deg(45.0), 0.5}, {deg(-45.0), 0.5}}});
  CHECK(std::abs(pm45.v1) < 1e-15);
  CHECK(pm45.v2 == 0.0);  // sines cancel exactly
  CHECK(pm45.v3 == doctest::Approx(-1.0));
  CHECK(pm45.v4 == 0.0);
}

TEST_CASE("lamination moments of a mixed stack against brute force") {
  const StackingSpec s{
      {{deg(22.5), 0.5}, {deg(-22.5), 0.25}, {deg(67.5), 0.25}}};
  const LaminationMoments m = lps_from_plies(s);
  double v1 = 0.0, v2 = 0.0, v3 = 0.0, v4 = 0.0;
  for (const Ply& p : s.plies) {
    v1 += p.fraction * std::cos(2.0 * p.angle);
    v2 += p.fraction * std::sin(2.0 * p.angle);
    v3 += p.fraction * std::cos(4.0 * p.angle);
    v4 += p.fraction * std::sin(4.0 * p.angle);
  }
  CHECK(m.v1 == doctest::Approx(v1).epsilon(1e-15));
  CHECK(m.v2 == doctest::Approx(v2).epsilon(1e-15));
  CHECK(m.v3 == doctest::Approx(v3).epsilon(1e-15));
  CHECK(m.v4 == doctest::Approx(v4).epsilon(1e-15));
}

TEST_CASE("lamination moments validate fractions") {
  CHECK_THROWS_AS(lps_from_plies({{{0.0, 0.5}}}), std::invalid_argument);
  CHECK_THROWS_AS(lps_from_plies({{{0.0, 1.5}, {0.0, -0.5}}}),
                  std::invalid_argument);
}

TEST_CASE("v1_on_curve hits the published interpolation endpoints") {
  CHECK(v1_on_curve(0.25, -0.75) == doctest::Approx(-0.1768).epsilon(5e-4));
  CHECK(v1_on_curve(0.25, 0.75) == doctest::Approx(-0.4677).epsilon(5e-4));
  CHECK(v1_on_curve(0.5, -0.3) == 0.0);
  CHECK(v1_on_curve(0.5, 0.9) == 0.0);
}

TEST_CASE("curve closure: every (rr, v3) maps inside Miki's diagram") {
  Rng rng(77);
  for (int k = 0; k < 20000; ++k) {
    const double rr = rng.uniform();
    const double v3 = rng.uniform(-1.0, 1.0);
    const LaminationPoint p{v1_on_curve(rr, v3), v3};
    REQUIRE(2.0 * p.v1 * p.v1 - 1.0 <= p.v3 + 1e-12);
  }
}

TEST_CASE("arc length: trivial values") {
  CHECK(arc_length(0.3, 0.2, 0.2) == 0.0);
  CHECK(arc_length(0.5, -1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(arc_length(0.5, 0.5, -0.5), std::invalid_argument);
}

TEST_CASE("arc length: closed form vs quadrature oracle") {
  for (const double rr : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const double closed = arc_length(rr, -1.0, 1.0);
    const double numeric = arc_length_quadrature(rr, -1.0, 1.0, 1000000);
    CHECK(closed == doctest::Approx(numeric).epsilon(1e-8));
  }
  // Additivity over subintervals.
  const double whole = arc_length(0.8, -0.9, 0.7);
  const double split =
      arc_length(0.8, -0.9, -0.1) + arc_length(0.8, -0.1, 0.7);
  CHECK(whole == doctest::Approx(split).epsilon(1e-12));
}

TEST_CASE("interpolate_lp pins the master nodes") {
  const LpFieldSpec spec{0.25, -0.75, 0.75};
  const LaminationPoint at1 = interpolate_lp(spec, 0.0, 0.0);
  CHECK(at1.v3 == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(at1.v1 == doctest::Approx(v1_on_curve(0.25, -0.75)).epsilon(1e-12));
  const LaminationPoint at1m = interpolate_lp(spec, 0.0, 50.0);
  CHECK(at1m.v3 == doctest::Approx(-0.75).epsilon(1e-12));
  const LaminationPoint at2 = interpolate_lp(spec, 100.0, 25.0);
  CHECK(at2.v3 == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("interpolate_lp degenerate segment is constant") {
  const LpFieldSpec spec{0.7, 0.25, 0.25};
  const std::vector<std::pair<double, double>> pts{
      {3.0, 4.0}, {55.0, 12.0}, {90.0, 49.0}};
  for (const auto& pt : pts) {
    const LaminationPoint p = interpolate_lp(spec, pt.first, pt.second);
    CHECK(p.v3 == 0.25);
    CHECK(p.v1 == v1_on_curve(0.7, 0.25));
  }
}

TEST_CASE("interpolate_lp equidistant centroid sits at the arc midpoint") {
  const LpFieldSpec spec{0.25, -0.75, 0.75};
  // Equidistant from node 1 (0,0) and node 2 (100,25): the perpendicular
  // bisector; pick its intersection with y = 0 by brute solving.
  // |x| = |(x,0)-(100,25)| -> x^2 = (x-100)^2 + 625 -> x = 53.125.
  const double x = 53.125;
  REQUIRE(std::hypot(x, 0.0) ==
          doctest::Approx(std::hypot(x - 100.0, 25.0)).epsilon(1e-14));
  const LaminationPoint p = interpolate_lp(spec, x, 0.0);
  // Dense-sampling oracle: walk the curve and find the half-arc V3.
  const double total = arc_length(0.25, -0.75, 0.75);
  double best_v3 = -0.75;
  double best_err = 1e9;
  for (int k = 0; k <= 2000000; ++k) {
    const double v3 = -0.75 + 1.5 * k / 2000000.0;
    const double err = std::abs(arc_length(0.25, -0.75, v3) - total / 2.0);
    if (err < best_err) {
      best_err = err;
      best_v3 = v3;
    }
  }
  CHECK(p.v3 == doctest::Approx(best_v3).epsilon(1e-5));
}

TEST_CASE("interpolation is monotone along the node1-node2 segment") {
  const LpFieldSpec spec{0.3, -0.9, 0.8};
  double prev = -2.0;
  for (int k = 0; k <= 200; ++k) {
    const double s = k / 200.0;
    const LaminationPoint p =
        interpolate_lp(spec, s * 100.0, s * 25.0);
    const double coord = arc_length(0.3, -0.9, p.v3);
    CHECK(coord >= prev - 1e-9);
    prev = coord;
  }
}

TEST_CASE("fiber angles at the corner cases") {
  const FiberAngles top = fiber_angles({0.3, 1.0});
  CHECK(top.alpha_r == 0.0);
  CHECK(top.alpha_l == doctest::Approx(kPi / 2.0));
  const FiberAngles bottom = fiber_angles({0.0, -1.0});
  CHECK(bottom.alpha_r == doctest::Approx(kPi / 4.0));
  CHECK(bottom.alpha_l == doctest::Approx(kPi / 4.0));
  const FiberAngles mid = fiber_angles({0.0, 0.0});
  CHECK(mid.alpha_r == doctest::Approx(deg(22.5)));
  CHECK(mid.alpha_l == doctest::Approx(deg(67.5)));
}

TEST_CASE("round trip: two-group stack reproduces the curve point") {
  Rng rng(4242);
  for (int k = 0; k < 500; ++k) {
    const double rr = rng.uniform();
    const double v3 = rng.uniform(-1.0, 1.0);
    const LaminationPoint p{v1_on_curve(rr, v3), v3};
    const FiberAngles fa = fiber_angles(p);
    const StackingSpec stack{{{fa.alpha_r, rr / 2.0},
                              {-fa.alpha_r, rr / 2.0},
                              {fa.alpha_l, (1.0 - rr) / 2.0},
                              {-fa.alpha_l, (1.0 - rr) / 2.0}}};
    const LaminationMoments m = lps_from_plies(stack);
    CHECK(std::abs(m.v1 - p.v1) < 1e-10);
    CHECK(std::abs(m.v3 - p.v3) < 1e-10);
    CHECK(m.v2 == 0.0);
    CHECK(m.v4 == 0.0);
  }
}
