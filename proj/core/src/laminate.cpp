#include "topolam/laminate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace topolam {

namespace {

// Antiderivative of sqrt(a^2 + u^2) du / 4 evaluated at u = 4t; the a = 0
// branch avoids log(0) when the curve is the vertical V1 = 0 segment.
double arc_antiderivative(double a, double t) {
  const double u = 4.0 * t;
  const double root = std::sqrt(a * a + u * u);
  if (a == 0.0) return u * root / 8.0;
  return u * root / 8.0 + a * a / 8.0 * std::log(u + root);
}

}  // namespace

bool miki_feasible(const LaminationPoint& p, double tol) {
  return p.v1 >= -1.0 - tol && p.v1 <= 1.0 + tol && p.v3 <= 1.0 + tol &&
         2.0 * p.v1 * p.v1 - 1.0 <= p.v3 + tol;
}

ReducedStiffness reduced_stiffness(const MaterialProperties& m) {
  if (m.e1 <= 0.0 || m.e2 <= 0.0 || m.g12 <= 0.0) {
    throw std::domain_error("reduced_stiffness: moduli must be positive");
  }
  const double nu21 = m.nu12 * m.e2 / m.e1;
  const double gamma = 1.0 - m.nu12 * nu21;
  if (gamma <= 0.0) {
    throw std::domain_error(
        "reduced_stiffness: degenerate material, 1 - nu12*nu21 <= 0");
  }
  return {m.e1 / gamma, m.e2 / gamma, m.nu12 * m.e2 / gamma, m.g12};
}

MaterialInvariants material_invariants(const ReducedStiffness& q) {
  MaterialInvariants u;
  u.u1 = (3.0 * q.q11 + 3.0 * q.q22 + 2.0 * q.q12 + 4.0 * q.q66) / 8.0;
  u.u2 = (q.q11 - q.q22) / 2.0;
  u.u3 = (q.q11 + q.q22 - 2.0 * q.q12 - 4.0 * q.q66) / 8.0;
  u.u4 = (q.q11 + q.q22 + 6.0 * q.q12 - 4.0 * q.q66) / 8.0;
  u.u5 = (q.q11 + q.q22 - 2.0 * q.q12 + 4.0 * q.q66) / 8.0;
  return u;
}

Eigen::Matrix3d a_matrix(const MaterialInvariants& u, const LaminationPoint& p,
                         double h) {
  if (h <= 0.0) throw std::invalid_argument("a_matrix: thickness must be > 0");
  if (!miki_feasible(p)) {
    throw std::domain_error("a_matrix: point outside Miki's diagram");
  }
  Eigen::Matrix3d a;
  a << u.u1 + u.u2 * p.v1 + u.u3 * p.v3, u.u4 - u.u3 * p.v3, 0.0,
       u.u4 - u.u3 * p.v3, u.u1 - u.u2 * p.v1 + u.u3 * p.v3, 0.0,
       0.0, 0.0, u.u5 - u.u3 * p.v3;
  return h * a;
}

LaminationMoments lps_from_plies(const StackingSpec& s) {
  double total = 0.0;
  for (const Ply& ply : s.plies) {
    if (ply.fraction < 0.0) {
      throw std::invalid_argument("lps_from_plies: negative ply fraction");
    }
    total += ply.fraction;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("lps_from_plies: fractions must sum to 1");
  }
  LaminationMoments m{0.0, 0.0, 0.0, 0.0};
  for (const Ply& ply : s.plies) {
    m.v1 += ply.fraction * std::cos(2.0 * ply.angle);
    m.v2 += ply.fraction * std::sin(2.0 * ply.angle);
    m.v3 += ply.fraction * std::cos(4.0 * ply.angle);
    m.v4 += ply.fraction * std::sin(4.0 * ply.angle);
  }
  return m;
}

double v1_on_curve(double rr, double v3) {
  return (2.0 * rr - 1.0) * std::sqrt((v3 + 1.0) / 2.0);
}

double arc_length(double rr, double v3_a, double v3_b) {
  if (v3_a > v3_b) throw std::invalid_argument("arc_length: v3_a > v3_b");
  const double a = 2.0 * rr - 1.0;
  const double ta = std::sqrt((v3_a + 1.0) / 2.0);
  const double tb = std::sqrt((v3_b + 1.0) / 2.0);
  return arc_antiderivative(a, tb) - arc_antiderivative(a, ta);
}

LaminationPoint interpolate_lp(const LpFieldSpec& spec, double x, double y) {
  const double d1a = std::hypot(x - 0.0, y - 0.0);
  const double d1b = std::hypot(x - 0.0, y - spec.ly);
  const double d1 = std::min(d1a, d1b);
  const double d2 = std::hypot(x - spec.lx, y - spec.ly / 2.0);

  const double lo = std::min(spec.v3_node1, spec.v3_node2);
  const double hi = std::max(spec.v3_node1, spec.v3_node2);
  if (lo == hi) return {v1_on_curve(spec.rr, lo), lo};
  if (d1 == 0.0) return {v1_on_curve(spec.rr, spec.v3_node1), spec.v3_node1};
  if (d2 == 0.0) return {v1_on_curve(spec.rr, spec.v3_node2), spec.v3_node2};

  const double total = arc_length(spec.rr, lo, hi);
  // Target arc-length coordinate measured from node 1 along the curve.
  const double target = d1 / (d1 + d2) * total;
  const bool ascending = spec.v3_node1 <= spec.v3_node2;

  auto arc_from_node1 = [&](double v3) {
    return ascending ? arc_length(spec.rr, spec.v3_node1, v3)
                     : arc_length(spec.rr, v3, spec.v3_node1);
  };

  double a = lo;
  double b = hi;
  // Bisect on V3; arc_from_node1 is monotone along the node1 -> node2
  // direction, so the bracket is unconditionally valid.
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (a + b);
    const double residual = arc_from_node1(mid) - target;
    if (std::abs(residual) < 1e-10) {
      return {v1_on_curve(spec.rr, mid), mid};
    }
    const bool above = residual > 0.0;
    if (above == ascending) {
      b = mid;
    } else {
      a = mid;
    }
  }
  const double mid = 0.5 * (a + b);
  return {v1_on_curve(spec.rr, mid), mid};
}

FiberAngles fiber_angles(const LaminationPoint& p) {
  if (!miki_feasible(p)) {
    throw std::domain_error("fiber_angles: point outside Miki's diagram");
  }
  const double s = std::sqrt(std::clamp((p.v3 + 1.0) / 2.0, 0.0, 1.0));
  return {std::acos(s) / 2.0, std::acos(-s) / 2.0};
}

MaterialProperties benchmark_material() { return {25.0, 1.0, 0.5, 0.25}; }

}  // namespace topolam
