#pragma once

#include <vector>

#include <Eigen/Core>

namespace topolam {

// Classical laminate math for symmetric balanced laminates: reduced
// stiffnesses, Tsai-Pagano material invariants, the (V1, V3) in-plane
// stiffness representation, feasibility on Miki's diagram, interpolation of
// lamination parameters along fixed-volumetric-ratio curves, and recovery of
// the two ply-group fiber angles.

// Orthotropic lamina engineering constants (dimensionless benchmark units).
struct MaterialProperties {
  double e1;    // longitudinal Young's modulus
  double e2;    // transverse Young's modulus
  double g12;   // in-plane shear modulus
  double nu12;  // major Poisson ratio
};

// Plane-stress reduced stiffness entries.
struct ReducedStiffness {
  double q11;
  double q22;
  double q12;
  double q66;
};

// Laminate invariants U1..U5 (stiffness units).
struct MaterialInvariants {
  double u1;
  double u2;
  double u3;
  double u4;
  double u5;
};

// A point in the (V1, V3) lamination-parameter plane.
struct LaminationPoint {
  double v1;
  double v3;
};

// One ply group: orientation angle (radians) and thickness fraction.
struct Ply {
  double angle;
  double fraction;
};

// Normalized stacking: fractions must be nonnegative and sum to 1.
struct StackingSpec {
  std::vector<Ply> plies;
};

// All four trigonometric ply moments; v2 and v4 vanish for balanced stacks.
struct LaminationMoments {
  double v1;
  double v2;
  double v3;
  double v4;
};

// The 3-variable lamination-parameter design: a volumetric ratio shared by
// the whole domain and V3 values pinned at two master nodes. Master node 1
// sits at (0, 0) with a mirror image at (0, ly); master node 2 at (lx, ly/2).
struct LpFieldSpec {
  double rr;        // volumetric ratio in [0, 1]
  double v3_node1;  // V3 at master node 1 (and its mirror)
  double v3_node2;  // V3 at master node 2
  double lx = 100.0;
  double ly = 50.0;
};

// Orientation angles of the two ply groups, alpha_r in [0, pi/4] drawn from
// the right boundary of Miki's diagram and alpha_l in [pi/4, pi/2] from the
// left one.
struct FiberAngles {
  double alpha_r;
  double alpha_l;
};

// Miki membership test: -1 <= v1 <= 1 and 2 v1^2 - 1 <= v3 <= 1, with a
// tolerance on the quadratic lower bound.
bool miki_feasible(const LaminationPoint& p, double tol = 1e-9);

// Q11 = E1/g, Q22 = E2/g, Q12 = nu12 E2/g, Q66 = G12 with
// g = 1 - nu12 nu21, nu21 = nu12 E2/E1. Throws on degenerate material
// (g <= 0 or nonpositive moduli).
ReducedStiffness reduced_stiffness(const MaterialProperties& m);

// Tsai-Pagano invariants:
//   U1 = (3 Q11 + 3 Q22 + 2 Q12 + 4 Q66)/8
//   U2 = (Q11 - Q22)/2
//   U3 = (Q11 + Q22 - 2 Q12 - 4 Q66)/8
//   U4 = (Q11 + Q22 + 6 Q12 - 4 Q66)/8
//   U5 = (Q11 + Q22 - 2 Q12 + 4 Q66)/8
MaterialInvariants material_invariants(const ReducedStiffness& q);

// In-plane stiffness matrix of a symmetric balanced laminate of thickness h:
//
//   A/h = [U1 U4 0; U4 U1 0; 0 0 U5]
//       + [U2 0 0; 0 -U2 0; 0 0 0]   * V1
//       + [U3 -U3 0; -U3 U3 0; 0 0 -U3] * V3
//
// Throws if p is outside Miki's diagram beyond 1e-9 or h <= 0.
Eigen::Matrix3d a_matrix(const MaterialInvariants& u, const LaminationPoint& p,
                         double h = 1.0);

// Trigonometric moments of a discrete stack,
// v_j = sum_k fraction_k * (cos 2a_k, sin 2a_k, cos 4a_k, sin 4a_k).
// Throws if fractions are negative or do not sum to 1 within 1e-12.
LaminationMoments lps_from_plies(const StackingSpec& s);

// Fixed-ratio curve through Miki's diagram:
// V1 = (2 rr - 1) sqrt((V3 + 1)/2).
double v1_on_curve(double rr, double v3);

// Arc length of the fixed-rr curve between two V3 values (v3_a <= v3_b).
// In the parameter t = sqrt((V3+1)/2) the integrand is sqrt(a^2 + 16 t^2)
// with a = 2 rr - 1, which has the closed-form antiderivative
//   (u/8) sqrt(a^2+u^2) + (a^2/8) log(u + sqrt(a^2+u^2)),  u = 4t.
double arc_length(double rr, double v3_a, double v3_b);

// Point on the fixed-rr curve between the two master-node V3 values whose
// arc-length coordinate matches the inverse-distance ratio of the centroid:
// arc(P1, Pe) = d1/(d1+d2) * arc(P1, P2) where d1 is the distance to the
// nearer of node 1 and its mirror and d2 the distance to node 2. Solved by
// bracketed bisection on V3 to |residual| < 1e-10.
LaminationPoint interpolate_lp(const LpFieldSpec& spec, double x, double y);

// Ply-group angles from a feasible point: with s = sqrt((v3+1)/2),
// alpha_r = arccos(s)/2 and alpha_l = arccos(-s)/2.
FiberAngles fiber_angles(const LaminationPoint& p);

// The paper's benchmark lamina (E1=25, E2=1, G12=0.5, nu12=0.25).
MaterialProperties benchmark_material();

}  // namespace topolam
