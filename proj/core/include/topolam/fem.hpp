#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "topolam/geometry.hpp"

namespace topolam {

// In-plane finite element analysis of the cantilever plate. Elements are
// bilinear quads with two displacement dofs per node and a 3x3 constitutive
// matrix A (the laminate in-plane stiffness scaled by the element density).
// With a symmetric laminate and a purely in-plane load, bending never
// couples in, so membrane elements reproduce the shell's in-plane response.

struct Mesh {
  Domain domain;

  int node_count() const { return (domain.nx + 1) * (domain.ny + 1); }
  int dof_count() const { return 2 * node_count(); }
  int node_id(int i, int j) const { return j * (domain.nx + 1) + i; }
};

struct PointLoad {
  int node;       // global node id
  int direction;  // 0 = x, 1 = y
  double magnitude;
};

struct SolveStats {
  int free_dofs = 0;
  long long factor_nonzeros = 0;
};

struct Solution {
  Eigen::VectorXd u;  // full displacement vector, clamped dofs zero
  double compliance = 0.0;
  SolveStats stats;
};

// 8x8 membrane stiffness of one rectangular dx x dy element under the
// constitutive matrix a, 2x2 Gauss quadrature, nodes ordered counter-
// clockwise from the lower-left corner.
Eigen::Matrix<double, 8, 8> element_stiffness(const Eigen::Matrix3d& a,
                                              double dx, double dy);

// Global stiffness from one constitutive matrix per element (row-major,
// index j * nx + i). No boundary conditions applied.
Eigen::SparseMatrix<double> assemble(
    const Mesh& mesh, const std::vector<Eigen::Matrix3d>& per_element);

// Cantilever solver with reusable symbolic factorization: all nodes on the
// x = 0 edge are clamped in both dofs, and the sparsity pattern depends only
// on the mesh, so repeated solves (one per design evaluation) share the
// fill-reducing ordering.
class CantileverSolver {
 public:
  explicit CantileverSolver(const Mesh& mesh);
  ~CantileverSolver();
  CantileverSolver(CantileverSolver&&) noexcept;
  CantileverSolver& operator=(CantileverSolver&&) noexcept;

  // Throws std::runtime_error if the factorization fails (it cannot for
  // density fields floored at 1e-9, which keep the system SPD).
  Solution solve(const std::vector<Eigen::Matrix3d>& per_element,
                 const PointLoad& load);

  const Mesh& mesh() const { return mesh_; }

  // Load applied by the benchmark: unit force in -y at the node closest to
  // the midpoint of the right edge (exact for even ny).
  PointLoad tip_load() const;

 private:
  Mesh mesh_;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// One-shot convenience wrapper around CantileverSolver.
Solution solve_cantilever(const Mesh& mesh,
                          const std::vector<Eigen::Matrix3d>& per_element,
                          const PointLoad& load);

// Debug dumps for cross-checks against external solvers.
void dump_triplets(const Eigen::SparseMatrix<double>& k, std::ostream& out);
void dump_vector(const Eigen::VectorXd& u, std::ostream& out);

}  // namespace topolam
