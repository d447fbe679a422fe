#include "topolam/fem.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <Eigen/SparseCholesky>

namespace topolam {

namespace {

// Strain-displacement matrix of the bilinear quad at natural coordinates
// (xi, eta) for a rectangular element of size dx x dy.
Eigen::Matrix<double, 3, 8> b_matrix(double xi, double eta, double dx,
                                     double dy) {
  const double xs[4] = {-1.0, 1.0, 1.0, -1.0};
  const double es[4] = {-1.0, -1.0, 1.0, 1.0};
  Eigen::Matrix<double, 3, 8> b = Eigen::Matrix<double, 3, 8>::Zero();
  for (int n = 0; n < 4; ++n) {
    const double dndxi = 0.25 * xs[n] * (1.0 + es[n] * eta);
    const double dndeta = 0.25 * es[n] * (1.0 + xs[n] * xi);
    const double dndx = dndxi * 2.0 / dx;
    const double dndy = dndeta * 2.0 / dy;
    b(0, 2 * n) = dndx;
    b(1, 2 * n + 1) = dndy;
    b(2, 2 * n) = dndy;
    b(2, 2 * n + 1) = dndx;
  }
  return b;
}

}  // namespace

Eigen::Matrix<double, 8, 8> element_stiffness(const Eigen::Matrix3d& a,
                                              double dx, double dy) {
  const double g = 1.0 / std::sqrt(3.0);
  const double det_j = dx * dy / 4.0;
  Eigen::Matrix<double, 8, 8> k = Eigen::Matrix<double, 8, 8>::Zero();
  for (const double xi : {-g, g}) {
    for (const double eta : {-g, g}) {
      const Eigen::Matrix<double, 3, 8> b = b_matrix(xi, eta, dx, dy);
      k += b.transpose() * a * b * det_j;
    }
  }
  return k;
}

Eigen::SparseMatrix<double> assemble(
    const Mesh& mesh, const std::vector<Eigen::Matrix3d>& per_element) {
  const Domain& d = mesh.domain;
  if (per_element.size() != static_cast<std::size_t>(d.element_count())) {
    throw std::invalid_argument("assemble: one constitutive entry per element");
  }
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(d.element_count()) * 64);
  for (int j = 0; j < d.ny; ++j) {
    for (int i = 0; i < d.nx; ++i) {
      const Eigen::Matrix<double, 8, 8> ke = element_stiffness(
          per_element[static_cast<std::size_t>(j * d.nx + i)], d.dx(), d.dy());
      const int nodes[4] = {mesh.node_id(i, j), mesh.node_id(i + 1, j),
                            mesh.node_id(i + 1, j + 1), mesh.node_id(i, j + 1)};
      for (int r = 0; r < 8; ++r) {
        const int gr = 2 * nodes[r / 2] + r % 2;
        for (int c = 0; c < 8; ++c) {
          const int gc = 2 * nodes[c / 2] + c % 2;
          triplets.emplace_back(gr, gc, ke(r, c));
        }
      }
    }
  }
  Eigen::SparseMatrix<double> k(mesh.dof_count(), mesh.dof_count());
  k.setFromTriplets(triplets.begin(), triplets.end());
  return k;
}

struct CantileverSolver::Impl {
  std::vector<int> full_to_free;  // -1 for clamped dofs
  std::vector<int> free_to_full;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool pattern_ready = false;
};

CantileverSolver::CantileverSolver(const Mesh& mesh)
    : mesh_(mesh), impl_(std::make_unique<Impl>()) {
  const int ndof = mesh_.dof_count();
  impl_->full_to_free.assign(static_cast<std::size_t>(ndof), -1);
  for (int dof = 0; dof < ndof; ++dof) {
    const int node = dof / 2;
    const int i = node % (mesh_.domain.nx + 1);
    if (i == 0) continue;  // clamped edge
    impl_->full_to_free[static_cast<std::size_t>(dof)] =
        static_cast<int>(impl_->free_to_full.size());
    impl_->free_to_full.push_back(dof);
  }
}

CantileverSolver::~CantileverSolver() = default;
CantileverSolver::CantileverSolver(CantileverSolver&&) noexcept = default;
CantileverSolver& CantileverSolver::operator=(CantileverSolver&&) noexcept =
    default;

PointLoad CantileverSolver::tip_load() const {
  // Node at the midpoint of the right edge; for odd ny (no midline node)
  // the node just below the midline is used.
  return {mesh_.node_id(mesh_.domain.nx, mesh_.domain.ny / 2), 1, -1.0};
}

Solution CantileverSolver::solve(
    const std::vector<Eigen::Matrix3d>& per_element,
    const PointLoad& load) {
  if (load.node < 0 || load.node >= mesh_.node_count()) {
    throw std::invalid_argument("solve: load node out of range");
  }
  const Domain& d = mesh_.domain;
  if (per_element.size() != static_cast<std::size_t>(d.element_count())) {
    throw std::invalid_argument("solve: one constitutive entry per element");
  }

  const int nfree = static_cast<int>(impl_->free_to_full.size());
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(d.element_count()) * 64);
  for (int j = 0; j < d.ny; ++j) {
    for (int i = 0; i < d.nx; ++i) {
      const Eigen::Matrix<double, 8, 8> ke = element_stiffness(
          per_element[static_cast<std::size_t>(j * d.nx + i)], d.dx(), d.dy());
      const int nodes[4] = {mesh_.node_id(i, j), mesh_.node_id(i + 1, j),
                            mesh_.node_id(i + 1, j + 1),
                            mesh_.node_id(i, j + 1)};
      for (int r = 0; r < 8; ++r) {
        const int fr = impl_->full_to_free[static_cast<std::size_t>(
            2 * nodes[r / 2] + r % 2)];
        if (fr < 0) continue;
        for (int c = 0; c < 8; ++c) {
          const int fc = impl_->full_to_free[static_cast<std::size_t>(
              2 * nodes[c / 2] + c % 2)];
          if (fc < 0) continue;
          triplets.emplace_back(fr, fc, ke(r, c));
        }
      }
    }
  }
  Eigen::SparseMatrix<double> k(nfree, nfree);
  k.setFromTriplets(triplets.begin(), triplets.end());

  if (!impl_->pattern_ready) {
    impl_->ldlt.analyzePattern(k);
    impl_->pattern_ready = true;
  }
  impl_->ldlt.factorize(k);
  if (impl_->ldlt.info() != Eigen::Success) {
    throw std::runtime_error("solve: sparse factorization failed");
  }

  Eigen::VectorXd f = Eigen::VectorXd::Zero(nfree);
  const int load_dof = 2 * load.node + load.direction;
  const int load_free = impl_->full_to_free[static_cast<std::size_t>(load_dof)];
  if (load_free < 0) {
    throw std::invalid_argument("solve: load applied to a clamped dof");
  }
  f[load_free] = load.magnitude;

  const Eigen::VectorXd uf = impl_->ldlt.solve(f);
  if (impl_->ldlt.info() != Eigen::Success) {
    throw std::runtime_error("solve: back substitution failed");
  }

  Solution sol;
  sol.u = Eigen::VectorXd::Zero(mesh_.dof_count());
  for (int r = 0; r < nfree; ++r) {
    sol.u[impl_->free_to_full[static_cast<std::size_t>(r)]] = uf[r];
  }
  sol.compliance = load.magnitude * sol.u[load_dof];
  sol.stats.free_dofs = nfree;
  sol.stats.factor_nonzeros = impl_->ldlt.matrixL().nestedExpression().nonZeros();
  return sol;
}

Solution solve_cantilever(const Mesh& mesh,
                          const std::vector<Eigen::Matrix3d>& per_element,
                          const PointLoad& load) {
  CantileverSolver solver(mesh);
  return solver.solve(per_element, load);
}

void dump_triplets(const Eigen::SparseMatrix<double>& k, std::ostream& out) {
  for (int col = 0; col < k.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(k, col); it; ++it) {
      out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    }
  }
}

void dump_vector(const Eigen::VectorXd& u, std::ostream& out) {
  for (Eigen::Index i = 0; i < u.size(); ++i) out << u[i] << '\n';
}

}  // namespace topolam
