#include "topolam/evaluation.hpp"

#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace topolam {

namespace {

constexpr double kPi = 3.14159265358979323846;

double volume_measure(const VolumeCount& vol, const PenaltyConfig& cfg) {
  return cfg.volume_basis == VolumeBasis::kElementCount
             ? static_cast<double>(vol.count)
             : vol.fraction;
}

}  // namespace

Bounds::Bounds(Eigen::VectorXd lower, Eigen::VectorXd upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw std::invalid_argument("Bounds: size mismatch");
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!(lower_[i] < upper_[i])) {
      throw std::invalid_argument("Bounds: lower must be < upper");
    }
  }
}

Bounds Bounds::benchmark() {
  Eigen::VectorXd lo(kDesignDimension), hi(kDesignDimension);
  for (int c = 0; c < 3; ++c) {
    lo[5 * c + 0] = 0.0;        hi[5 * c + 0] = 100.0;      // xc
    lo[5 * c + 1] = 0.0;        hi[5 * c + 1] = 50.0;       // yc
    lo[5 * c + 2] = -kPi / 2.0; hi[5 * c + 2] = kPi / 2.0;  // theta
    lo[5 * c + 3] = 5.0;        hi[5 * c + 3] = 100.0;      // l
    lo[5 * c + 4] = 1.0;        hi[5 * c + 4] = 25.0;       // t
  }
  lo[15] = 0.0;  hi[15] = 1.0;  // rr
  lo[16] = -1.0; hi[16] = 1.0;  // v3 at node 1
  lo[17] = -1.0; hi[17] = 1.0;  // v3 at node 2
  return Bounds(lo, hi);
}

Eigen::VectorXd Bounds::normalize(const Eigen::VectorXd& x) const {
  return (x - lower_).cwiseQuotient(upper_ - lower_);
}

Eigen::VectorXd Bounds::denormalize(const Eigen::VectorXd& u) const {
  return lower_ + u.cwiseProduct(upper_ - lower_);
}

bool Bounds::contains(const Eigen::VectorXd& x, double tol) const {
  return violations(x, tol).empty();
}

std::vector<int> Bounds::violations(const Eigen::VectorXd& x,
                                    double tol) const {
  std::vector<int> bad;
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (i >= x.size() || x[i] < lower_[i] - tol || x[i] > upper_[i] + tol) {
      bad.push_back(static_cast<int>(i));
    }
  }
  return bad;
}

Evaluator::Evaluator(Domain domain, MaterialProperties material,
                     PenaltyConfig penalty, Bounds bounds)
    : domain_(domain),
      material_(material),
      invariants_(material_invariants(reduced_stiffness(material))),
      penalty_(penalty),
      bounds_(std::move(bounds)),
      solver_(Mesh{domain}) {
  if (bounds_.dimension() != kDesignDimension) {
    throw std::invalid_argument("Evaluator: bounds must be 18-dimensional");
  }
}

DecodedDesign Evaluator::decode(const Eigen::VectorXd& x) const {
  if (x.size() != kDesignDimension) {
    throw std::invalid_argument("decode: expected an 18-component vector");
  }
  const std::vector<int> bad = bounds_.violations(x);
  if (!bad.empty()) {
    std::ostringstream msg;
    msg << "decode: design vector outside bounds at indices";
    for (int i : bad) msg << ' ' << i;
    throw std::invalid_argument(msg.str());
  }
  DecodedDesign d;
  for (int c = 0; c < 3; ++c) {
    d.topology.components.push_back({x[5 * c + 0], x[5 * c + 1], x[5 * c + 2],
                                     x[5 * c + 3], x[5 * c + 4]});
  }
  d.topology.mirror = true;
  d.topology.exponent = 6;
  d.lp = LpFieldSpec{x[15], x[16], x[17], domain_.lx, domain_.ly};
  return d;
}

Eigen::VectorXd Evaluator::encode(const DesignTopology& topo,
                                  const LpFieldSpec& lp) const {
  if (topo.components.size() != 3) {
    throw std::invalid_argument("encode: exactly 3 components expected");
  }
  Eigen::VectorXd x(kDesignDimension);
  for (int c = 0; c < 3; ++c) {
    const Component& comp = topo.components[static_cast<std::size_t>(c)];
    x[5 * c + 0] = comp.xc;
    x[5 * c + 1] = comp.yc;
    x[5 * c + 2] = comp.theta;
    x[5 * c + 3] = comp.len;
    x[5 * c + 4] = comp.thick;
  }
  x[15] = lp.rr;
  x[16] = lp.v3_node1;
  x[17] = lp.v3_node2;
  return x;
}

std::vector<LaminationPoint> Evaluator::lp_field(const LpFieldSpec& lp) const {
  std::vector<LaminationPoint> field;
  field.reserve(static_cast<std::size_t>(domain_.element_count()));
  for (int j = 0; j < domain_.ny; ++j) {
    for (int i = 0; i < domain_.nx; ++i) {
      field.push_back(interpolate_lp(lp, (i + 0.5) * domain_.dx(),
                                     (j + 0.5) * domain_.dy()));
    }
  }
  return field;
}

std::vector<Eigen::Matrix3d> Evaluator::element_matrices(
    const DensityField& rho, const LpFieldSpec& lp) const {
  const std::vector<LaminationPoint> field = lp_field(lp);
  std::vector<Eigen::Matrix3d> mats;
  mats.reserve(field.size());
  for (int j = 0; j < domain_.ny; ++j) {
    for (int i = 0; i < domain_.nx; ++i) {
      const std::size_t e = static_cast<std::size_t>(j * domain_.nx + i);
      mats.push_back(rho.at(i, j) * a_matrix(invariants_, field[e]));
    }
  }
  return mats;
}

EvaluationRecord Evaluator::evaluate_decoded(const DecodedDesign& design,
                                             const DensityField& rho,
                                             const VolumeCount& vol,
                                             const ConnectivityReport& conn) {
  EvaluationRecord rec;
  rec.volume_count = vol.count;
  rec.volume_fraction = vol.fraction;
  rec.connectivity = conn;

  const double v = volume_measure(vol, penalty_);
  const double volume_term =
      penalty_.gamma1 * std::max(v - penalty_.v_max, 0.0);

  if (conn.psi_total > 0.0) {
    rec.fe_solved = false;
    rec.modified_objective = volume_term + penalty_.gamma2 * conn.psi_total;
  } else {
    const std::vector<Eigen::Matrix3d> mats =
        element_matrices(rho, design.lp);
    const Solution sol = solver_.solve(mats, solver_.tip_load());
    ++solve_count_;
    rec.fe_solved = true;
    rec.compliance = sol.compliance;
    rec.modified_objective = sol.compliance + volume_term;
  }
  return rec;
}

EvaluationRecord Evaluator::evaluate(const Eigen::VectorXd& x) {
  const auto t0 = std::chrono::steady_clock::now();
  const DecodedDesign design = decode(x);
  const LevelSetField phi = global_lsf(design.topology, domain_);
  const DensityField rho = density_field(phi);
  const VolumeCount vol = volume_count(rho);
  const ConnectivityReport conn =
      connectivity_penalty(solid_mask(rho, domain_));
  EvaluationRecord rec = evaluate_decoded(design, rho, vol, conn);
  rec.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0).count();
  return rec;
}

void Evaluator::freeze_topology(const Eigen::VectorXd& x_full) {
  const DecodedDesign design = decode(x_full);
  const LevelSetField phi = global_lsf(design.topology, domain_);
  DensityField rho = density_field(phi);
  const VolumeCount vol = volume_count(rho);
  const ConnectivityReport conn =
      connectivity_penalty(solid_mask(rho, domain_));
  frozen_ = FrozenContext{x_full.head(kMmcVariables), design.topology,
                          std::move(rho), vol, conn};
}

Eigen::VectorXd Evaluator::with_frozen_topology(
    const Eigen::VectorXd& x_lp) const {
  if (!frozen_) throw std::logic_error("no frozen topology");
  Eigen::VectorXd x(kDesignDimension);
  x.head(kMmcVariables) = frozen_->x_mmc;
  x.tail(kLpVariables) = x_lp;
  return x;
}

EvaluationRecord Evaluator::evaluate_lp_only(const Eigen::VectorXd& x_lp) {
  if (!frozen_) throw std::logic_error("evaluate_lp_only: freeze first");
  if (x_lp.size() != kLpVariables) {
    throw std::invalid_argument("evaluate_lp_only: expected 3 LP values");
  }
  const auto t0 = std::chrono::steady_clock::now();
  DecodedDesign design;
  design.topology = frozen_->topology;
  design.lp = LpFieldSpec{x_lp[0], x_lp[1], x_lp[2], domain_.lx, domain_.ly};
  EvaluationRecord rec = evaluate_decoded(design, frozen_->rho,
                                          frozen_->volume,
                                          frozen_->connectivity);
  rec.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace topolam
