#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "topolam/connectivity.hpp"
#include "topolam/fem.hpp"
#include "topolam/geometry.hpp"
#include "topolam/laminate.hpp"

namespace topolam {

// The 18-dimensional benchmark objective: decode a design vector into three
// mirrored components plus the 3-variable lamination field, measure volume
// and connectivity, and run the FE compliance analysis only for connected
// designs. Disconnected designs are charged the connectivity penalty instead
// of a solve.

inline constexpr int kMmcVariables = 15;  // 3 components x (xc, yc, th, l, t)
inline constexpr int kLpVariables = 3;    // (rr, v3_node1, v3_node2)
inline constexpr int kDesignDimension = kMmcVariables + kLpVariables;

// Physical box bounds plus the affine map to and from the unit cube the
// optimizers operate on.
class Bounds {
 public:
  Bounds(Eigen::VectorXd lower, Eigen::VectorXd upper);

  // Benchmark defaults: per component xc in [0,100], yc in [0,50],
  // theta in [-pi/2, pi/2], l in [5,100], t in [1,25]; then rr in [0,1] and
  // both master-node V3 values in [-1,1].
  static Bounds benchmark();

  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  int dimension() const { return static_cast<int>(lower_.size()); }

  Eigen::VectorXd normalize(const Eigen::VectorXd& x) const;
  Eigen::VectorXd denormalize(const Eigen::VectorXd& u) const;
  bool contains(const Eigen::VectorXd& x, double tol = 1e-9) const;
  // Indices of components violating the box (empty if inside).
  std::vector<int> violations(const Eigen::VectorXd& x,
                              double tol = 1e-9) const;

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

enum class VolumeBasis { kElementCount, kFraction };

struct PenaltyConfig {
  double gamma1 = 0.02;   // volume penalty weight
  double gamma2 = 200.0;  // connectivity penalty weight
  // Volume cap: elements for kElementCount (default half the mesh), a
  // fraction in (0,1] for kFraction.
  double v_max = 2500.0;
  VolumeBasis volume_basis = VolumeBasis::kElementCount;

  static PenaltyConfig benchmark(const Domain& d) {
    PenaltyConfig cfg;
    cfg.v_max = d.element_count() / 2.0;
    return cfg;
  }
};

struct EvaluationRecord {
  std::optional<double> compliance;  // absent when the FE solve was skipped
  int volume_count = 0;
  double volume_fraction = 0.0;
  ConnectivityReport connectivity;
  double modified_objective = 0.0;
  bool fe_solved = false;
  double wall_seconds = 0.0;
};

// Decoded design: the component list plus the lamination field description.
struct DecodedDesign {
  DesignTopology topology;
  LpFieldSpec lp;
};

class Evaluator {
 public:
  Evaluator(Domain domain, MaterialProperties material, PenaltyConfig penalty,
            Bounds bounds = Bounds::benchmark());

  // Throws std::invalid_argument listing the offending indices if x leaves
  // the bounds.
  DecodedDesign decode(const Eigen::VectorXd& x) const;
  Eigen::VectorXd encode(const DesignTopology& topo,
                         const LpFieldSpec& lp) const;

  EvaluationRecord evaluate(const Eigen::VectorXd& x);

  // Stage-2 objective: the 3 LP variables on a frozen topology whose
  // geometry, volume and connectivity are computed once and reused.
  void freeze_topology(const Eigen::VectorXd& x_full);
  EvaluationRecord evaluate_lp_only(const Eigen::VectorXd& x_lp);

  // Design vector with the frozen topology and the given LP block (useful
  // for tracing stage-2 evaluations in full coordinates).
  Eigen::VectorXd with_frozen_topology(const Eigen::VectorXd& x_lp) const;

  const Bounds& bounds() const { return bounds_; }
  const Domain& domain() const { return domain_; }
  const PenaltyConfig& penalty() const { return penalty_; }
  const MaterialInvariants& invariants() const { return invariants_; }

  // Number of FE solves performed so far (branch-exclusivity checks).
  long long solve_count() const { return solve_count_; }

  // Per-element lamination points for a decoded design (render support).
  std::vector<LaminationPoint> lp_field(const LpFieldSpec& lp) const;
  // Per-element constitutive matrices rho * A0.
  std::vector<Eigen::Matrix3d> element_matrices(const DensityField& rho,
                                                const LpFieldSpec& lp) const;

 private:
  EvaluationRecord evaluate_decoded(const DecodedDesign& design,
                                    const DensityField& rho,
                                    const VolumeCount& vol,
                                    const ConnectivityReport& conn);

  Domain domain_;
  MaterialProperties material_;
  MaterialInvariants invariants_;
  PenaltyConfig penalty_;
  Bounds bounds_;
  CantileverSolver solver_;
  long long solve_count_ = 0;

  struct FrozenContext {
    Eigen::VectorXd x_mmc;
    DesignTopology topology;
    DensityField rho;
    VolumeCount volume;
    ConnectivityReport connectivity;
  };
  std::optional<FrozenContext> frozen_;
};

}  // namespace topolam
