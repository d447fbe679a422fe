#include "topolam/optimizer.hpp"

#include <cmath>
#include <stdexcept>

#include "topolam/optimizers_impl.hpp"

namespace topolam {

OptimizerKind optimizer_kind_from_string(const std::string& name) {
  if (name == "cmaes") return OptimizerKind::kCmaes;
  if (name == "de") return OptimizerKind::kDe;
  if (name == "turbo1") return OptimizerKind::kTurbo1;
  if (name == "vanilla_bo") return OptimizerKind::kVanillaBo;
  if (name == "random") return OptimizerKind::kRandom;
  throw std::invalid_argument("unknown optimizer kind: " + name);
}

std::string to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kCmaes: return "cmaes";
    case OptimizerKind::kDe: return "de";
    case OptimizerKind::kTurbo1: return "turbo1";
    case OptimizerKind::kVanillaBo: return "vanilla_bo";
    case OptimizerKind::kRandom: return "random";
  }
  throw std::logic_error("unreachable");
}

std::pair<int, int> cmaes_config(int dimension) {
  if (dimension < 1) throw std::invalid_argument("cmaes_config: d >= 1");
  const int lambda = 4 + static_cast<int>(std::floor(3.0 * std::log(dimension)));
  return {lambda, lambda / 2};
}

std::unique_ptr<Optimizer> make_optimizer(const OptimizerSpec& spec) {
  if (spec.dimension < 1) {
    throw std::invalid_argument("make_optimizer: dimension >= 1 required");
  }
  switch (spec.kind) {
    case OptimizerKind::kCmaes:
      return std::make_unique<CmaesOptimizer>(spec);
    case OptimizerKind::kDe:
      return std::make_unique<DeOptimizer>(spec);
    case OptimizerKind::kTurbo1:
      return std::make_unique<TurboOptimizer>(spec);
    case OptimizerKind::kVanillaBo:
      return std::make_unique<VanillaBoOptimizer>(spec);
    case OptimizerKind::kRandom:
      return std::make_unique<RandomSearchOptimizer>(spec);
  }
  throw std::logic_error("unreachable");
}

}  // namespace topolam
