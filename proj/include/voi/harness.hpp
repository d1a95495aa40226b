#ifndef VOI_HARNESS_HPP
#define VOI_HARNESS_HPP

#include <random>
#include <string>
#include <vector>

#include "voi/cost.hpp"
#include "voi/network.hpp"
#include "voi/policy.hpp"

namespace voi {

enum class Strategy { kNoAcquisition, kMarkovBlanket, kGreedy, kSetAcquisition, kGreedyLA };

std::string strategy_name(Strategy s);
Strategy strategy_by_name(const std::string& name);

Policy build_policy(Strategy s, const PolicyInputs& in);

struct SweepConfig {
  std::vector<double> targets;  // prior-EMC calibration targets, ascending
  CalibrationMode mode = CalibrationMode::kSymmetric;
  std::vector<Strategy> strategies{Strategy::kNoAcquisition, Strategy::kMarkovBlanket,
                                   Strategy::kGreedy, Strategy::kGreedyLA};
  std::vector<unsigned> seeds{1, 2, 3};  // synthetic-cost seeds; single 0 for file costs
  int jobs = 1;
};

struct SweepRow {
  double target = 0;
  CalibrationMode mode = CalibrationMode::kSymmetric;
  unsigned seed = 0;
  Strategy strategy = Strategy::kNoAcquisition;
  double etc = 0;
  double savings = 0;  // ETC(no acquisition) - ETC(strategy)
};

// Calibrate, build, and exactly evaluate every strategy at every target.
// `cost_for_seed` supplies the acquisition cost model per seed (a constant
// model for file-based costs).
std::vector<SweepRow> run_sweep(const DiscreteNetwork& net,
                                const std::vector<std::pair<unsigned, AcquisitionCostModel>>& costs,
                                const SweepConfig& config);

struct SummaryRow {
  double interval_lo = 0;
  double interval_hi = 0;
  Strategy strategy = Strategy::kNoAcquisition;
  double mean_savings = 0;
};

std::vector<SummaryRow> summarize(const std::vector<SweepRow>& rows, double interval_width);

std::string rows_to_csv(const std::vector<SweepRow>& rows);
std::string summary_to_csv(const std::vector<SummaryRow>& rows);

// Bases uniform on [1,100], group overheads uniform on [100,200]; features
// spread round-robin over `groups` groups (none when groups == 0).
AcquisitionCostModel generate_synthetic_costs(const DiscreteNetwork& net, int groups,
                                              unsigned seed);

// Random DAG over one class variable and n binary features; higher
// v-structure density draws more multi-parent nodes.  CPT rows from a
// symmetric Dirichlet.
DiscreteNetwork generate_random_network(int n_features, double v_density, unsigned seed,
                                        int arity = 2);

// Ancestral sampling of a full joint assignment.
Assignment sample_joint(const DiscreteNetwork& net, std::mt19937& rng);

}  // namespace voi

#endif
