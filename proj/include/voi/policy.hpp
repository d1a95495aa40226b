#ifndef VOI_POLICY_HPP
#define VOI_POLICY_HPP

#include <memory>
#include <string>
#include <vector>

#include "voi/cost.hpp"
#include "voi/inference.hpp"
#include "voi/valuation.hpp"

namespace voi {

// Decision-tree node: internal nodes acquire a feature with one child per
// state, leaves commit to a class.  Zero-probability branches are kept as
// explicitly impossible leaves so every internal node has full fan-out.
struct PolicyNode {
  int feature = -1;  // -1 marks a leaf
  int decided_class = -1;
  bool impossible = false;
  double path_prob = 0;  // P(path values | initial evidence)
  AcquisitionHistory history;
  std::vector<std::unique_ptr<PolicyNode>> children;

  bool is_leaf() const { return feature < 0; }
};

struct Policy {
  std::unique_ptr<PolicyNode> root;
  Assignment initial_evidence;
};

struct PolicyLeaf {
  AcquisitionHistory path;
  double prob = 0;
  double fc = 0;
  double emc = 0;
  double tc = 0;
  int decided_class = -1;
};

struct PolicyEvaluation {
  std::vector<PolicyLeaf> leaves;
  double etc = 0;
};

struct PolicyInputs {
  const DiscreteNetwork& net;
  const AcquisitionCostModel& costs;
  const MisclassificationMatrix& matrix;
  Assignment evidence;  // observed before any acquisition
  EviCache* cache = nullptr;
};

// Exact expected total cost: sum over root-to-leaf paths of
// P(path) * (feature cost + expected misclassification cost).
PolicyEvaluation evaluate(const Policy& policy, const DiscreteNetwork& net,
                          const AcquisitionCostModel& costs,
                          const MisclassificationMatrix& matrix);

Policy build_no_acquisition(const PolicyInputs& in);
Policy build_markov_blanket(const PolicyInputs& in);
Policy build_greedy(const PolicyInputs& in);
Policy build_set_acquisition(const PolicyInputs& in);
Policy build_greedy_la(const PolicyInputs& in);

// Exhaustive acquire-or-stop recursion; globally minimal expected total
// cost.  Only for tiny instances.
Policy optimal_policy_oracle(const PolicyInputs& in, int max_features = 4);

// Indented one-node-per-line rendering for the CLI.
std::string render_policy(const Policy& policy, const DiscreteNetwork& net,
                          const AcquisitionCostModel& costs,
                          const MisclassificationMatrix& matrix);

std::string policy_to_json_text(const Policy& policy, const DiscreteNetwork& net);

}  // namespace voi

#endif
