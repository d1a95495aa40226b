#ifndef VOI_INFERENCE_HPP
#define VOI_INFERENCE_HPP

#include <memory>
#include <vector>

#include "voi/network.hpp"
#include "voi/types.hpp"

namespace voi {

// Table over a list of variables, row-major with the last variable fastest.
struct Factor {
  std::vector<int> vars;
  std::vector<double> table;

  bool has(int v) const;
  int index_of(int v) const;
};

Factor factor_multiply(const Factor& a, const Factor& b, const DiscreteNetwork& net);
Factor factor_sum_out(const Factor& f, int var, const DiscreteNetwork& net);
Factor factor_restrict(const Factor& f, int var, int state, const DiscreteNetwork& net);

// P(S | e) table from a cached P(S u {drop} | e) table, summing out `drop`.
Factor marginal_from_superset(const Factor& superset, int drop, const DiscreteNetwork& net);

// Exact inference under a fixed evidence assignment.  A context holds the
// evidence-restricted CPT factors; extend() reuses the factors untouched by
// the new evidence, so a chain of extensions shares most of the work and
// answers queries identically to a cold start.  Immutable after construction.
class InferenceContext {
 public:
  explicit InferenceContext(const DiscreteNetwork& net);
  InferenceContext(const DiscreteNetwork& net, const Assignment& evidence);

  // Fresh context over evidence u extra; throws ZeroProbabilityEvidence when
  // the combined evidence is impossible.
  InferenceContext extend(const Assignment& extra) const;

  // Normalized P(target | evidence); target must be unobserved.
  std::vector<double> posterior(int target) const;

  // P(s | evidence) for an assignment disjoint from the evidence.
  double joint_probability(const Assignment& s) const;

  // P(S | evidence) as a factor over the variables of s.
  Factor joint_over(VarSet s) const;

  const DiscreteNetwork& net() const { return *net_; }
  const Assignment& evidence() const { return evidence_; }
  double evidence_probability() const { return evidence_prob_; }

 private:
  InferenceContext(const DiscreteNetwork& net, Assignment evidence,
                   std::vector<std::shared_ptr<const Factor>> factors);

  // Sum out every variable not in `keep`; result factor over keep's vars
  // (unnormalized, i.e. P(keep, e)).
  Factor eliminate_to(VarSet keep, const std::vector<std::shared_ptr<const Factor>>& factors) const;

  const DiscreteNetwork* net_;
  Assignment evidence_;
  std::vector<std::shared_ptr<const Factor>> factors_;  // one per variable
  double evidence_prob_ = 1.0;
};

}  // namespace voi

#endif
