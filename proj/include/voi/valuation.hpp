#ifndef VOI_VALUATION_HPP
#define VOI_VALUATION_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "voi/cost.hpp"
#include "voi/inference.hpp"
#include "voi/lattice.hpp"

namespace voi {

inline constexpr double kMoneyTol = 1e-9;

struct EviBounds {
  double lb = 0;
  double ub = 0;
  bool exact = false;
};

// Expected value of information of observing s before deciding, under the
// evidence already held by ctx.  Nonnegative; zero-probability joint states
// are skipped.
double evi_set(const InferenceContext& ctx, VarSet s, const MisclassificationMatrix& m);

double benefit_set(const InferenceContext& ctx, VarSet s, const MisclassificationMatrix& m,
                   const AcquisitionCostModel& costs, const AcquisitionHistory& history);

double benefit_single(const InferenceContext& ctx, int feature,
                      const MisclassificationMatrix& m, const AcquisitionCostModel& costs,
                      const AcquisitionHistory& history);

// Memoizes EVI values computed against a reference matrix; queries with a
// scalar multiple of the reference are answered by scaling.  Used by the
// sweep harness where the matrix varies only in magnitude.
class EviCache {
 public:
  explicit EviCache(MisclassificationMatrix reference) : ref_(std::move(reference)) {}

  std::optional<double> scale_of(const MisclassificationMatrix& m) const;
  double evi(const InferenceContext& ctx, VarSet s, const MisclassificationMatrix& m);

 private:
  MisclassificationMatrix ref_;
  std::unordered_map<std::string, double> values_;
};

struct ValuationReport {
  std::vector<double> evi;        // per lattice node
  std::vector<EviBounds> bounds;  // final bounds (lb == ub when resolved)
  int exact_evaluations = 0;
};

// Bound-sharing EVI sweep: seed from the Markov-blanket root and the
// leaves, then close remaining gaps midpoint-first along the longest
// unresolved chain.  Fills the lattice nodes' bound slots as a side effect.
ValuationReport sweep_evi(Lattice& lat, const InferenceContext& ctx,
                          const MisclassificationMatrix& m, EviCache* cache = nullptr);

// Adds an edge S1 -> S2 whenever S1 d-separates the class from S2 \ S1,
// skipping edges already implied or that would close a cycle.  Returns the
// added pairs (node indices).
std::vector<std::pair<int, int>> augment_dominance_edges(Lattice& lat,
                                                         const DiscreteNetwork& net);

struct BestSet {
  int node = -1;
  VarSet set;
  double benefit = 0;
};

// argmax of Benefit over lattice nodes; ties go to the smaller set, then
// canonical order.
BestSet best_set(const Lattice& lat, const ValuationReport& report,
                 const AcquisitionCostModel& costs, const AcquisitionHistory& history);

}  // namespace voi

#endif
