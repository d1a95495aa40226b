#ifndef VOI_LATTICE_HPP
#define VOI_LATTICE_HPP

#include <memory>
#include <vector>

#include "voi/inference.hpp"
#include "voi/network.hpp"
#include "voi/types.hpp"

namespace voi {

// One disjunct of a dependency constraint: a class-to-feature path is
// active when none of `forbidden` is included and every positivity clause
// is satisfied by at least one included variable.
struct PathTerm {
  VarSet forbidden;                // non-collider interior nodes
  std::vector<VarSet> positivity;  // per collider: {collider} u descendants
};

// Disjunction over all simple undirected paths from the class variable.
struct DependencyConstraint {
  std::vector<PathTerm> terms;
};

// Paths are enumerated exhaustively; dense networks can blow up, so the
// enumeration aborts beyond this many paths.
inline constexpr long kMaxPathTerms = 1'000'000;

DependencyConstraint dependency_constraint(const DiscreteNetwork& net, int xi);

// Memoized per-feature constraints for one network.
class ConstraintSet {
 public:
  explicit ConstraintSet(const DiscreteNetwork& net);

  const DiscreteNetwork& net() const { return *net_; }
  const DependencyConstraint& of(int feature) const { return constraints_[feature]; }

  // Does feature xi stay dependent on the class when `included` (minus xi
  // itself) is observed and everything else is hidden?
  bool member_dependent(int xi, VarSet included) const;

  bool is_irreducible(VarSet s, VarSet e) const;

  // s is not irreducible but positivity clauses may still be satisfied by
  // `remaining` (features not yet ruled out) on top of s u e.
  bool is_potentially_irreducible(VarSet s, VarSet e, VarSet remaining) const;

 private:
  const DiscreteNetwork* net_;
  std::vector<DependencyConstraint> constraints_;
};

struct Ordering {
  std::vector<int> order;  // feature ids
  bool perfect = false;
};

// Order features so positivity-clause satisfiers come before the features
// whose constraints need them; perfect when such an order exists.
Ordering choose_ordering(const ConstraintSet& constraints, VarSet candidates);
Ordering choose_ordering(const DiscreteNetwork& net);

struct LatticeNode {
  VarSet set;
  std::vector<int> subsets;    // edges to maximal proper irreducible subsets
  std::vector<int> supersets;  // reverse edges
  // Bound slots filled by the valuation sweep.
  double lb = 0;
  double ub = 0;
  bool exact = false;
  std::shared_ptr<const Factor> cached_joint;  // P(set | e) once evaluated
};

class Lattice {
 public:
  const std::vector<LatticeNode>& nodes() const { return nodes_; }
  std::vector<LatticeNode>& nodes() { return nodes_; }
  VarSet evidence_vars() const { return evidence_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  int find(VarSet s) const;  // -1 when absent
  int add_node(VarSet s);
  void add_edge(int superset, int subset);
  bool has_edge(int superset, int subset) const;
  bool reachable(int from, int to) const;  // along superset->subset edges

  std::vector<int> roots() const;   // no incoming superset edge
  std::vector<int> leaves() const;  // no outgoing subset edge

  std::vector<int> descendants_of(int node) const;  // node indices reachable below
  std::vector<int> ancestors_of(int node) const;

  // How many potentially-irreducible sets the construction ever held.
  long potentially_irreducible_seen = 0;
  Ordering ordering;

  void set_evidence(VarSet e) { evidence_ = e; }

 private:
  std::vector<LatticeNode> nodes_;
  VarSet evidence_;
};

// Incremental construction over a chosen ordering; with a perfect ordering
// no potentially irreducible set is ever stored.
Lattice build_lattice(const DiscreteNetwork& net, VarSet evidence);
Lattice build_lattice(const ConstraintSet& constraints, VarSet evidence);

// Test oracle: every subset passing the per-member d-separation check.
std::vector<VarSet> enumerate_irreducible_bruteforce(const DiscreteNetwork& net, VarSet evidence);

}  // namespace voi

#endif
