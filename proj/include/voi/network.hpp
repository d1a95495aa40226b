#ifndef VOI_NETWORK_HPP
#define VOI_NETWORK_HPP

#include <string>
#include <vector>

#include "voi/types.hpp"

namespace voi {

struct Variable {
  int id = -1;
  std::string name;
  std::vector<std::string> states;

  int arity() const { return static_cast<int>(states.size()); }
};

// Discrete Bayesian network: DAG plus one CPT per variable.  CPT rows are
// laid out row-major over the listed parent order, one row per joint parent
// state, each row of length arity(v).  Immutable once loaded; all queries
// are const.
class DiscreteNetwork {
 public:
  DiscreteNetwork(std::vector<Variable> variables,
                  std::vector<std::vector<int>> parents,
                  std::vector<std::vector<double>> cpt,
                  int class_var);

  static DiscreteNetwork from_json_text(const std::string& text);
  static DiscreteNetwork from_json_file(const std::string& path);
  std::string to_json_text() const;

  int num_vars() const { return static_cast<int>(vars_.size()); }
  int num_features() const { return num_vars() - 1; }
  int class_var() const { return class_var_; }
  const Variable& var(int v) const { return vars_[v]; }
  int arity(int v) const { return vars_[v].arity(); }
  const std::vector<int>& parents(int v) const { return parents_[v]; }
  const std::vector<int>& children(int v) const { return children_[v]; }
  const std::vector<double>& cpt(int v) const { return cpt_[v]; }
  const std::vector<int>& topological_order() const { return topo_; }

  // All variables except the class variable.
  VarSet features() const { return features_; }

  int var_by_name(const std::string& name) const;  // -1 if absent
  int state_by_name(int v, const std::string& label) const;

  VarSet descendants(int v) const;
  VarSet ancestors_of(VarSet s) const;  // includes s itself
  VarSet markov_blanket(int target) const;

  // Standard reachability-based d-separation.  a, b, given must be pairwise
  // disjoint.
  bool d_separated(VarSet a, VarSet b, VarSet given) const;

  double cpt_entry(int v, const Assignment& full) const;

 private:
  void validate();

  std::vector<Variable> vars_;
  std::vector<std::vector<int>> parents_;
  std::vector<std::vector<int>> children_;
  std::vector<std::vector<double>> cpt_;
  std::vector<int> topo_;
  int class_var_;
  VarSet features_;
};

}  // namespace voi

#endif
