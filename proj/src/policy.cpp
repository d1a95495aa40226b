#include "voi/policy.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>

#include "json.hpp"

namespace voi {

namespace {

std::unique_ptr<PolicyNode> make_leaf(const InferenceContext& ctx,
                                      const MisclassificationMatrix& m,
                                      const AcquisitionHistory& history, double prob) {
  auto leaf = std::make_unique<PolicyNode>();
  leaf->history = history;
  leaf->path_prob = prob;
  leaf->decided_class = emc(ctx.posterior(ctx.net().class_var()), m).decided_class;
  return leaf;
}

std::unique_ptr<PolicyNode> impossible_leaf(const AcquisitionHistory& history) {
  auto leaf = std::make_unique<PolicyNode>();
  leaf->history = history;
  leaf->impossible = true;
  leaf->decided_class = 0;
  return leaf;
}

// Shared expansion driver: `next_feature` decides which feature to acquire
// at the current information state, or -1 to stop and classify.
template <typename NextFeature>
std::unique_ptr<PolicyNode> expand(const PolicyInputs& in, const InferenceContext& ctx,
                                   const AcquisitionHistory& history, double prob,
                                   NextFeature&& next_feature) {
  int f = next_feature(ctx, history);
  if (f < 0) return make_leaf(ctx, in.matrix, history, prob);
  auto node = std::make_unique<PolicyNode>();
  node->feature = f;
  node->history = history;
  node->path_prob = prob;
  for (int state = 0; state < in.net.arity(f); ++state) {
    AcquisitionHistory child_hist = in.costs.extended(history, f, state);
    Assignment step(in.net.num_vars());
    step.set(f, state);
    double p = ctx.joint_probability(step);
    if (p <= 0.0) {
      node->children.push_back(impossible_leaf(child_hist));
      continue;
    }
    InferenceContext child_ctx = ctx.extend(step);
    node->children.push_back(
        expand(in, child_ctx, child_hist, prob * p, next_feature));
  }
  return node;
}

VarSet unacquired(const PolicyInputs& in, const InferenceContext& ctx) {
  return in.net.features() - ctx.evidence().vars();
}

}  // namespace

Policy build_no_acquisition(const PolicyInputs& in) {
  InferenceContext ctx(in.net, in.evidence);
  Policy p;
  p.initial_evidence = in.evidence;
  p.root = make_leaf(ctx, in.matrix, AcquisitionHistory{}, 1.0);
  return p;
}

Policy build_markov_blanket(const PolicyInputs& in) {
  InferenceContext ctx(in.net, in.evidence);
  std::vector<int> batch =
      (in.net.markov_blanket(in.net.class_var()) - in.evidence.vars()).to_vector();
  Policy p;
  p.initial_evidence = in.evidence;
  p.root = expand(in, ctx, AcquisitionHistory{}, 1.0,
                  [&](const InferenceContext&, const AcquisitionHistory& h) {
                    for (int f : batch)
                      if (!h.features.contains(f)) return f;
                    return -1;
                  });
  return p;
}

Policy build_greedy(const PolicyInputs& in) {
  InferenceContext ctx(in.net, in.evidence);
  Policy p;
  p.initial_evidence = in.evidence;
  p.root = expand(in, ctx, AcquisitionHistory{}, 1.0,
                  [&](const InferenceContext& c, const AcquisitionHistory& h) {
                    int best = -1;
                    double best_benefit = 0;
                    for (int f : unacquired(in, c).to_vector()) {
                      double b = benefit_single(c, f, in.matrix, in.costs, h);
                      if (b > kMoneyTol && (best < 0 || b > best_benefit)) {
                        best = f;
                        best_benefit = b;
                      }
                    }
                    return best;
                  });
  return p;
}

namespace {

// Builders that consult the lattice share constraint compilation and the
// per-evidence-set lattices across all paths of one policy.
class LatticePool {
 public:
  explicit LatticePool(const DiscreteNetwork& net) : constraints_(net) {}

  const Lattice& for_evidence(VarSet evidence_vars) {
    auto it = built_.find(evidence_vars.bits());
    if (it == built_.end())
      it = built_.emplace(evidence_vars.bits(), build_lattice(constraints_, evidence_vars)).first;
    return it->second;
  }

 private:
  ConstraintSet constraints_;
  std::map<std::uint64_t, Lattice> built_;
};

BestSet best_lattice_set(const PolicyInputs& in, LatticePool& pool,
                         const InferenceContext& ctx, const AcquisitionHistory& h,
                         Lattice* out_lattice = nullptr, ValuationReport* out_report = nullptr) {
  Lattice lat = pool.for_evidence(ctx.evidence().vars());  // copy; sweep fills bounds
  ValuationReport rep = sweep_evi(lat, ctx, in.matrix, in.cache);
  BestSet best = best_set(lat, rep, in.costs, h);
  if (out_lattice) *out_lattice = std::move(lat);
  if (out_report) *out_report = std::move(rep);
  return best;
}

}  // namespace

namespace {

// A chosen batch is acquired in full before the next set decision; the
// remaining batch is threaded down the recursion.
std::unique_ptr<PolicyNode> expand_batch(const PolicyInputs& in, LatticePool& pool,
                                         const InferenceContext& ctx,
                                         const AcquisitionHistory& h, double prob,
                                         std::vector<int> batch) {
  if (batch.empty()) {
    BestSet best = best_lattice_set(in, pool, ctx, h);
    if (best.node < 0 || best.benefit <= kMoneyTol || best.set.empty())
      return make_leaf(ctx, in.matrix, h, prob);
    batch = best.set.to_vector();
  }
  int f = batch.front();
  std::vector<int> rest(batch.begin() + 1, batch.end());
  auto node = std::make_unique<PolicyNode>();
  node->feature = f;
  node->history = h;
  node->path_prob = prob;
  for (int state = 0; state < in.net.arity(f); ++state) {
    AcquisitionHistory ch = in.costs.extended(h, f, state);
    Assignment step(in.net.num_vars());
    step.set(f, state);
    double p = ctx.joint_probability(step);
    if (p <= 0.0) {
      node->children.push_back(impossible_leaf(ch));
      continue;
    }
    node->children.push_back(expand_batch(in, pool, ctx.extend(step), ch, prob * p, rest));
  }
  return node;
}

}  // namespace

Policy build_set_acquisition(const PolicyInputs& in) {
  InferenceContext ctx(in.net, in.evidence);
  LatticePool pool(in.net);
  Policy p;
  p.initial_evidence = in.evidence;
  p.root = expand_batch(in, pool, ctx, AcquisitionHistory{}, 1.0, {});
  return p;
}

Policy build_greedy_la(const PolicyInputs& in) {
  InferenceContext ctx(in.net, in.evidence);
  LatticePool pool(in.net);
  Policy p;
  p.initial_evidence = in.evidence;
  p.root = expand(in, ctx, AcquisitionHistory{}, 1.0,
                  [&](const InferenceContext& c, const AcquisitionHistory& h) {
                    BestSet best = best_lattice_set(in, pool, c, h);
                    if (best.node < 0 || best.benefit <= kMoneyTol || best.set.empty())
                      return -1;
                    // Single best feature inside the chosen set, even when
                    // its own benefit is negative.
                    int pick = -1;
                    double pick_benefit = 0;
                    for (int f : best.set.to_vector()) {
                      double b = benefit_single(c, f, in.matrix, in.costs, h);
                      if (pick < 0 || b > pick_benefit + kMoneyTol) {
                        pick = f;
                        pick_benefit = b;
                      }
                    }
                    return pick;
                  });
  return p;
}

namespace {

struct OracleState {
  const PolicyInputs& in;
  std::map<std::string, double> memo;

  double value(const InferenceContext& ctx, const AcquisitionHistory& h) {
    std::string key = ctx.evidence().key();
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    double best = emc(ctx.posterior(in.net.class_var()), in.matrix).cost;
    for (int f : (in.net.features() - ctx.evidence().vars()).to_vector()) {
      double cost = in.costs.set_cost(VarSet::single(f), h);
      double expected = cost;
      for (int state = 0; state < in.net.arity(f); ++state) {
        Assignment step(in.net.num_vars());
        step.set(f, state);
        double p = ctx.joint_probability(step);
        if (p <= 0.0) continue;
        expected += p * value(ctx.extend(step), in.costs.extended(h, f, state));
      }
      best = std::min(best, expected);
    }
    memo[key] = best;
    return best;
  }

  // Re-derive the argmin choice at each state to build the tree.
  std::unique_ptr<PolicyNode> build(const InferenceContext& ctx, const AcquisitionHistory& h,
                                    double prob) {
    double stop = emc(ctx.posterior(in.net.class_var()), in.matrix).cost;
    int best_f = -1;
    double best_v = stop;
    for (int f : (in.net.features() - ctx.evidence().vars()).to_vector()) {
      double expected = in.costs.set_cost(VarSet::single(f), h);
      for (int state = 0; state < in.net.arity(f); ++state) {
        Assignment step(in.net.num_vars());
        step.set(f, state);
        double p = ctx.joint_probability(step);
        if (p <= 0.0) continue;
        expected += p * value(ctx.extend(step), in.costs.extended(h, f, state));
      }
      if (expected < best_v - 1e-12) {
        best_v = expected;
        best_f = f;
      }
    }
    if (best_f < 0) return make_leaf(ctx, in.matrix, h, prob);
    auto node = std::make_unique<PolicyNode>();
    node->feature = best_f;
    node->history = h;
    node->path_prob = prob;
    for (int state = 0; state < in.net.arity(best_f); ++state) {
      AcquisitionHistory ch = in.costs.extended(h, best_f, state);
      Assignment step(in.net.num_vars());
      step.set(best_f, state);
      double p = ctx.joint_probability(step);
      if (p <= 0.0) {
        node->children.push_back(impossible_leaf(ch));
        continue;
      }
      node->children.push_back(build(ctx.extend(step), ch, prob * p));
    }
    return node;
  }
};

}  // namespace

Policy optimal_policy_oracle(const PolicyInputs& in, int max_features) {
  if ((in.net.features() - in.evidence.vars()).count() > max_features)
    throw ValidationError("optimal-policy oracle limited to " +
                          std::to_string(max_features) + " features");
  InferenceContext ctx(in.net, in.evidence);
  OracleState st{in, {}};
  Policy p;
  p.initial_evidence = in.evidence;
  p.root = st.build(ctx, AcquisitionHistory{}, 1.0);
  return p;
}

namespace {

void evaluate_node(const PolicyNode& node, const InferenceContext& ctx,
                   const DiscreteNetwork& net, const AcquisitionCostModel& costs,
                   const MisclassificationMatrix& matrix, double prob,
                   PolicyEvaluation& out) {
  if (node.is_leaf()) {
    if (node.impossible) return;  // contributes 0 to the expectation
    PolicyLeaf leaf;
    leaf.path = node.history;
    leaf.prob = prob;
    leaf.fc = path_feature_cost(costs, node.history);
    EmcResult r = emc(ctx.posterior(net.class_var()), matrix);
    leaf.emc = r.cost;
    leaf.decided_class = r.decided_class;
    leaf.tc = leaf.fc + leaf.emc;
    out.leaves.push_back(leaf);
    out.etc += prob * leaf.tc;
    return;
  }
  for (int state = 0; state < net.arity(node.feature); ++state) {
    Assignment step(net.num_vars());
    step.set(node.feature, state);
    double p = ctx.joint_probability(step);
    if (p <= 0.0) continue;
    evaluate_node(*node.children[state], ctx.extend(step), net, costs, matrix, prob * p, out);
  }
}

}  // namespace

PolicyEvaluation evaluate(const Policy& policy, const DiscreteNetwork& net,
                          const AcquisitionCostModel& costs,
                          const MisclassificationMatrix& matrix) {
  PolicyEvaluation out;
  InferenceContext ctx(net, policy.initial_evidence);
  evaluate_node(*policy.root, ctx, net, costs, matrix, 1.0, out);
  return out;
}

namespace {

void render_node(const PolicyNode& node, const InferenceContext& ctx,
                 const DiscreteNetwork& net, const AcquisitionCostModel& costs,
                 const MisclassificationMatrix& matrix, int depth, double prob,
                 std::ostringstream& out) {
  std::string indent(2 * depth, ' ');
  char buf[64];
  if (node.is_leaf()) {
    if (node.impossible) {
      out << indent << "x (impossible branch)\n";
      return;
    }
    double fc = path_feature_cost(costs, node.history);
    EmcResult r = emc(ctx.posterior(net.class_var()), matrix);
    snprintf(buf, sizeof buf, "p=%.4f fc=%.4f emc=%.4f tc=%.4f", prob, fc, r.cost,
             fc + r.cost);
    out << indent << "decide " << net.var(net.class_var()).states[r.decided_class] << "  "
        << buf << "\n";
    return;
  }
  snprintf(buf, sizeof buf, "p=%.4f", prob);
  out << indent << "acquire " << net.var(node.feature).name << "  " << buf << "\n";
  for (int state = 0; state < net.arity(node.feature); ++state) {
    Assignment step(net.num_vars());
    step.set(node.feature, state);
    double p = ctx.joint_probability(step);
    out << indent << net.var(node.feature).name << " = "
        << net.var(node.feature).states[state] << ":\n";
    if (p <= 0.0) {
      out << indent << "  x (impossible branch)\n";
      continue;
    }
    render_node(*node.children[state], ctx.extend(step), net, costs, matrix, depth + 1,
                prob * p, out);
  }
}

nlohmann::json node_to_json(const PolicyNode& node, const DiscreteNetwork& net) {
  nlohmann::json j;
  if (node.is_leaf()) {
    if (node.impossible) {
      j["impossible"] = true;
    } else {
      j["decide"] = net.var(net.class_var()).states[node.decided_class];
    }
    return j;
  }
  j["acquire"] = net.var(node.feature).name;
  auto& branches = j["branches"] = nlohmann::json::object();
  for (int state = 0; state < net.arity(node.feature); ++state)
    branches[net.var(node.feature).states[state]] =
        node_to_json(*node.children[state], net);
  return j;
}

}  // namespace

std::string render_policy(const Policy& policy, const DiscreteNetwork& net,
                          const AcquisitionCostModel& costs,
                          const MisclassificationMatrix& matrix) {
  std::ostringstream out;
  InferenceContext ctx(net, policy.initial_evidence);
  render_node(*policy.root, ctx, net, costs, matrix, 0, 1.0, out);
  return out.str();
}

std::string policy_to_json_text(const Policy& policy, const DiscreteNetwork& net) {
  return node_to_json(*policy.root, net).dump(2);
}

}  // namespace voi
