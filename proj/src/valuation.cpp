#include "voi/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace voi {

namespace {

double clamp_evi(double v) {
  return (v < 0 && v > -kMoneyTol) ? 0.0 : v;
}

// Expectation term of the EVI, given the P(S | e) table for the node.
double expected_posterior_emc(const InferenceContext& ctx, const Factor& joint,
                              const MisclassificationMatrix& m) {
  const DiscreteNetwork& net = ctx.net();
  int y = net.class_var();
  std::vector<int> digits(joint.vars.size(), 0);
  double acc = 0;
  for (double p : joint.table) {
    if (p > 0) {
      Assignment a(net.num_vars());
      for (size_t i = 0; i < joint.vars.size(); ++i) a.set(joint.vars[i], digits[i]);
      InferenceContext sub = ctx.extend(a);
      acc += p * emc(sub.posterior(y), m).cost;
    }
    for (int d = static_cast<int>(digits.size()) - 1; d >= 0; --d) {
      if (++digits[d] < net.arity(joint.vars[d])) break;
      digits[d] = 0;
    }
  }
  return acc;
}

double evi_from_joint(const InferenceContext& ctx, const Factor& joint,
                      const MisclassificationMatrix& m) {
  double base = emc(ctx.posterior(ctx.net().class_var()), m).cost;
  return clamp_evi(base - expected_posterior_emc(ctx, joint, m));
}

}  // namespace

double evi_set(const InferenceContext& ctx, VarSet s, const MisclassificationMatrix& m) {
  if (s.empty()) return 0.0;
  if (s.intersects(ctx.evidence().vars()))
    throw ValidationError("EVI set overlaps evidence");
  return evi_from_joint(ctx, ctx.joint_over(s), m);
}

double benefit_set(const InferenceContext& ctx, VarSet s, const MisclassificationMatrix& m,
                   const AcquisitionCostModel& costs, const AcquisitionHistory& history) {
  return evi_set(ctx, s, m) - costs.set_cost(s, history);
}

double benefit_single(const InferenceContext& ctx, int feature,
                      const MisclassificationMatrix& m, const AcquisitionCostModel& costs,
                      const AcquisitionHistory& history) {
  return benefit_set(ctx, VarSet::single(feature), m, costs, history);
}

std::optional<double> EviCache::scale_of(const MisclassificationMatrix& m) const {
  if (m.classes() != ref_.classes()) return std::nullopt;
  int k = m.classes();
  double scale = -1;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double r = ref_.at(i, j), v = m.at(i, j);
      if (r == 0.0) {
        if (std::abs(v) > 1e-12) return std::nullopt;
      } else if (scale < 0) {
        scale = v / r;
      } else if (std::abs(v - scale * r) > 1e-9 * std::max(1.0, std::abs(v))) {
        return std::nullopt;
      }
    }
  return scale < 0 ? std::optional<double>(0.0) : scale;
}

double EviCache::evi(const InferenceContext& ctx, VarSet s, const MisclassificationMatrix& m) {
  auto scale = scale_of(m);
  if (!scale) return evi_set(ctx, s, m);
  std::string key = ctx.evidence().key() + '|' + std::to_string(s.bits());
  auto it = values_.find(key);
  if (it == values_.end())
    it = values_.emplace(key, evi_set(ctx, s, ref_)).first;
  return clamp_evi(*scale * it->second);
}

namespace {

// Middle node of the longest chain of unresolved nodes, following both
// subset and dominance edges.
int pick_midpoint(const Lattice& lat, const std::vector<char>& resolved) {
  int n = lat.size();
  std::vector<int> indeg(n, 0);
  for (int v = 0; v < n; ++v) {
    if (resolved[v]) continue;
    for (int u : lat.nodes()[v].subsets)
      if (!resolved[u]) ++indeg[u];
  }
  // Longest-path DP over the unresolved subgraph in topological order.
  std::deque<int> q;
  for (int v = 0; v < n; ++v)
    if (!resolved[v] && indeg[v] == 0) q.push_back(v);
  std::vector<int> len(n, 1), pred(n, -1), order;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    order.push_back(v);
    for (int u : lat.nodes()[v].subsets) {
      if (resolved[u]) continue;
      if (len[v] + 1 > len[u]) {
        len[u] = len[v] + 1;
        pred[u] = v;
      }
      if (--indeg[u] == 0) q.push_back(u);
    }
  }
  int tail = -1;
  for (int v : order)
    if (tail < 0 || len[v] > len[tail]) tail = v;
  if (tail < 0) return -1;
  std::vector<int> chain;
  for (int v = tail; v >= 0; v = pred[v]) chain.push_back(v);
  return chain[chain.size() / 2];
}

}  // namespace

ValuationReport sweep_evi(Lattice& lat, const InferenceContext& ctx,
                          const MisclassificationMatrix& m, EviCache* cache) {
  const DiscreteNetwork& net = ctx.net();
  int n = lat.size();
  ValuationReport report;
  report.evi.assign(n, 0);
  report.bounds.assign(n, EviBounds{});

  double inf = std::numeric_limits<double>::infinity();
  std::vector<double> lb(n, 0.0), ub(n, inf);
  std::vector<char> evaluated(n, 0);

  auto evaluate = [&](int v) {
    if (evaluated[v]) return lb[v];
    // Reuse a cached superset distribution when a neighbor has one.
    double value;
    VarSet s = lat.nodes()[v].set;
    if (cache) {
      value = cache->evi(ctx, s, m);
    } else if (s.empty()) {
      value = 0.0;
    } else {
      std::shared_ptr<const Factor> joint;
      for (int up : lat.nodes()[v].supersets) {
        const auto& sup = lat.nodes()[up];
        if (sup.cached_joint && s.subset_of(sup.set)) {
          Factor f = *sup.cached_joint;
          for (int drop : (sup.set - s).to_vector())
            f = marginal_from_superset(f, drop, net);
          joint = std::make_shared<const Factor>(std::move(f));
          break;
        }
      }
      if (!joint) joint = std::make_shared<const Factor>(ctx.joint_over(s));
      lat.nodes()[v].cached_joint = joint;
      value = evi_from_joint(ctx, *joint, m);
    }
    evaluated[v] = 1;
    ++report.exact_evaluations;
    lb[v] = ub[v] = value;
    for (int a : lat.ancestors_of(v)) lb[a] = std::max(lb[a], value);
    for (int d : lat.descendants_of(v)) ub[d] = std::min(ub[d], value);
    return value;
  };

  // Seed from the Markov-blanket root: it carries the highest EVI in the
  // whole lattice, so its value caps every other node.
  VarSet mb = (net.markov_blanket(net.class_var()) - lat.evidence_vars());
  int mb_node = lat.find(mb);
  if (mb_node >= 0) {
    double top = evaluate(mb_node);
    for (int v = 0; v < n; ++v) ub[v] = std::min(ub[v], top);
  } else {
    for (int r : lat.roots()) evaluate(r);
  }
  for (int l : lat.leaves()) evaluate(l);

  auto resolved = [&](int v) { return ub[v] - lb[v] <= kMoneyTol; };
  while (true) {
    std::vector<char> done(n, 0);
    bool all = true;
    for (int v = 0; v < n; ++v) {
      done[v] = resolved(v) ? 1 : 0;
      all = all && done[v];
    }
    if (all) break;
    int v = pick_midpoint(lat, done);
    if (v < 0) break;
    evaluate(v);
  }

  for (int v = 0; v < n; ++v) {
    report.evi[v] = evaluated[v] ? lb[v] : 0.5 * (lb[v] + ub[v]);
    report.bounds[v] = EviBounds{lb[v], ub[v], true};
    lat.nodes()[v].lb = lb[v];
    lat.nodes()[v].ub = ub[v];
    lat.nodes()[v].exact = true;
  }
  return report;
}

std::vector<std::pair<int, int>> augment_dominance_edges(Lattice& lat,
                                                         const DiscreteNetwork& net) {
  std::vector<std::pair<int, int>> added;
  VarSet y = VarSet::single(net.class_var());
  for (int i = 0; i < lat.size(); ++i) {
    for (int j = 0; j < lat.size(); ++j) {
      if (i == j) continue;
      VarSet s1 = lat.nodes()[i].set;
      VarSet rest = lat.nodes()[j].set - s1;
      if (rest.empty()) continue;  // subset relation already carries the bound
      if (lat.reachable(i, j)) continue;
      if (!net.d_separated(y, rest, s1 | lat.evidence_vars())) continue;
      if (lat.reachable(j, i)) continue;  // equal EVI both ways; keep the DAG
      lat.add_edge(i, j);
      added.emplace_back(i, j);
    }
  }
  return added;
}

BestSet best_set(const Lattice& lat, const ValuationReport& report,
                 const AcquisitionCostModel& costs, const AcquisitionHistory& history) {
  BestSet best;
  for (int v = 0; v < lat.size(); ++v) {
    VarSet s = lat.nodes()[v].set;
    double b = report.evi[v] - costs.set_cost(s, history);
    bool better = false;
    if (best.node < 0 || b > best.benefit + kMoneyTol) {
      better = true;
    } else if (b > best.benefit - kMoneyTol) {
      if (s.count() < best.set.count()) better = true;
      else if (s.count() == best.set.count() && s.canonical_less(best.set)) better = true;
    }
    if (better) {
      best.node = v;
      best.set = s;
      best.benefit = b;
    }
  }
  return best;
}

}  // namespace voi
