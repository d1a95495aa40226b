#include "voi/lattice.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace voi {

namespace {

// Undirected adjacency with edge direction kept for collider detection.
struct Adjacency {
  std::vector<std::vector<int>> neighbors;
  explicit Adjacency(const DiscreteNetwork& net) : neighbors(net.num_vars()) {
    for (int v = 0; v < net.num_vars(); ++v)
      for (int p : net.parents(v)) {
        neighbors[v].push_back(p);
        neighbors[p].push_back(v);
      }
    for (auto& ns : neighbors) {
      std::sort(ns.begin(), ns.end());
      ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    }
  }
};

bool is_parent(const DiscreteNetwork& net, int p, int c) {
  const auto& ps = net.parents(c);
  return std::find(ps.begin(), ps.end(), p) != ps.end();
}

void enumerate_paths(const DiscreteNetwork& net, const Adjacency& adj, int target,
                     std::vector<int>& path, VarSet on_path, long& count,
                     DependencyConstraint& out) {
  int v = path.back();
  if (v == target) {
    if (++count > kMaxPathTerms)
      throw ValidationError("path enumeration exceeded the 1e6 cap");
    PathTerm term;
    for (size_t t = 1; t + 1 < path.size(); ++t) {
      int mid = path[t];
      bool collider = is_parent(net, path[t - 1], mid) && is_parent(net, path[t + 1], mid);
      if (!collider) {
        term.forbidden.add(mid);
      } else {
        VarSet clause = net.descendants(mid);
        clause.add(mid);
        clause.remove(net.class_var());  // the class is never acquired
        term.positivity.push_back(clause);
      }
    }
    out.terms.push_back(std::move(term));
    return;
  }
  for (int n : adj.neighbors[v]) {
    if (on_path.contains(n)) continue;
    path.push_back(n);
    on_path.add(n);
    enumerate_paths(net, adj, target, path, on_path, count, out);
    on_path.remove(n);
    path.pop_back();
  }
}

}  // namespace

DependencyConstraint dependency_constraint(const DiscreteNetwork& net, int xi) {
  if (xi == net.class_var())
    throw ValidationError("dependency constraint queried for the class variable");
  Adjacency adj(net);
  DependencyConstraint out;
  std::vector<int> path{net.class_var()};
  VarSet on_path = VarSet::single(net.class_var());
  long count = 0;
  enumerate_paths(net, adj, xi, path, on_path, count, out);
  return out;
}

ConstraintSet::ConstraintSet(const DiscreteNetwork& net) : net_(&net) {
  constraints_.resize(net.num_vars());
  for (int f : net.features().to_vector())
    constraints_[f] = dependency_constraint(net, f);
}

bool ConstraintSet::member_dependent(int xi, VarSet included) const {
  // Evaluate under the conditioning set included \ {xi}: the member being
  // tested cannot block or activate its own paths.
  VarSet cond = included - VarSet::single(xi);
  for (const PathTerm& term : constraints_[xi].terms) {
    if (term.forbidden.intersects(cond)) continue;
    bool ok = true;
    for (const VarSet& clause : term.positivity)
      if (!clause.intersects(cond)) { ok = false; break; }
    if (ok) return true;
  }
  return false;
}

bool ConstraintSet::is_irreducible(VarSet s, VarSet e) const {
  if (s.intersects(e)) throw ValidationError("set overlaps evidence");
  VarSet included = s | e;
  for (int xi : s.to_vector())
    if (!member_dependent(xi, included)) return false;
  return true;
}

bool ConstraintSet::is_potentially_irreducible(VarSet s, VarSet e, VarSet remaining) const {
  if (is_irreducible(s, e)) return false;
  VarSet included = s | e;
  VarSet reachable_true = included | remaining;
  for (int xi : s.to_vector()) {
    VarSet cond = included - VarSet::single(xi);
    VarSet pos = reachable_true - VarSet::single(xi);
    bool any = false;
    for (const PathTerm& term : constraints_[xi].terms) {
      if (term.forbidden.intersects(cond)) continue;
      bool ok = true;
      for (const VarSet& clause : term.positivity)
        if (!clause.intersects(pos)) { ok = false; break; }
      if (ok) { any = true; break; }
    }
    if (!any) return false;
  }
  return true;
}

Ordering choose_ordering(const ConstraintSet& constraints, VarSet candidates) {
  // Precedence: every positivity-clause member should come before the
  // feature whose constraint carries the clause.
  int n = constraints.net().num_vars();
  std::vector<VarSet> before(n);  // before[f] = vars that must precede f
  for (int f : candidates.to_vector())
    for (const PathTerm& term : constraints.of(f).terms)
      for (const VarSet& clause : term.positivity)
        before[f] |= (clause & candidates) - VarSet::single(f);

  Ordering out;
  out.perfect = true;
  VarSet placed;
  VarSet left = candidates;
  while (!left.empty()) {
    int pick = -1;
    for (int f : left.to_vector())
      if (before[f].subset_of(placed)) { pick = f; break; }
    if (pick < 0) {
      // Cycle among positivity constraints: fall back to the candidate with
      // the fewest unsatisfied predecessors.
      out.perfect = false;
      int best_missing = -1;
      for (int f : left.to_vector()) {
        int missing = (before[f] - placed).count();
        if (pick < 0 || missing < best_missing) {
          pick = f;
          best_missing = missing;
        }
      }
    }
    out.order.push_back(pick);
    placed.add(pick);
    left.remove(pick);
  }
  return out;
}

Ordering choose_ordering(const DiscreteNetwork& net) {
  ConstraintSet cs(net);
  return choose_ordering(cs, net.features());
}

int Lattice::find(VarSet s) const {
  for (int i = 0; i < size(); ++i)
    if (nodes_[i].set == s) return i;
  return -1;
}

int Lattice::add_node(VarSet s) {
  nodes_.push_back(LatticeNode{s});
  return size() - 1;
}

void Lattice::add_edge(int superset, int subset) {
  nodes_[superset].subsets.push_back(subset);
  nodes_[subset].supersets.push_back(superset);
}

bool Lattice::has_edge(int superset, int subset) const {
  const auto& subs = nodes_[superset].subsets;
  return std::find(subs.begin(), subs.end(), subset) != subs.end();
}

bool Lattice::reachable(int from, int to) const {
  if (from == to) return true;
  std::vector<char> seen(size(), 0);
  std::deque<int> q{from};
  seen[from] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    for (int s : nodes_[v].subsets) {
      if (s == to) return true;
      if (!seen[s]) {
        seen[s] = 1;
        q.push_back(s);
      }
    }
  }
  return false;
}

std::vector<int> Lattice::roots() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (nodes_[i].supersets.empty()) out.push_back(i);
  return out;
}

std::vector<int> Lattice::leaves() const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (nodes_[i].subsets.empty()) out.push_back(i);
  return out;
}

namespace {

std::vector<int> closure(const Lattice& lat, int node, bool down) {
  std::vector<char> seen(lat.size(), 0);
  std::deque<int> q{node};
  seen[node] = 1;
  std::vector<int> out;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    const auto& next = down ? lat.nodes()[v].subsets : lat.nodes()[v].supersets;
    for (int u : next)
      if (!seen[u]) {
        seen[u] = 1;
        out.push_back(u);
        q.push_back(u);
      }
  }
  return out;
}

}  // namespace

std::vector<int> Lattice::descendants_of(int node) const { return closure(*this, node, true); }
std::vector<int> Lattice::ancestors_of(int node) const { return closure(*this, node, false); }

Lattice build_lattice(const DiscreteNetwork& net, VarSet evidence) {
  ConstraintSet cs(net);
  return build_lattice(cs, evidence);
}

Lattice build_lattice(const ConstraintSet& constraints, VarSet evidence) {
  const DiscreteNetwork& net = constraints.net();
  VarSet candidates = net.features() - evidence;
  Ordering ordering = choose_ordering(constraints, candidates);

  std::vector<VarSet> irreducible{VarSet()};
  std::vector<VarSet> potential;
  long ps_seen = 0;
  for (size_t j = 0; j < ordering.order.size(); ++j) {
    int xj = ordering.order[j];
    VarSet remaining;
    for (size_t k = j + 1; k < ordering.order.size(); ++k)
      remaining.add(ordering.order[k]);

    size_t n_irr = irreducible.size(), n_pot = potential.size();
    auto consider = [&](VarSet base) {
      VarSet grown = base;
      grown.add(xj);
      if (constraints.is_irreducible(grown, evidence)) {
        irreducible.push_back(grown);
      } else if (constraints.is_potentially_irreducible(grown, evidence, remaining)) {
        potential.push_back(grown);
        ++ps_seen;
      }
    };
    for (size_t i = 0; i < n_irr; ++i) consider(irreducible[i]);
    for (size_t i = 0; i < n_pot; ++i) consider(potential[i]);

    // Drop sets that can no longer become irreducible now that xj is done.
    std::erase_if(potential, [&](VarSet s) {
      return !constraints.is_potentially_irreducible(s, evidence, remaining);
    });
  }

  std::sort(irreducible.begin(), irreducible.end(),
            [](VarSet a, VarSet b) { return a.canonical_less(b); });

  Lattice lat;
  lat.set_evidence(evidence);
  lat.ordering = ordering;
  lat.potentially_irreducible_seen = ps_seen;
  for (VarSet s : irreducible) lat.add_node(s);

  // Edges to maximal proper irreducible subsets.  Nodes are sorted by size,
  // so scanning backwards visits larger candidates first.
  std::vector<std::vector<int>> by_size(net.num_vars() + 1);
  for (int i = 0; i < lat.size(); ++i) by_size[lat.nodes()[i].set.count()].push_back(i);
  for (int i = 0; i < lat.size(); ++i) {
    VarSet s = lat.nodes()[i].set;
    int k = s.count();
    std::vector<VarSet> maximal;
    for (int size = k - 1; size >= 0; --size) {
      for (int j : by_size[size]) {
        VarSet t = lat.nodes()[j].set;
        if (!t.subset_of(s)) continue;
        bool covered = false;
        for (VarSet m : maximal)
          if (t.subset_of(m)) { covered = true; break; }
        if (!covered) {
          lat.add_edge(i, j);
          maximal.push_back(t);
        }
      }
    }
  }
  return lat;
}

std::vector<VarSet> enumerate_irreducible_bruteforce(const DiscreteNetwork& net, VarSet evidence) {
  std::vector<int> candidates = (net.features() - evidence).to_vector();
  if (candidates.size() > 20)
    throw ValidationError("brute-force enumeration limited to 20 features");
  VarSet y = VarSet::single(net.class_var());
  std::vector<VarSet> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << candidates.size()); ++mask) {
    VarSet s;
    for (size_t b = 0; b < candidates.size(); ++b)
      if ((mask >> b) & 1) s.add(candidates[b]);
    bool ok = true;
    for (int xi : s.to_vector()) {
      VarSet given = (s - VarSet::single(xi)) | evidence;
      if (net.d_separated(VarSet::single(xi), y, given)) { ok = false; break; }
    }
    if (ok) out.push_back(s);
  }
  std::sort(out.begin(), out.end(), [](VarSet a, VarSet b) { return a.canonical_less(b); });
  return out;
}

}  // namespace voi
