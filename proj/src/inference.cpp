#include "voi/inference.hpp"

#include <algorithm>
#include <numeric>

namespace voi {

bool Factor::has(int v) const {
  return std::find(vars.begin(), vars.end(), v) != vars.end();
}

int Factor::index_of(int v) const {
  auto it = std::find(vars.begin(), vars.end(), v);
  return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
}

namespace {

long table_size(const std::vector<int>& vars, const DiscreteNetwork& net) {
  long n = 1;
  for (int v : vars) n *= net.arity(v);
  return n;
}

// Strides of each var of `vars` inside a row-major table (last var fastest).
std::vector<long> strides_of(const std::vector<int>& vars, const DiscreteNetwork& net) {
  std::vector<long> s(vars.size());
  long acc = 1;
  for (int i = static_cast<int>(vars.size()) - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= net.arity(vars[i]);
  }
  return s;
}

}  // namespace

Factor factor_multiply(const Factor& a, const Factor& b, const DiscreteNetwork& net) {
  Factor out;
  out.vars = a.vars;
  for (int v : b.vars)
    if (!out.has(v)) out.vars.push_back(v);
  long n = table_size(out.vars, net);
  out.table.assign(n, 0.0);

  auto stride_in = [&](const Factor& f) {
    // Stride of each output var within f (0 if absent).
    std::vector<long> fs = strides_of(f.vars, net);
    std::vector<long> m(out.vars.size(), 0);
    for (size_t i = 0; i < out.vars.size(); ++i) {
      int idx = f.index_of(out.vars[i]);
      if (idx >= 0) m[i] = fs[idx];
    }
    return m;
  };
  std::vector<long> ma = stride_in(a), mb = stride_in(b);
  std::vector<int> digit(out.vars.size(), 0);
  long ia = 0, ib = 0;
  for (long i = 0; i < n; ++i) {
    out.table[i] = a.table[ia] * b.table[ib];
    // Odometer increment over output digits, last var fastest.
    for (int d = static_cast<int>(out.vars.size()) - 1; d >= 0; --d) {
      ia += ma[d];
      ib += mb[d];
      if (++digit[d] < net.arity(out.vars[d])) break;
      ia -= ma[d] * net.arity(out.vars[d]);
      ib -= mb[d] * net.arity(out.vars[d]);
      digit[d] = 0;
    }
  }
  return out;
}

Factor factor_sum_out(const Factor& f, int var, const DiscreteNetwork& net) {
  int pos = f.index_of(var);
  if (pos < 0) return f;
  Factor out;
  out.vars = f.vars;
  out.vars.erase(out.vars.begin() + pos);
  out.table.assign(table_size(out.vars, net), 0.0);
  std::vector<long> fs = strides_of(f.vars, net);
  long vstride = fs[pos];
  int varity = net.arity(var);
  long n = static_cast<long>(f.table.size());
  long inner = vstride;                  // block below var
  long outer_step = vstride * varity;    // block including var
  long o = 0;
  for (long base = 0; base < n; base += outer_step)
    for (long i = 0; i < inner; ++i, ++o) {
      double sum = 0;
      for (int s = 0; s < varity; ++s) sum += f.table[base + i + s * vstride];
      out.table[o] = sum;
    }
  return out;
}

Factor factor_restrict(const Factor& f, int var, int state, const DiscreteNetwork& net) {
  int pos = f.index_of(var);
  if (pos < 0) return f;
  Factor out;
  out.vars = f.vars;
  out.vars.erase(out.vars.begin() + pos);
  out.table.reserve(table_size(out.vars, net));
  std::vector<long> fs = strides_of(f.vars, net);
  long vstride = fs[pos];
  int varity = net.arity(var);
  long n = static_cast<long>(f.table.size());
  long outer_step = vstride * varity;
  for (long base = 0; base < n; base += outer_step)
    for (long i = 0; i < vstride; ++i)
      out.table.push_back(f.table[base + i + state * vstride]);
  return out;
}

Factor marginal_from_superset(const Factor& superset, int drop, const DiscreteNetwork& net) {
  return factor_sum_out(superset, drop, net);
}

namespace {

// Reorder factor variables ascending by id.
Factor factor_canonical(const Factor& f, const DiscreteNetwork& net) {
  std::vector<int> sorted = f.vars;
  std::sort(sorted.begin(), sorted.end());
  if (sorted == f.vars) return f;
  Factor out;
  out.vars = sorted;
  long n = static_cast<long>(f.table.size());
  out.table.assign(n, 0.0);
  std::vector<long> fs = strides_of(f.vars, net);
  std::vector<long> os = strides_of(out.vars, net);
  // Map: for each var of f, its stride in out.
  std::vector<long> m(f.vars.size());
  for (size_t i = 0; i < f.vars.size(); ++i)
    m[i] = os[std::find(sorted.begin(), sorted.end(), f.vars[i]) - sorted.begin()];
  std::vector<int> digit(f.vars.size(), 0);
  long oi = 0;
  for (long i = 0; i < n; ++i) {
    out.table[oi] = f.table[i];
    for (int d = static_cast<int>(f.vars.size()) - 1; d >= 0; --d) {
      oi += m[d];
      if (++digit[d] < net.arity(f.vars[d])) break;
      oi -= m[d] * net.arity(f.vars[d]);
      digit[d] = 0;
    }
  }
  return out;
}

}  // namespace

InferenceContext::InferenceContext(const DiscreteNetwork& net)
    : InferenceContext(net, Assignment(net.num_vars())) {}

InferenceContext::InferenceContext(const DiscreteNetwork& net, const Assignment& evidence)
    : net_(&net), evidence_(evidence) {
  factors_.reserve(net.num_vars());
  for (int v = 0; v < net.num_vars(); ++v) {
    Factor f;
    f.vars = net.parents(v);
    f.vars.push_back(v);
    f.table = net.cpt(v);
    for (int ev : evidence.vars().to_vector())
      if (f.has(ev)) f = factor_restrict(f, ev, evidence.state(ev), net);
    factors_.push_back(std::make_shared<const Factor>(std::move(f)));
  }
  evidence_prob_ = eliminate_to(VarSet(), factors_).table[0];
  if (evidence.empty()) evidence_prob_ = 1.0;
  if (evidence_prob_ <= 0.0) throw ZeroProbabilityEvidence();
}

InferenceContext::InferenceContext(const DiscreteNetwork& net, Assignment evidence,
                                   std::vector<std::shared_ptr<const Factor>> factors)
    : net_(&net), evidence_(std::move(evidence)), factors_(std::move(factors)) {
  evidence_prob_ = eliminate_to(VarSet(), factors_).table[0];
  if (evidence_.empty()) evidence_prob_ = 1.0;
  if (evidence_prob_ <= 0.0) throw ZeroProbabilityEvidence();
}

InferenceContext InferenceContext::extend(const Assignment& extra) const {
  if (extra.empty()) return *this;
  Assignment merged = evidence_.merged(extra);
  std::vector<std::shared_ptr<const Factor>> factors;
  factors.reserve(factors_.size());
  for (const auto& fp : factors_) {
    bool touched = false;
    for (int v : extra.vars().to_vector())
      if (fp->has(v)) { touched = true; break; }
    if (!touched) {
      factors.push_back(fp);
      continue;
    }
    Factor f = *fp;
    for (int v : extra.vars().to_vector())
      if (f.has(v)) f = factor_restrict(f, v, extra.state(v), *net_);
    factors.push_back(std::make_shared<const Factor>(std::move(f)));
  }
  return InferenceContext(*net_, std::move(merged), std::move(factors));
}

Factor InferenceContext::eliminate_to(
    VarSet keep, const std::vector<std::shared_ptr<const Factor>>& factors) const {
  std::vector<Factor> work;
  VarSet present;
  for (const auto& fp : factors) {
    work.push_back(*fp);
    for (int v : fp->vars) present.add(v);
  }
  VarSet to_eliminate = present - keep;
  while (!to_eliminate.empty()) {
    // Min-weight greedy: eliminate the variable whose merged factor is
    // smallest; ties broken by id for determinism.
    int best = -1;
    long best_weight = 0;
    for (int v : to_eliminate.to_vector()) {
      VarSet merged;
      for (const auto& f : work)
        if (f.has(v))
          for (int u : f.vars) merged.add(u);
      long w = 1;
      for (int u : merged.to_vector()) w *= net_->arity(u);
      if (best < 0 || w < best_weight) {
        best = v;
        best_weight = w;
      }
    }
    Factor prod;
    prod.vars = {};
    prod.table = {1.0};
    std::vector<Factor> rest;
    for (auto& f : work) {
      if (f.has(best))
        prod = factor_multiply(prod, f, *net_);
      else
        rest.push_back(std::move(f));
    }
    rest.push_back(factor_sum_out(prod, best, *net_));
    work = std::move(rest);
    to_eliminate.remove(best);
  }
  Factor result;
  result.vars = {};
  result.table = {1.0};
  for (const auto& f : work) result = factor_multiply(result, f, *net_);
  return factor_canonical(result, *net_);
}

std::vector<double> InferenceContext::posterior(int target) const {
  if (evidence_.has(target)) throw ValidationError("posterior target is already observed");
  Factor f = eliminate_to(VarSet::single(target), factors_);
  double sum = std::accumulate(f.table.begin(), f.table.end(), 0.0);
  if (sum <= 0.0) throw ZeroProbabilityEvidence();
  for (double& x : f.table) x /= sum;
  return f.table;
}

double InferenceContext::joint_probability(const Assignment& s) const {
  if (s.empty()) return 1.0;
  if (s.vars().intersects(evidence_.vars()))
    throw ValidationError("query assignment overlaps evidence");
  std::vector<std::shared_ptr<const Factor>> restricted;
  restricted.reserve(factors_.size());
  for (const auto& fp : factors_) {
    bool touched = false;
    for (int v : s.vars().to_vector())
      if (fp->has(v)) { touched = true; break; }
    if (!touched) {
      restricted.push_back(fp);
      continue;
    }
    Factor f = *fp;
    for (int v : s.vars().to_vector())
      if (f.has(v)) f = factor_restrict(f, v, s.state(v), *net_);
    restricted.push_back(std::make_shared<const Factor>(std::move(f)));
  }
  double joint = eliminate_to(VarSet(), restricted).table[0];
  return joint / evidence_prob_;
}

Factor InferenceContext::joint_over(VarSet s) const {
  if (s.intersects(evidence_.vars()))
    throw ValidationError("query set overlaps evidence");
  Factor f = eliminate_to(s, factors_);
  for (double& x : f.table) x /= evidence_prob_;
  return f;
}

}  // namespace voi
