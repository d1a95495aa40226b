#include "voi/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace voi {

DiscreteNetwork::DiscreteNetwork(std::vector<Variable> variables,
                                 std::vector<std::vector<int>> parents,
                                 std::vector<std::vector<double>> cpt,
                                 int class_var)
    : vars_(std::move(variables)),
      parents_(std::move(parents)),
      cpt_(std::move(cpt)),
      class_var_(class_var) {
  children_.resize(vars_.size());
  for (int v = 0; v < num_vars(); ++v)
    for (int p : parents_[v]) {
      if (p < 0 || p >= num_vars()) throw ValidationError("parent id out of range");
      children_[p].push_back(v);
    }
  validate();
  for (int v = 0; v < num_vars(); ++v)
    if (v != class_var_) features_.add(v);
}

void DiscreteNetwork::validate() {
  if (vars_.empty()) throw ValidationError("network has no variables");
  if (num_vars() > 64) throw ValidationError("at most 64 variables supported");
  if (class_var_ < 0 || class_var_ >= num_vars())
    throw ValidationError("missing class variable designation");
  for (int v = 0; v < num_vars(); ++v) {
    const Variable& var = vars_[v];
    if (var.id != v) throw ValidationError("variable ids must be dense 0..n");
    if (var.arity() < 2)
      throw ValidationError("variable '" + var.name + "' needs at least 2 states");
    for (size_t i = 0; i < var.states.size(); ++i)
      for (size_t j = i + 1; j < var.states.size(); ++j)
        if (var.states[i] == var.states[j])
          throw ValidationError("duplicate state label in '" + var.name + "'");
  }
  for (int v = 0; v < num_vars(); ++v)
    for (int u = v + 1; u < num_vars(); ++u)
      if (vars_[v].name == vars_[u].name)
        throw ValidationError("duplicate variable name '" + vars_[v].name + "'");
  // Topological sort doubles as the cycle check.
  std::vector<int> indeg(num_vars(), 0);
  for (int v = 0; v < num_vars(); ++v) indeg[v] = static_cast<int>(parents_[v].size());
  std::deque<int> q;
  for (int v = 0; v < num_vars(); ++v)
    if (indeg[v] == 0) q.push_back(v);
  std::vector<int> topo;
  while (!q.empty()) {
    int v = q.front();
    q.pop_front();
    topo.push_back(v);
    for (int c : children_[v])
      if (--indeg[c] == 0) q.push_back(c);
  }
  if (static_cast<int>(topo.size()) != num_vars())
    throw ValidationError("cycle detected in network structure");
  topo_ = std::move(topo);

  for (int v = 0; v < num_vars(); ++v) {
    long rows = 1;
    for (int p : parents_[v]) rows *= arity(p);
    if (static_cast<long>(cpt_[v].size()) != rows * arity(v))
      throw ValidationError("CPT for '" + vars_[v].name + "' has wrong size");
    for (double x : cpt_[v])
      if (!(x >= 0.0 && x <= 1.0))
        throw ValidationError("CPT probability outside [0,1] in '" + vars_[v].name + "'");
    for (long r = 0; r < rows; ++r) {
      double sum = 0;
      for (int s = 0; s < arity(v); ++s) sum += cpt_[v][r * arity(v) + s];
      if (std::abs(sum - 1.0) > 1e-9)
        throw ValidationError("CPT row not normalized in '" + vars_[v].name + "'");
    }
  }
}

int DiscreteNetwork::var_by_name(const std::string& name) const {
  for (int v = 0; v < num_vars(); ++v)
    if (vars_[v].name == name) return v;
  return -1;
}

int DiscreteNetwork::state_by_name(int v, const std::string& label) const {
  for (int s = 0; s < arity(v); ++s)
    if (vars_[v].states[s] == label) return s;
  return -1;
}

VarSet DiscreteNetwork::descendants(int v) const {
  VarSet out;
  std::deque<int> q{v};
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int c : children_[u])
      if (!out.contains(c)) {
        out.add(c);
        q.push_back(c);
      }
  }
  out.remove(v);
  return out;
}

VarSet DiscreteNetwork::ancestors_of(VarSet s) const {
  VarSet out = s;
  std::deque<int> q;
  for (int v : s.to_vector()) q.push_back(v);
  while (!q.empty()) {
    int u = q.front();
    q.pop_front();
    for (int p : parents_[u])
      if (!out.contains(p)) {
        out.add(p);
        q.push_back(p);
      }
  }
  return out;
}

VarSet DiscreteNetwork::markov_blanket(int target) const {
  VarSet out;
  for (int p : parents_[target]) out.add(p);
  for (int c : children_[target]) {
    out.add(c);
    for (int sp : parents_[c])
      if (sp != target) out.add(sp);
  }
  out.remove(target);
  return out;
}

bool DiscreteNetwork::d_separated(VarSet a, VarSet b, VarSet given) const {
  if (a.intersects(b) || a.intersects(given) || b.intersects(given))
    throw ValidationError("d-separation arguments must be pairwise disjoint");
  // Active-trail reachability over (node, direction) states.  "up" means the
  // trail arrived from a child, "down" from a parent.
  VarSet anc_given = ancestors_of(given);
  std::vector<char> visited(num_vars() * 2, 0);
  std::deque<std::pair<int, int>> q;  // (node, dir): 0 = up, 1 = down
  for (int v : a.to_vector()) q.emplace_back(v, 0);
  while (!q.empty()) {
    auto [v, dir] = q.front();
    q.pop_front();
    if (visited[v * 2 + dir]) continue;
    visited[v * 2 + dir] = 1;
    if (!given.contains(v) && b.contains(v)) return false;
    if (dir == 0) {
      if (!given.contains(v)) {
        for (int p : parents_[v]) q.emplace_back(p, 0);
        for (int c : children_[v]) q.emplace_back(c, 1);
      }
    } else {
      if (!given.contains(v))
        for (int c : children_[v]) q.emplace_back(c, 1);
      // v-structure: continuing upward through v needs v or a descendant
      // of v in the conditioning set.
      if (anc_given.contains(v))
        for (int p : parents_[v]) q.emplace_back(p, 0);
    }
  }
  return true;
}

double DiscreteNetwork::cpt_entry(int v, const Assignment& full) const {
  long row = 0;
  for (int p : parents_[v]) row = row * arity(p) + full.state(p);
  return cpt_[v][row * arity(v) + full.state(v)];
}

namespace {

using nlohmann::json;

DiscreteNetwork parse_network(const json& doc) {
  if (!doc.contains("class")) throw ValidationError("missing class designation");
  if (!doc.contains("variables")) throw ValidationError("missing variables list");
  std::vector<Variable> vars;
  std::vector<std::vector<std::string>> parent_names;
  std::vector<std::vector<double>> cpts;
  for (const auto& jv : doc.at("variables")) {
    Variable v;
    v.id = static_cast<int>(vars.size());
    v.name = jv.at("name").get<std::string>();
    for (const auto& s : jv.at("states")) {
      if (!s.is_string())
        throw ValidationError("continuous or non-categorical states rejected");
      v.states.push_back(s.get<std::string>());
    }
    parent_names.push_back(jv.value("parents", std::vector<std::string>{}));
    std::vector<double> flat;
    for (const auto& row : jv.at("cpt")) {
      if (!row.is_array()) throw ValidationError("cpt must be a list of rows");
      for (const auto& p : row) flat.push_back(p.get<double>());
    }
    cpts.push_back(std::move(flat));
    vars.push_back(std::move(v));
  }
  auto find = [&](const std::string& name) {
    for (size_t i = 0; i < vars.size(); ++i)
      if (vars[i].name == name) return static_cast<int>(i);
    throw ValidationError("unknown variable name '" + name + "'");
  };
  std::vector<std::vector<int>> parents;
  for (const auto& names : parent_names) {
    std::vector<int> ids;
    for (const auto& n : names) {
      try {
        ids.push_back(find(n));
      } catch (const ValidationError&) {
        throw ValidationError("unknown parent name '" + n + "'");
      }
    }
    parents.push_back(std::move(ids));
  }
  int cls = find(doc.at("class").get<std::string>());
  return DiscreteNetwork(std::move(vars), std::move(parents), std::move(cpts), cls);
}

}  // namespace

DiscreteNetwork DiscreteNetwork::from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("network document is not valid JSON: ") + e.what());
  }
  try {
    return parse_network(doc);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed network document: ") + e.what());
  }
}

DiscreteNetwork DiscreteNetwork::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open network file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string DiscreteNetwork::to_json_text() const {
  nlohmann::json doc;
  doc["class"] = vars_[class_var_].name;
  auto& jvars = doc["variables"] = nlohmann::json::array();
  for (int v = 0; v < num_vars(); ++v) {
    nlohmann::json jv;
    jv["name"] = vars_[v].name;
    jv["states"] = vars_[v].states;
    std::vector<std::string> pnames;
    for (int p : parents_[v]) pnames.push_back(vars_[p].name);
    jv["parents"] = pnames;
    auto& rows = jv["cpt"] = nlohmann::json::array();
    long nrows = static_cast<long>(cpt_[v].size()) / arity(v);
    for (long r = 0; r < nrows; ++r) {
      std::vector<double> row(cpt_[v].begin() + r * arity(v),
                              cpt_[v].begin() + (r + 1) * arity(v));
      rows.push_back(row);
    }
    jvars.push_back(std::move(jv));
  }
  return doc.dump(2);
}

}  // namespace voi
