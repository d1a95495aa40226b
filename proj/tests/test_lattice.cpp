#include <algorithm>

#include "doctest.h"
#include "voi/harness.hpp"
#include "voi/lattice.hpp"

using namespace voi;

namespace {

DiscreteNetwork load(const char* name) {
  return DiscreteNetwork::from_json_file(std::string(VOI_DATA_DIR) + "/" + name);
}

VarSet named(const DiscreteNetwork& net, std::initializer_list<const char*> names) {
  VarSet s;
  for (const char* n : names) s.add(net.var_by_name(n));
  return s;
}

// Naive Bayes: the class points at every feature.
DiscreteNetwork naive_bayes(int n_features) {
  std::vector<Variable> vars(n_features + 1);
  std::vector<std::vector<int>> parents(n_features + 1);
  std::vector<std::vector<double>> cpt(n_features + 1);
  vars[0] = {0, "Y", {"T", "F"}};
  cpt[0] = {0.5, 0.5};
  for (int f = 1; f <= n_features; ++f) {
    vars[f] = {f, "X" + std::to_string(f), {"T", "F"}};
    parents[f] = {0};
    double p = 0.5 + 0.3 * f / n_features;
    cpt[f] = {p, 1 - p, 1 - p, p};
  }
  return DiscreteNetwork(std::move(vars), std::move(parents), std::move(cpt), 0);
}

// Y -> X1 -> X2 -> ... -> Xn
DiscreteNetwork chain(int n_features) {
  std::vector<Variable> vars(n_features + 1);
  std::vector<std::vector<int>> parents(n_features + 1);
  std::vector<std::vector<double>> cpt(n_features + 1);
  vars[0] = {0, "Y", {"T", "F"}};
  cpt[0] = {0.5, 0.5};
  for (int f = 1; f <= n_features; ++f) {
    vars[f] = {f, "X" + std::to_string(f), {"T", "F"}};
    parents[f] = {f - 1};
    cpt[f] = {0.8, 0.2, 0.3, 0.7};
  }
  return DiscreteNetwork(std::move(vars), std::move(parents), std::move(cpt), 0);
}

}  // namespace

TEST_CASE("dependency constraints on the collider network") {
  DiscreteNetwork net = load("collider_network.json");
  ConstraintSet cs(net);
  int x1 = net.var_by_name("X1"), x2 = net.var_by_name("X2");
  int x3 = net.var_by_name("X3"), x4 = net.var_by_name("X4");

  // X4 only reaches the class through the collider X3.
  CHECK(!cs.member_dependent(x4, VarSet::single(x4)));
  CHECK(cs.member_dependent(x4, VarSet::single(x4) | VarSet::single(x3)));

  // X2 reaches it through X1, which must stay unobserved.
  CHECK(cs.member_dependent(x2, VarSet::single(x2)));
  CHECK(!cs.member_dependent(x2, VarSet::single(x2) | VarSet::single(x1)));

  CHECK(cs.is_irreducible(VarSet{}, VarSet{}));
  CHECK(cs.is_irreducible(named(net, {"X3", "X4"}), VarSet{}));
  CHECK(!cs.is_irreducible(named(net, {"X4"}), VarSet{}));
  CHECK(!cs.is_irreducible(named(net, {"X1", "X2"}), VarSet{}));

  // {X4} can still grow into an irreducible set while X3 is in play.
  CHECK(cs.is_potentially_irreducible(VarSet::single(x4), VarSet{}, VarSet::single(x3)));
  CHECK(!cs.is_potentially_irreducible(VarSet::single(x4), VarSet{}, VarSet{}));
}

TEST_CASE("collider network lattice has the expected nine nodes") {
  DiscreteNetwork net = load("collider_network.json");
  Lattice lat = build_lattice(net, VarSet{});
  REQUIRE(lat.size() == 9);

  for (auto want : {named(net, {}), named(net, {"X1"}), named(net, {"X2"}),
                    named(net, {"X3"}), named(net, {"X1", "X3"}), named(net, {"X2", "X3"}),
                    named(net, {"X3", "X4"}), named(net, {"X1", "X3", "X4"}),
                    named(net, {"X2", "X3", "X4"})})
    CHECK(lat.find(want) >= 0);

  auto brute = enumerate_irreducible_bruteforce(net, VarSet{});
  REQUIRE(brute.size() == 9);
  for (VarSet s : brute) CHECK(lat.find(s) >= 0);
}

TEST_CASE("lattice edges point to maximal irreducible subsets") {
  DiscreteNetwork net = load("collider_network.json");
  Lattice lat = build_lattice(net, VarSet{});
  int top = lat.find(named(net, {"X1", "X3", "X4"}));
  REQUIRE(top >= 0);
  std::vector<VarSet> subs;
  for (int j : lat.nodes()[top].subsets) subs.push_back(lat.nodes()[j].set);
  // {X1}, {X3} are irreducible subsets but not maximal under {X1,X3}.
  CHECK(std::count(subs.begin(), subs.end(), named(net, {"X1", "X3"})) == 1);
  CHECK(std::count(subs.begin(), subs.end(), named(net, {"X3", "X4"})) == 1);
  CHECK(std::count(subs.begin(), subs.end(), named(net, {"X1"})) == 0);
  CHECK(std::count(subs.begin(), subs.end(), named(net, {"X3"})) == 0);

  int empty = lat.find(VarSet{});
  CHECK(lat.nodes()[empty].subsets.empty());
  for (int r : lat.roots()) CHECK(lat.nodes()[r].set.count() >= 2);
  CHECK(lat.reachable(top, empty));
}

TEST_CASE("structural counting laws") {
  SUBCASE("naive Bayes keeps every subset") {
    DiscreteNetwork net = naive_bayes(10);
    Lattice lat = build_lattice(net, VarSet{});
    CHECK(lat.size() == 1024);
    CHECK(lat.ordering.perfect);
    CHECK(lat.potentially_irreducible_seen == 0);
  }
  SUBCASE("a chain keeps only singletons") {
    DiscreteNetwork net = chain(10);
    Lattice lat = build_lattice(net, VarSet{});
    CHECK(lat.size() == 11);
  }
}

TEST_CASE("two-feature network lattice") {
  DiscreteNetwork net = load("two_feature_network.json");
  Lattice lat = build_lattice(net, VarSet{});
  REQUIRE(lat.size() == 4);
  CHECK(lat.find(VarSet{}) >= 0);
  CHECK(lat.find(named(net, {"X1"})) >= 0);
  CHECK(lat.find(named(net, {"X2"})) >= 0);
  CHECK(lat.find(named(net, {"X1", "X2"})) >= 0);
}

TEST_CASE("evidence shrinks the candidate pool") {
  DiscreteNetwork net = load("collider_network.json");
  VarSet e = named(net, {"X1"});
  Lattice lat = build_lattice(net, e);
  auto brute = enumerate_irreducible_bruteforce(net, e);
  REQUIRE(lat.size() == static_cast<int>(brute.size()));
  for (VarSet s : brute) CHECK(lat.find(s) >= 0);
  for (const auto& node : lat.nodes()) CHECK(!node.set.intersects(e));
}

TEST_CASE("construction matches brute force on random networks") {
  for (int trial = 0; trial < 25; ++trial) {
    int n = 3 + trial % 6;
    DiscreteNetwork net = generate_random_network(n, 0.5, 500 + trial);
    VarSet evidence;
    if (trial % 3 == 0) evidence.add(net.features().to_vector()[trial % n]);
    Lattice lat = build_lattice(net, evidence);
    auto brute = enumerate_irreducible_bruteforce(net, evidence);
    REQUIRE(lat.size() == static_cast<int>(brute.size()));
    for (VarSet s : brute) CHECK(lat.find(s) >= 0);
  }
}

TEST_CASE("ordering places positivity satisfiers first when possible") {
  DiscreteNetwork net = load("collider_network.json");
  ConstraintSet cs(net);
  Ordering ord = choose_ordering(cs, net.features());
  CHECK(ord.perfect);
  auto pos = [&](const char* name) {
    int v = net.var_by_name(name);
    return std::find(ord.order.begin(), ord.order.end(), v) - ord.order.begin();
  };
  CHECK(pos("X3") < pos("X4"));  // X4's positivity clause is satisfied by X3

  // With the collider built, zero potentially-irreducible sets are stored.
  Lattice lat = build_lattice(cs, VarSet{});
  CHECK(lat.potentially_irreducible_seen == 0);
}
