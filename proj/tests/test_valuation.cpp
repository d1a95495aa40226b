#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "voi/harness.hpp"
#include "voi/valuation.hpp"

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

}  // namespace

TEST_CASE("two-feature network value-of-information golden numbers") {
  DiscreteNetwork net = load("two_feature_network.json");
  InferenceContext ctx(net);
  MisclassificationMatrix m = MisclassificationMatrix::symmetric(2, 50.0);

  CHECK(emc(ctx.posterior(net.class_var()), m).cost == doctest::Approx(17.6).epsilon(1e-12));
  CHECK(evi_set(ctx, named(net, {"X1"}), m) == doctest::Approx(1.2).epsilon(1e-9));
  CHECK(evi_set(ctx, named(net, {"X2"}), m) == doctest::Approx(0.0).scale(1).epsilon(1e-9));
  CHECK(evi_set(ctx, named(net, {"X1", "X2"}), m) == doctest::Approx(5.4).epsilon(1e-9));

  // Same numbers through the independent joint-table oracle.
  Assignment none(net.num_vars());
  CHECK(oracle::evi(net, none, named(net, {"X1"}), m) == doctest::Approx(1.2).epsilon(1e-9));
  CHECK(oracle::evi(net, none, named(net, {"X1", "X2"}), m) ==
        doctest::Approx(5.4).epsilon(1e-9));

  AcquisitionCostModel costs = AcquisitionCostModel::from_json_file(
      std::string(VOI_DATA_DIR) + "/two_feature_costs.json", net);
  CHECK(benefit_set(ctx, named(net, {"X1", "X2"}), m, costs, AcquisitionHistory{}) ==
        doctest::Approx(5.4 - 15.0).epsilon(1e-9));
  CHECK(benefit_single(ctx, net.var_by_name("X1"), m, costs, AcquisitionHistory{}) ==
        doctest::Approx(1.2 - 5.0).epsilon(1e-9));
}

TEST_CASE("bound-sharing sweep equals naive per-node computation") {
  for (int trial = 0; trial < 15; ++trial) {
    DiscreteNetwork net = generate_random_network(3 + trial % 5, 0.5, 900 + trial);
    InferenceContext ctx(net);
    MisclassificationMatrix m = MisclassificationMatrix::symmetric(2, 40.0 + trial);
    Lattice lat = build_lattice(net, VarSet{});
    ValuationReport rep = sweep_evi(lat, ctx, m);
    CHECK(rep.exact_evaluations <= lat.size());
    for (int i = 0; i < lat.size(); ++i) {
      double naive = evi_set(ctx, lat.nodes()[i].set, m);
      CHECK(rep.evi[i] == doctest::Approx(naive).scale(1).epsilon(1e-9));
      CHECK(lat.nodes()[i].lb <= naive + 1e-9);
      CHECK(lat.nodes()[i].ub >= naive - 1e-9);
    }
  }
}

TEST_CASE("value of information grows along lattice edges") {
  for (int trial = 0; trial < 8; ++trial) {
    DiscreteNetwork net = generate_random_network(5, 0.6, 1700 + trial);
    InferenceContext ctx(net);
    MisclassificationMatrix m = MisclassificationMatrix::symmetric(2, 75.0);
    Lattice lat = build_lattice(net, VarSet{});
    ValuationReport rep = sweep_evi(lat, ctx, m);
    for (int i = 0; i < lat.size(); ++i)
      for (int j : lat.nodes()[i].subsets)
        CHECK(rep.evi[i] >= rep.evi[j] - 1e-9);
  }
}

TEST_CASE("conditional independence makes supersets worthless") {
  // An added edge certifies the superset brings nothing beyond the subset.
  DiscreteNetwork net = load("collider_network.json");
  InferenceContext ctx(net);
  MisclassificationMatrix m = MisclassificationMatrix::symmetric(2, 60.0);
  Lattice lat = build_lattice(net, VarSet{});
  ValuationReport rep = sweep_evi(lat, ctx, m);

  int x1 = lat.find(named(net, {"X1"}));
  int x2 = lat.find(named(net, {"X2"}));
  CHECK(!lat.has_edge(x1, x2));
  auto added = augment_dominance_edges(lat, net);
  CHECK(lat.has_edge(x1, x2));  // X1 screens the class off from X2
  for (auto [i, j] : added) CHECK(rep.evi[i] >= rep.evi[j] - 1e-9);
}

TEST_CASE("reducible sets inherit the value of an irreducible subset") {
  for (int trial = 0; trial < 6; ++trial) {
    DiscreteNetwork net = generate_random_network(5, 0.5, 2500 + trial);
    InferenceContext ctx(net);
    MisclassificationMatrix m = MisclassificationMatrix::symmetric(2, 55.0);
    Lattice lat = build_lattice(net, VarSet{});

    auto feats = net.features().to_vector();
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << feats.size()); ++mask) {
      VarSet s;
      for (size_t b = 0; b < feats.size(); ++b)
        if ((mask >> b) & 1) s.add(feats[b]);
      if (lat.find(s) >= 0) continue;  // irreducible, nothing to check
      double direct = evi_set(ctx, s, m);
      double best_sub = 0;
      for (const auto& node : lat.nodes())
        if (node.set.subset_of(s)) best_sub = std::max(best_sub, evi_set(ctx, node.set, m));
      CHECK(direct == doctest::Approx(best_sub).scale(1).epsilon(1e-9));
    }
  }
}

TEST_CASE("cached values scale with the matrix") {
  DiscreteNetwork net = load("two_feature_network.json");
  InferenceContext ctx(net);
  MisclassificationMatrix unit = MisclassificationMatrix::symmetric(2, 1.0);
  EviCache cache(unit);
  VarSet s = named(net, {"X1", "X2"});

  CHECK(cache.scale_of(unit.scaled(123.0)).value() == doctest::Approx(123.0));
  CHECK(!cache.scale_of(MisclassificationMatrix(2, {0.0, 3.0, 4.0, 0.0})).has_value());

  double at200 = cache.evi(ctx, s, unit.scaled(200.0));
  CHECK(at200 == doctest::Approx(evi_set(ctx, s, unit.scaled(200.0))).epsilon(1e-9));
  // Second query hits the memo and still scales correctly.
  CHECK(cache.evi(ctx, s, unit.scaled(400.0)) == doctest::Approx(2 * at200).epsilon(1e-9));
  // Non-multiple matrices fall back to direct computation.
  MisclassificationMatrix odd(2, {0.0, 3.0, 4.0, 0.0});
  CHECK(cache.evi(ctx, s, odd) == doctest::Approx(evi_set(ctx, s, odd)).epsilon(1e-9));
}

TEST_CASE("best set prefers value, then smaller sets") {
  DiscreteNetwork net = load("two_feature_network.json");
  InferenceContext ctx(net);
  MisclassificationMatrix m = MisclassificationMatrix::symmetric(2, 200.0);
  AcquisitionCostModel costs = AcquisitionCostModel::from_json_file(
      std::string(VOI_DATA_DIR) + "/two_feature_costs.json", net);
  Lattice lat = build_lattice(net, VarSet{});
  ValuationReport rep = sweep_evi(lat, ctx, m);
  BestSet best = best_set(lat, rep, costs, AcquisitionHistory{});
  CHECK(best.set == named(net, {"X1", "X2"}));
  CHECK(best.benefit == doctest::Approx(21.6 - 15.0).epsilon(1e-9));

  // At c=50 every acquisition loses money, so the empty set wins at 0.
  MisclassificationMatrix small = MisclassificationMatrix::symmetric(2, 50.0);
  ValuationReport rep2 = sweep_evi(lat, ctx, small);
  BestSet stay = best_set(lat, rep2, costs, AcquisitionHistory{});
  CHECK(stay.set.empty());
  CHECK(stay.benefit == doctest::Approx(0.0).scale(1).epsilon(1e-12));
}
