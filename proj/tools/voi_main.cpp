#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "voi/harness.hpp"
#include "voi/lattice.hpp"
#include "voi/policy.hpp"
#include "voi/valuation.hpp"

namespace {

using namespace voi;

Assignment parse_evidence(const DiscreteNetwork& net, const std::string& spec) {
  Assignment a(net.num_vars());
  if (spec.empty()) return a;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos)
      throw ValidationError("evidence must be name=state pairs: '" + item + "'");
    std::string name = item.substr(0, eq), state = item.substr(eq + 1);
    int v = net.var_by_name(name);
    if (v < 0) throw ValidationError("unknown evidence variable '" + name + "'");
    int s = net.state_by_name(v, state);
    if (s < 0) throw ValidationError("unknown state '" + state + "' for '" + name + "'");
    a.set(v, s);
  }
  return a;
}

// --matrix sym:V     constant off-diagonal V
// --matrix cal:sym:T / cal:asym:T   calibrated to prior-EMC target T
MisclassificationMatrix resolve_matrix(const DiscreteNetwork& net,
                                       const AcquisitionCostModel& costs,
                                       const std::string& flag) {
  InferenceContext ctx(net);
  std::vector<double> prior = ctx.posterior(net.class_var());
  int k = static_cast<int>(prior.size());
  if (!flag.empty()) {
    if (flag.rfind("sym:", 0) == 0)
      return MisclassificationMatrix::symmetric(k, std::stod(flag.substr(4)));
    if (flag.rfind("cal:sym:", 0) == 0)
      return calibrate(prior, std::stod(flag.substr(8)), CalibrationMode::kSymmetric);
    if (flag.rfind("cal:asym:", 0) == 0)
      return calibrate(prior, std::stod(flag.substr(9)), CalibrationMode::kAsymmetric);
    throw ValidationError("unrecognized --matrix spec '" + flag + "'");
  }
  if (costs.has_matrix()) return MisclassificationMatrix(k, costs.matrix());
  if (costs.has_calibration())
    return calibrate(prior, costs.calibration_target(),
                     costs.calibration_symmetric() ? CalibrationMode::kSymmetric
                                                   : CalibrationMode::kAsymmetric);
  throw ValidationError("no misclassification matrix given (flag or cost file)");
}

std::string money(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

std::string set_names(const DiscreteNetwork& net, VarSet s) {
  if (s.empty()) return "{}";
  std::string out = "{";
  bool first = true;
  for (int v : s.to_vector()) {
    if (!first) out += ",";
    out += net.var(v).name;
    first = false;
  }
  return out + "}";
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw ValidationError("cannot write output file: " + out_path);
    out << text;
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Value-of-information lattice toolkit for cost-sensitive feature acquisition"};
  app.require_subcommand(1);

  std::string net_path, costs_path, evidence_spec, matrix_spec, out_path;
  bool list_nodes = false, naive = false, synthetic = false;
  std::string strategy = "greedy-la", dump_json, mode = "sym", targets = "0:2000:100";
  std::string seeds_spec = "1,2,3", summary_path;
  int groups = 2, jobs = 1;

  auto add_net = [&](CLI::App* cmd) {
    cmd->add_option("--net", net_path, "network file")->required();
    cmd->add_option("--evidence", evidence_spec, "observed values, e.g. X1=T,X3=high");
  };
  auto add_costs = [&](CLI::App* cmd, bool required) {
    auto* o = cmd->add_option("--costs", costs_path, "acquisition cost file");
    if (required) o->required();
    cmd->add_option("--matrix", matrix_spec,
                    "misclassification spec: sym:V, cal:sym:T or cal:asym:T");
  };

  auto* lattice_cmd = app.add_subcommand("lattice", "build the irreducible-subset lattice");
  add_net(lattice_cmd);
  lattice_cmd->add_flag("--list", list_nodes, "print every node");
  lattice_cmd->add_option("--out", out_path, "write results to file");

  auto* evi_cmd = app.add_subcommand("evi", "per-node value-of-information table");
  add_net(evi_cmd);
  add_costs(evi_cmd, true);
  evi_cmd->add_flag("--naive", naive, "recompute every node without bound sharing");
  evi_cmd->add_option("--out", out_path, "write results to file");

  auto* policy_cmd = app.add_subcommand("policy", "build and evaluate an acquisition policy");
  add_net(policy_cmd);
  add_costs(policy_cmd, true);
  policy_cmd->add_option("--strategy", strategy, "none|mb|greedy|set|greedy-la|oracle");
  policy_cmd->add_option("--dump-json", dump_json, "write the tree as JSON to file");
  policy_cmd->add_option("--out", out_path, "write results to file");

  auto* sweep_cmd = app.add_subcommand("sweep", "expected-total-cost sweep over EMC targets");
  add_net(sweep_cmd);
  sweep_cmd->add_option("--costs", costs_path, "acquisition cost file");
  sweep_cmd->add_flag("--synthetic", synthetic, "random grouped costs instead of a file");
  sweep_cmd->add_option("--groups", groups, "group count for synthetic costs");
  sweep_cmd->add_option("--mode", mode, "sym|asym");
  sweep_cmd->add_option("--targets", targets, "LO:HI:STEP grid of prior-EMC targets");
  sweep_cmd->add_option("--seeds", seeds_spec, "comma-separated synthetic-cost seeds");
  sweep_cmd->add_option("--jobs", jobs, "parallel rows");
  sweep_cmd->add_option("--out", out_path, "write CSV to file");
  sweep_cmd->add_option("--summary", summary_path, "write interval-averaged CSV to file");

  auto* oracle_cmd = app.add_subcommand("oracle", "cross-check fast paths against oracles");
  add_net(oracle_cmd);
  add_costs(oracle_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // bad usage is a validation failure
  }

  DiscreteNetwork net = DiscreteNetwork::from_json_file(net_path);
  Assignment evidence = parse_evidence(net, evidence_spec);

  if (lattice_cmd->parsed()) {
    Lattice lat = build_lattice(net, evidence.vars());
    int n = (net.features() - evidence.vars()).count();
    int max_size = 0;
    for (const auto& node : lat.nodes()) max_size = std::max(max_size, node.set.count());
    double reduction = 100.0 * (1.0 - lat.size() / std::pow(2.0, n));
    std::ostringstream os;
    char line[128];
    std::snprintf(line, sizeof line, "nodes: %d, max-size: %d, reduction: %.2f%%\n",
                  lat.size(), max_size, reduction);
    os << line;
    if (list_nodes)
      for (const auto& node : lat.nodes()) os << set_names(net, node.set) << "\n";
    emit(os.str(), out_path);
    return 0;
  }

  if (evi_cmd->parsed()) {
    AcquisitionCostModel costs = AcquisitionCostModel::from_json_file(costs_path, net);
    MisclassificationMatrix m = resolve_matrix(net, costs, matrix_spec);
    InferenceContext ctx(net, evidence);
    Lattice lat = build_lattice(net, evidence.vars());
    std::ostringstream os;
    os << "set,evi,benefit\n";
    AcquisitionHistory none;
    if (naive) {
      for (const auto& node : lat.nodes()) {
        double v = evi_set(ctx, node.set, m);
        os << set_names(net, node.set) << ',' << money(v) << ','
           << money(v - costs.set_cost(node.set, none)) << '\n';
      }
      BestSet best;
      ValuationReport rep;
      rep.evi.resize(lat.size());
      for (int i = 0; i < lat.size(); ++i) rep.evi[i] = evi_set(ctx, lat.nodes()[i].set, m);
      best = best_set(lat, rep, costs, none);
      os << "best: " << set_names(net, best.set) << " benefit " << money(best.benefit) << '\n';
    } else {
      ValuationReport rep = sweep_evi(lat, ctx, m);
      for (int i = 0; i < lat.size(); ++i)
        os << set_names(net, lat.nodes()[i].set) << ',' << money(rep.evi[i]) << ','
           << money(rep.evi[i] - costs.set_cost(lat.nodes()[i].set, none)) << '\n';
      BestSet best = best_set(lat, rep, costs, none);
      os << "best: " << set_names(net, best.set) << " benefit " << money(best.benefit) << '\n';
    }
    emit(os.str(), out_path);
    return 0;
  }

  if (policy_cmd->parsed()) {
    AcquisitionCostModel costs = AcquisitionCostModel::from_json_file(costs_path, net);
    MisclassificationMatrix m = resolve_matrix(net, costs, matrix_spec);
    PolicyInputs in{net, costs, m, evidence, nullptr};
    Policy pol = strategy == "oracle" ? optimal_policy_oracle(in)
                                      : build_policy(strategy_by_name(strategy), in);
    PolicyEvaluation ev = evaluate(pol, net, costs, m);
    std::ostringstream os;
    os << render_policy(pol, net, costs, m);
    os << "ETC: " << money(ev.etc) << "\n";
    emit(os.str(), out_path);
    if (!dump_json.empty()) {
      std::ofstream out(dump_json);
      if (!out) throw ValidationError("cannot write policy dump: " + dump_json);
      out << policy_to_json_text(pol, net) << "\n";
    }
    return 0;
  }

  if (sweep_cmd->parsed()) {
    SweepConfig config;
    config.mode = mode == "asym" ? CalibrationMode::kAsymmetric : CalibrationMode::kSymmetric;
    config.jobs = jobs;
    double lo, hi, step;
    if (std::sscanf(targets.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0)
      throw ValidationError("--targets must be LO:HI:STEP");
    for (double t = lo; t <= hi + 1e-9; t += step) config.targets.push_back(t);
    std::vector<std::pair<unsigned, AcquisitionCostModel>> cost_models;
    if (synthetic) {
      config.seeds.clear();
      std::stringstream ss(seeds_spec);
      std::string item;
      while (std::getline(ss, item, ',')) config.seeds.push_back(std::stoul(item));
      for (unsigned seed : config.seeds)
        cost_models.emplace_back(seed, generate_synthetic_costs(net, groups, seed));
    } else {
      if (costs_path.empty())
        throw ValidationError("sweep needs --costs FILE or --synthetic");
      config.seeds = {0};
      cost_models.emplace_back(0u, AcquisitionCostModel::from_json_file(costs_path, net));
    }
    auto rows = run_sweep(net, cost_models, config);
    emit(rows_to_csv(rows), out_path);
    if (!summary_path.empty()) emit(summary_to_csv(summarize(rows, 500.0)), summary_path);
    return 0;
  }

  if (oracle_cmd->parsed()) {
    AcquisitionCostModel costs = AcquisitionCostModel::from_json_file(costs_path, net);
    MisclassificationMatrix m = resolve_matrix(net, costs, matrix_spec);
    InferenceContext ctx(net, evidence);
    int failures = 0;

    Lattice lat = build_lattice(net, evidence.vars());
    auto brute = enumerate_irreducible_bruteforce(net, evidence.vars());
    bool sets_match = static_cast<int>(brute.size()) == lat.size();
    if (sets_match)
      for (const auto& s : brute)
        if (lat.find(s) < 0) sets_match = false;
    std::cout << "irreducible enumeration: " << (sets_match ? "pass" : "FAIL") << " ("
              << lat.size() << " sets)\n";
    failures += !sets_match;

    ValuationReport rep = sweep_evi(lat, ctx, m);
    double worst = 0;
    for (int i = 0; i < lat.size(); ++i)
      worst = std::max(worst, std::abs(rep.evi[i] - evi_set(ctx, lat.nodes()[i].set, m)));
    bool evi_ok = worst <= 1e-9;
    std::cout << "swept vs naive EVI: " << (evi_ok ? "pass" : "FAIL")
              << " (max dev " << worst << ")\n";
    failures += !evi_ok;

    if ((net.features() - evidence.vars()).count() <= 4) {
      PolicyInputs in{net, costs, m, evidence, nullptr};
      double opt = evaluate(optimal_policy_oracle(in), net, costs, m).etc;
      bool pol_ok = true;
      for (Strategy s : {Strategy::kNoAcquisition, Strategy::kMarkovBlanket, Strategy::kGreedy,
                         Strategy::kSetAcquisition, Strategy::kGreedyLA}) {
        double etc = evaluate(build_policy(s, in), net, costs, m).etc;
        if (opt > etc + 1e-9) pol_ok = false;
      }
      std::cout << "optimal policy bound: " << (pol_ok ? "pass" : "FAIL") << " (optimal ETC "
                << money(opt) << ")\n";
      failures += !pol_ok;
    } else {
      std::cout << "optimal policy bound: skipped (more than 4 features)\n";
    }
    return failures == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const voi::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
