#include "voi/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <sstream>

#include "voi/inference.hpp"
#include "voi/valuation.hpp"

namespace voi {

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kNoAcquisition: return "none";
    case Strategy::kMarkovBlanket: return "mb";
    case Strategy::kGreedy: return "greedy";
    case Strategy::kSetAcquisition: return "set";
    case Strategy::kGreedyLA: return "greedy-la";
  }
  return "?";
}

Strategy strategy_by_name(const std::string& name) {
  for (Strategy s : {Strategy::kNoAcquisition, Strategy::kMarkovBlanket, Strategy::kGreedy,
                     Strategy::kSetAcquisition, Strategy::kGreedyLA})
    if (strategy_name(s) == name) return s;
  throw ValidationError("unknown strategy '" + name + "'");
}

Policy build_policy(Strategy s, const PolicyInputs& in) {
  switch (s) {
    case Strategy::kNoAcquisition: return build_no_acquisition(in);
    case Strategy::kMarkovBlanket: return build_markov_blanket(in);
    case Strategy::kGreedy: return build_greedy(in);
    case Strategy::kSetAcquisition: return build_set_acquisition(in);
    case Strategy::kGreedyLA: return build_greedy_la(in);
  }
  throw ValidationError("unknown strategy");
}

std::vector<SweepRow> run_sweep(
    const DiscreteNetwork& net,
    const std::vector<std::pair<unsigned, AcquisitionCostModel>>& costs,
    const SweepConfig& config) {
  InferenceContext ctx(net);
  std::vector<double> prior = ctx.posterior(net.class_var());

  // One cache per seed, keyed to the target-1 matrix: calibrated matrices
  // at other targets are scalar multiples, so EVI values are shared across
  // the whole grid.
  MisclassificationMatrix unit = calibrate(prior, 1.0, config.mode);

  struct Task {
    double target;
    unsigned seed;
    const AcquisitionCostModel* model;
  };
  std::vector<Task> tasks;
  for (double target : config.targets)
    for (const auto& [seed, model] : costs) tasks.push_back({target, seed, &model});

  auto run_task = [&](const Task& task, EviCache* cache) {
    std::vector<SweepRow> rows;
    MisclassificationMatrix m =
        task.target == 1.0 ? unit : unit.scaled(task.target);
    double base_etc = 0;
    for (Strategy s : config.strategies) {
      PolicyInputs in{net, *task.model, m, Assignment(net.num_vars()), cache};
      Policy pol = build_policy(s, in);
      double etc = evaluate(pol, net, *task.model, m).etc;
      if (s == Strategy::kNoAcquisition) base_etc = etc;
      rows.push_back({task.target, config.mode, task.seed, s, etc, 0});
    }
    // No-acquisition may not be in the strategy list; fall back to its
    // direct evaluation for the savings column.
    if (std::find(config.strategies.begin(), config.strategies.end(),
                  Strategy::kNoAcquisition) == config.strategies.end()) {
      PolicyInputs in{net, *task.model, m, Assignment(net.num_vars()), cache};
      base_etc = evaluate(build_no_acquisition(in), net, *task.model, m).etc;
    }
    for (auto& r : rows) r.savings = base_etc - r.etc;
    return rows;
  };

  std::vector<SweepRow> out;
  if (config.jobs > 1) {
    // Rows are independent; caches are per-thread to keep contexts pure.
    std::vector<std::future<std::vector<SweepRow>>> futs;
    for (const auto& task : tasks)
      futs.push_back(std::async(std::launch::async, [&, task] {
        EviCache cache(unit);
        return run_task(task, &cache);
      }));
    for (auto& f : futs)
      for (auto& r : f.get()) out.push_back(r);
  } else {
    std::map<unsigned, EviCache> caches;
    for (const auto& task : tasks) {
      auto it = caches.find(task.seed);
      if (it == caches.end()) it = caches.emplace(task.seed, EviCache(unit)).first;
      for (auto& r : run_task(task, &it->second)) out.push_back(r);
    }
  }
  // Fixed output order: target, then seed, then strategy list order.
  std::stable_sort(out.begin(), out.end(), [&](const SweepRow& a, const SweepRow& b) {
    if (a.target != b.target) return a.target < b.target;
    return a.seed < b.seed;
  });
  return out;
}

std::vector<SummaryRow> summarize(const std::vector<SweepRow>& rows, double interval_width) {
  std::map<std::pair<long, std::string>, std::pair<double, long>> acc;
  std::vector<std::pair<long, Strategy>> order;
  for (const auto& r : rows) {
    long bucket = static_cast<long>(std::floor(r.target / interval_width));
    auto key = std::make_pair(bucket, strategy_name(r.strategy));
    if (!acc.count(key)) order.emplace_back(bucket, r.strategy);
    auto& [sum, count] = acc[key];
    sum += r.savings;
    ++count;
  }
  std::sort(order.begin(), order.end());
  std::vector<SummaryRow> out;
  for (const auto& [bucket, strat] : order) {
    auto& [sum, count] = acc[{bucket, strategy_name(strat)}];
    out.push_back({bucket * interval_width, (bucket + 1) * interval_width, strat,
                   sum / static_cast<double>(count)});
  }
  return out;
}

namespace {

std::string money(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

}  // namespace

std::string rows_to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "target_emc,mode,seed,strategy,etc,savings\n";
  for (const auto& r : rows)
    out << money(r.target) << ','
        << (r.mode == CalibrationMode::kSymmetric ? "sym" : "asym") << ',' << r.seed << ','
        << strategy_name(r.strategy) << ',' << money(r.etc) << ',' << money(r.savings)
        << '\n';
  return out.str();
}

std::string summary_to_csv(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "interval_lo,interval_hi,strategy,mean_savings\n";
  for (const auto& r : rows)
    out << money(r.interval_lo) << ',' << money(r.interval_hi) << ','
        << strategy_name(r.strategy) << ',' << money(r.mean_savings) << '\n';
  return out.str();
}

AcquisitionCostModel generate_synthetic_costs(const DiscreteNetwork& net, int groups,
                                              unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> feature_cost(1.0, 100.0);
  std::uniform_real_distribution<double> overhead_cost(100.0, 200.0);
  std::vector<double> base(net.num_vars(), 0.0);
  std::vector<int> group(net.num_vars(), -1);
  std::vector<double> overhead;
  for (int g = 0; g < groups; ++g) overhead.push_back(overhead_cost(rng));
  int next_group = 0;
  for (int f : net.features().to_vector()) {
    base[f] = feature_cost(rng);
    if (groups > 0) {
      group[f] = next_group;
      next_group = (next_group + 1) % groups;
    }
  }
  return AcquisitionCostModel(std::move(base), std::move(group), std::move(overhead));
}

DiscreteNetwork generate_random_network(int n_features, double v_density, unsigned seed,
                                        int arity) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::gamma_distribution<double> gamma(1.0, 1.0);

  int n = n_features + 1;  // class variable is id 0
  std::vector<Variable> vars(n);
  std::vector<std::vector<int>> parents(n);
  for (int v = 0; v < n; ++v) {
    vars[v].id = v;
    vars[v].name = v == 0 ? "Y" : "X" + std::to_string(v);
    for (int s = 0; s < arity; ++s) vars[v].states.push_back("s" + std::to_string(s));
  }
  // Ancestral order = id order.  Each feature gets one parent among its
  // predecessors; extra parents (v-structures) appear with probability
  // v_density.
  for (int v = 1; v < n; ++v) {
    std::uniform_int_distribution<int> pick(0, v - 1);
    parents[v].push_back(pick(rng));
    if (v >= 2 && unit(rng) < v_density) {
      int extra = pick(rng);
      if (std::find(parents[v].begin(), parents[v].end(), extra) == parents[v].end())
        parents[v].push_back(extra);
    }
    std::sort(parents[v].begin(), parents[v].end());
  }
  std::vector<std::vector<double>> cpt(n);
  for (int v = 0; v < n; ++v) {
    long rows = 1;
    for (int p : parents[v]) rows *= arity;
    for (long r = 0; r < rows; ++r) {
      std::vector<double> row(arity);
      double sum = 0;
      for (int s = 0; s < arity; ++s) {
        row[s] = gamma(rng) + 1e-3;
        sum += row[s];
      }
      double acc = 0;
      for (int s = 0; s < arity - 1; ++s) {
        row[s] /= sum;
        acc += row[s];
      }
      row[arity - 1] = 1.0 - acc;  // rows sum to 1 exactly
      for (double x : row) cpt[v].push_back(x);
    }
  }
  return DiscreteNetwork(std::move(vars), std::move(parents), std::move(cpt), 0);
}

Assignment sample_joint(const DiscreteNetwork& net, std::mt19937& rng) {
  Assignment a(net.num_vars());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int v : net.topological_order()) {
    long row = 0;
    for (int p : net.parents(v)) row = row * net.arity(p) + a.state(p);
    double u = unit(rng);
    double acc = 0;
    int picked = net.arity(v) - 1;
    for (int s = 0; s < net.arity(v); ++s) {
      acc += net.cpt(v)[row * net.arity(v) + s];
      if (u < acc) {
        picked = s;
        break;
      }
    }
    a.set(v, picked);
  }
  return a;
}

}  // namespace voi
