#include "voi/cost.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace voi {

AcquisitionCostModel::AcquisitionCostModel(std::vector<double> base, std::vector<int> group,
                                           std::vector<double> group_overhead)
    : base_(std::move(base)), group_(std::move(group)),
      group_overhead_(std::move(group_overhead)) {
  if (group_.size() != base_.size()) group_.assign(base_.size(), -1);
  for (double c : base_)
    if (c < 0) throw ValidationError("negative feature cost");
  for (double c : group_overhead_)
    if (c < 0) throw ValidationError("negative group overhead");
  for (int g : group_)
    if (g >= static_cast<int>(group_overhead_.size()))
      throw ValidationError("feature references unknown group");
}

double AcquisitionCostModel::set_cost(VarSet s, const AcquisitionHistory& history) const {
  if (s.intersects(history.features))
    throw ValidationError("acquisition overlaps already-acquired features");
  double total = 0;
  std::uint64_t paid = history.paid_groups;
  for (int f : s.to_vector()) {
    total += base_[f];
    int g = group_[f];
    if (g >= 0 && !((paid >> g) & 1)) {
      total += group_overhead_[g];
      paid |= std::uint64_t{1} << g;
    }
  }
  return total;
}

AcquisitionHistory AcquisitionCostModel::extended(const AcquisitionHistory& history,
                                                  int feature, int state) const {
  if (history.features.contains(feature))
    throw ValidationError("feature acquired twice on one path");
  AcquisitionHistory out = history;
  out.steps.emplace_back(feature, state);
  out.features.add(feature);
  int g = group_[feature];
  if (g >= 0) out.paid_groups |= std::uint64_t{1} << g;
  return out;
}

double path_feature_cost(const AcquisitionCostModel& model, const AcquisitionHistory& path) {
  double total = 0;
  AcquisitionHistory prefix;
  for (const auto& [feature, state] : path.steps) {
    total += model.set_cost(VarSet::single(feature), prefix);
    prefix = model.extended(prefix, feature, state);
  }
  return total;
}

MisclassificationMatrix::MisclassificationMatrix(int classes, std::vector<double> costs)
    : classes_(classes), c_(std::move(costs)) {
  if (static_cast<int>(c_.size()) != classes_ * classes_)
    throw ValidationError("misclassification matrix has wrong size");
  for (double x : c_)
    if (x < 0) throw ValidationError("negative misclassification cost");
}

MisclassificationMatrix MisclassificationMatrix::symmetric(int classes, double off_diagonal) {
  std::vector<double> c(classes * classes, off_diagonal);
  for (int i = 0; i < classes; ++i) c[i * classes + i] = 0;
  return MisclassificationMatrix(classes, std::move(c));
}

MisclassificationMatrix MisclassificationMatrix::scaled(double k) const {
  std::vector<double> c = c_;
  for (double& x : c) x *= k;
  return MisclassificationMatrix(classes_, std::move(c));
}

EmcResult emc(const std::vector<double>& dist, const MisclassificationMatrix& m) {
  EmcResult best;
  for (int i = 0; i < m.classes(); ++i) {
    double cost = 0;
    for (int j = 0; j < m.classes(); ++j) cost += dist[j] * m.at(i, j);
    if (i == 0 || cost < best.cost) {
      best.cost = cost;
      best.decided_class = i;
    }
  }
  return best;
}

MisclassificationMatrix calibrate(const std::vector<double>& prior, double target,
                                  CalibrationMode mode) {
  if (target < 0) throw ValidationError("calibration target must be nonnegative");
  int k = static_cast<int>(prior.size());
  if (mode == CalibrationMode::kSymmetric) {
    double pmax = *std::max_element(prior.begin(), prior.end());
    if (pmax >= 1.0 && target > 0)
      throw ValidationError("degenerate prior cannot be calibrated");
    double c = pmax >= 1.0 ? 0.0 : target / (1.0 - pmax);
    return MisclassificationMatrix::symmetric(k, c);
  }
  std::vector<double> c(k * k, 0.0);
  for (int i = 0; i < k; ++i) {
    if (prior[i] >= 1.0)
      throw ValidationError("degenerate prior in asymmetric calibration");
    double row = target / (1.0 - prior[i]);
    for (int j = 0; j < k; ++j)
      if (i != j) c[i * k + j] = row;
  }
  return MisclassificationMatrix(k, std::move(c));
}

AcquisitionCostModel AcquisitionCostModel::from_json_text(const std::string& text,
                                                          const DiscreteNetwork& net) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("cost document is not valid JSON: ") + e.what());
  }
  std::vector<double> base(net.num_vars(), 0.0);
  std::vector<int> group(net.num_vars(), -1);
  std::vector<double> overhead;
  std::vector<std::string> group_names;
  auto group_id = [&](const std::string& name) {
    for (size_t i = 0; i < group_names.size(); ++i)
      if (group_names[i] == name) return static_cast<int>(i);
    group_names.push_back(name);
    overhead.push_back(0.0);
    return static_cast<int>(group_names.size()) - 1;
  };
  try {
    if (doc.contains("groups"))
      for (const auto& jg : doc.at("groups"))
        overhead[group_id(jg.at("name").get<std::string>())] =
            jg.at("overhead").get<double>();
    VarSet covered;
    for (const auto& jf : doc.at("features")) {
      std::string name = jf.at("name").get<std::string>();
      int v = net.var_by_name(name);
      if (v < 0) throw ValidationError("cost file references unknown feature '" + name + "'");
      if (v == net.class_var())
        throw ValidationError("class variable cannot carry an acquisition cost");
      base[v] = jf.at("cost").get<double>();
      covered.add(v);
      if (jf.contains("group")) group[v] = group_id(jf.at("group").get<std::string>());
    }
    if (!(net.features() - covered).empty())
      throw ValidationError("cost file must price every feature of the network");
    AcquisitionCostModel model(std::move(base), std::move(group), std::move(overhead));
    if (doc.contains("matrix")) {
      for (const auto& row : doc.at("matrix"))
        for (const auto& x : row) model.matrix_.push_back(x.get<double>());
    }
    if (doc.contains("calibrate")) {
      model.has_calibration_ = true;
      model.calibration_target_ = doc.at("calibrate").at("target").get<double>();
      std::string mode = doc.at("calibrate").value("mode", "symmetric");
      model.calibration_symmetric_ = (mode != "asymmetric" && mode != "asym");
    }
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed cost document: ") + e.what());
  }
}

AcquisitionCostModel AcquisitionCostModel::from_json_file(const std::string& path,
                                                          const DiscreteNetwork& net) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open cost file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str(), net);
}

}  // namespace voi
