#ifndef VOI_COST_HPP
#define VOI_COST_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "voi/network.hpp"
#include "voi/types.hpp"

namespace voi {

// Ordered record of acquisitions along a policy path, plus the groups whose
// overhead has already been paid.
struct AcquisitionHistory {
  std::vector<std::pair<int, int>> steps;  // (feature id, observed state)
  VarSet features;
  std::uint64_t paid_groups = 0;
};

// Per-feature base costs with optional group overheads: the first feature
// acquired from a group also pays the group's overhead.
class AcquisitionCostModel {
 public:
  AcquisitionCostModel() = default;
  AcquisitionCostModel(std::vector<double> base, std::vector<int> group,
                       std::vector<double> group_overhead);

  static AcquisitionCostModel from_json_text(const std::string& text,
                                             const DiscreteNetwork& net);
  static AcquisitionCostModel from_json_file(const std::string& path,
                                             const DiscreteNetwork& net);

  double base_cost(int feature) const { return base_[feature]; }
  int group_of(int feature) const { return group_[feature]; }
  int num_groups() const { return static_cast<int>(group_overhead_.size()); }
  double group_overhead(int g) const { return group_overhead_[g]; }

  // C(S | history): bases of s plus overheads of groups touched by s that
  // the history has not already paid.  Order-independent.
  double set_cost(VarSet s, const AcquisitionHistory& history) const;
  double set_cost(VarSet s) const { return set_cost(s, AcquisitionHistory{}); }

  AcquisitionHistory extended(const AcquisitionHistory& history, int feature,
                              int state) const;

  // Is there a misclassification calibration request embedded in the file?
  bool has_calibration() const { return has_calibration_; }
  double calibration_target() const { return calibration_target_; }
  bool calibration_symmetric() const { return calibration_symmetric_; }
  bool has_matrix() const { return !matrix_.empty(); }
  const std::vector<double>& matrix() const { return matrix_; }

 private:
  std::vector<double> base_;
  std::vector<int> group_;  // -1 when ungrouped
  std::vector<double> group_overhead_;
  std::vector<double> matrix_;  // flat k*k, optional
  bool has_calibration_ = false;
  double calibration_target_ = 0;
  bool calibration_symmetric_ = true;
};

// FC: sum of per-step conditional costs along the path.
double path_feature_cost(const AcquisitionCostModel& model, const AcquisitionHistory& path);

// c_ij: cost of predicting class i when the truth is j.
class MisclassificationMatrix {
 public:
  MisclassificationMatrix() = default;
  MisclassificationMatrix(int classes, std::vector<double> costs);

  static MisclassificationMatrix symmetric(int classes, double off_diagonal);

  int classes() const { return classes_; }
  double at(int predicted, int actual) const { return c_[predicted * classes_ + actual]; }

  MisclassificationMatrix scaled(double k) const;

 private:
  int classes_ = 0;
  std::vector<double> c_;
};

struct EmcResult {
  double cost = 0;
  int decided_class = 0;
};

// Expected misclassification cost: min over predictions of the expected
// cost under dist; ties broken by lowest class index.
EmcResult emc(const std::vector<double>& dist, const MisclassificationMatrix& m);

enum class CalibrationMode { kSymmetric, kAsymmetric };

// Build a matrix whose prior expected misclassification cost equals target.
// Symmetric: constant off-diagonal target / (1 - max_i P(y_i)).  Asymmetric:
// row-constant off-diagonal target / (1 - P(y_i)), making every prediction's
// prior expected cost equal target.
MisclassificationMatrix calibrate(const std::vector<double>& prior, double target,
                                  CalibrationMode mode);

}  // namespace voi

#endif
