#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "voi/harness.hpp"
#include "voi/lattice.hpp"
#include "voi/policy.hpp"
#include "voi/valuation.hpp"

namespace py = pybind11;
using namespace voi;

namespace {

Assignment assignment_from_dict(const DiscreteNetwork& net, const py::dict& d) {
  Assignment a(net.num_vars());
  for (auto item : d) {
    int v = net.var_by_name(py::cast<std::string>(item.first));
    if (v < 0) throw ValidationError("unknown variable in evidence dict");
    int s = net.state_by_name(v, py::cast<std::string>(item.second));
    if (s < 0) throw ValidationError("unknown state in evidence dict");
    a.set(v, s);
  }
  return a;
}

std::vector<std::string> set_to_names(const DiscreteNetwork& net, VarSet s) {
  std::vector<std::string> out;
  for (int v : s.to_vector()) out.push_back(net.var(v).name);
  return out;
}

}  // namespace

PYBIND11_MODULE(_voi, m) {
  m.doc() = "value-of-information lattices and feature-acquisition policies";

  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<ZeroProbabilityEvidence>(m, "ZeroProbabilityEvidence");

  py::class_<DiscreteNetwork>(m, "Network")
      .def_static("from_json", &DiscreteNetwork::from_json_text)
      .def_static("from_file", &DiscreteNetwork::from_json_file)
      .def("to_json", &DiscreteNetwork::to_json_text)
      .def_property_readonly("num_vars", &DiscreteNetwork::num_vars)
      .def_property_readonly("class_var",
                             [](const DiscreteNetwork& n) { return n.var(n.class_var()).name; })
      .def("variables",
           [](const DiscreteNetwork& n) {
             std::vector<std::string> out;
             for (int v = 0; v < n.num_vars(); ++v) out.push_back(n.var(v).name);
             return out;
           })
      .def("markov_blanket",
           [](const DiscreteNetwork& n, const std::string& name) {
             int v = n.var_by_name(name);
             if (v < 0) throw ValidationError("unknown variable: " + name);
             return set_to_names(n, n.markov_blanket(v));
           })
      .def("posterior", [](const DiscreteNetwork& n, const py::dict& evidence) {
        InferenceContext ctx(n, assignment_from_dict(n, evidence));
        return ctx.posterior(n.class_var());
      });

  py::class_<AcquisitionCostModel>(m, "CostModel")
      .def_static("from_json", &AcquisitionCostModel::from_json_text)
      .def_static("from_file", &AcquisitionCostModel::from_json_file);

  py::class_<MisclassificationMatrix>(m, "MisclassificationMatrix")
      .def_static("symmetric", &MisclassificationMatrix::symmetric)
      .def(py::init<int, std::vector<double>>())
      .def("at", &MisclassificationMatrix::at)
      .def_property_readonly("classes", &MisclassificationMatrix::classes);

  m.def("calibrate",
        [](const std::vector<double>& prior, double target, const std::string& mode) {
          return calibrate(prior, target,
                           mode == "asym" ? CalibrationMode::kAsymmetric
                                          : CalibrationMode::kSymmetric);
        },
        py::arg("prior"), py::arg("target"), py::arg("mode") = "sym");

  m.def("irreducible_sets",
        [](const DiscreteNetwork& net, const py::dict& evidence) {
          Assignment e = assignment_from_dict(net, evidence);
          Lattice lat = build_lattice(net, e.vars());
          std::vector<std::vector<std::string>> out;
          for (const auto& node : lat.nodes()) out.push_back(set_to_names(net, node.set));
          return out;
        },
        py::arg("net"), py::arg("evidence") = py::dict());

  m.def("evi_table",
        [](const DiscreteNetwork& net, const MisclassificationMatrix& matrix,
           const py::dict& evidence) {
          Assignment e = assignment_from_dict(net, evidence);
          InferenceContext ctx(net, e);
          Lattice lat = build_lattice(net, e.vars());
          ValuationReport rep = sweep_evi(lat, ctx, matrix);
          py::list out;
          for (int i = 0; i < lat.size(); ++i)
            out.append(py::make_tuple(set_to_names(net, lat.nodes()[i].set), rep.evi[i]));
          return out;
        },
        py::arg("net"), py::arg("matrix"), py::arg("evidence") = py::dict());

  m.def("policy_etc",
        [](const DiscreteNetwork& net, const AcquisitionCostModel& costs,
           const MisclassificationMatrix& matrix, const std::string& strategy,
           const py::dict& evidence) {
          Assignment e = assignment_from_dict(net, evidence);
          PolicyInputs in{net, costs, matrix, e, nullptr};
          Policy pol = strategy == "oracle" ? optimal_policy_oracle(in)
                                            : build_policy(strategy_by_name(strategy), in);
          return evaluate(pol, net, costs, matrix).etc;
        },
        py::arg("net"), py::arg("costs"), py::arg("matrix"), py::arg("strategy"),
        py::arg("evidence") = py::dict());

  m.def("policy_json",
        [](const DiscreteNetwork& net, const AcquisitionCostModel& costs,
           const MisclassificationMatrix& matrix, const std::string& strategy,
           const py::dict& evidence) {
          Assignment e = assignment_from_dict(net, evidence);
          PolicyInputs in{net, costs, matrix, e, nullptr};
          Policy pol = strategy == "oracle" ? optimal_policy_oracle(in)
                                            : build_policy(strategy_by_name(strategy), in);
          return policy_to_json_text(pol, net);
        },
        py::arg("net"), py::arg("costs"), py::arg("matrix"), py::arg("strategy"),
        py::arg("evidence") = py::dict());
}
