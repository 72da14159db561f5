#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bregmax/bbar.hpp"
#include "bregmax/io.hpp"
#include "bregmax/verify.hpp"

namespace py = pybind11;
using namespace bregmax;

namespace {

Instance make_instance(const std::vector<std::string>& labels, const Mat& f,
                       const std::string& kind, const Vec& param) {
  BetaSystem beta;
  if (kind == "classical") {
    beta = make_classical(param);
  } else if (kind == "entropy_quadratic") {
    beta = make_entropy_quadratic(param);
  } else {
    throw py::value_error("unknown beta kind: " + kind);
  }
  return Instance(labels, f, beta);
}

}  // namespace

PYBIND11_MODULE(_bregmax, m) {
  m.doc() =
      "Bregman families over a finite set: reverse projections, divergence "
      "maximization, and the kernel-direction auxiliary problem";

  py::register_exception<ParseError>(m, "ParseError");
  py::register_exception<ValidationError>(m, "ValidationError");
  py::register_exception<TrivialKernel>(m, "TrivialKernel");
  py::register_exception<MemberOfClosure>(m, "MemberOfClosure");
  py::register_exception<ViolatedNecessaryCondition>(
      m, "ViolatedNecessaryCondition");

  py::class_<Instance>(m, "Instance")
      .def(py::init(&make_instance), py::arg("labels"), py::arg("f"),
           py::arg("beta_kind"), py::arg("beta_param"))
      .def_property_readonly("zsize", &Instance::zsize)
      .def_property_readonly("dim", &Instance::dim)
      .def_property_readonly("labels", &Instance::labels)
      .def_property_readonly("f", &Instance::f)
      .def("family_dim", &Instance::family_dim)
      .def("kernel_basis", &Instance::kernel_basis);

  m.def(
      "load_instance",
      [](const std::string& path) { return load_instance(path).instance; },
      py::arg("path"), "Load an instance from a JSON file");
  m.def(
      "parse_instance",
      [](const std::string& text) { return parse_instance(text).instance; },
      py::arg("text"), "Parse an instance from a JSON string");

  m.def(
      "lambda_of_theta",
      [](const Instance& inst, const Vec& theta) {
        return lambda_of_theta(inst, theta);
      },
      py::arg("instance"), py::arg("theta"));
  m.def(
      "pm_of_theta",
      [](const Instance& inst, const Vec& theta) {
        return pm_of_theta(inst, theta).weights;
      },
      py::arg("instance"), py::arg("theta"),
      "Family member P_theta as a weight vector");
  m.def(
      "upsilon",
      [](const Instance& inst, const Vec& theta) {
        return upsilon(inst, theta);
      },
      py::arg("instance"), py::arg("theta"));
  m.def(
      "moment_map",
      [](const Instance& inst, const Vec& p) {
        return moment_map(inst, Pm(p));
      },
      py::arg("instance"), py::arg("p"));
  m.def(
      "facial_set",
      [](const Instance& inst, const std::vector<int>& s) {
        return facial_set(inst, s).members;
      },
      py::arg("instance"), py::arg("support"),
      "Smallest facial set containing the given outcomes");

  m.def(
      "bregman_div",
      [](const Instance& inst, const Vec& u, const Vec& v) {
        return bregman_div(inst.beta(), u, v);
      },
      py::arg("instance"), py::arg("u"), py::arg("v"));

  m.def(
      "project",
      [](const Instance& inst, const Vec& p) {
        const ProjectionResult r = rb_project(inst, Pm(p));
        py::dict out;
        out["pi"] = r.pi.weights;
        out["value"] = r.value;
        out["face"] = r.face.members;
        out["dual_gap"] = r.dual_gap;
        if (r.theta) out["theta"] = *r.theta;
        return out;
      },
      py::arg("instance"), py::arg("p"),
      "Reverse Bregman projection of p onto the family closure");

  m.def(
      "div_from_family",
      [](const Instance& inst, const Vec& p) {
        return div_from_family(inst, Pm(p));
      },
      py::arg("instance"), py::arg("p"));

  m.def(
      "maximize_divergence",
      [](const Instance& inst, int starts, std::uint64_t seed) {
        MaximizeOptions opt;
        opt.starts = starts;
        opt.seed = seed;
        const MaxReport rep = maximize_divergence(inst, opt);
        py::dict out;
        out["value"] = rep.global_value;
        out["argmax"] = rep.global_argmax.weights;
        py::list locals_;
        for (const auto& o : rep.local_optima) {
          py::dict rec;
          rec["point"] = o.point.weights;
          rec["value"] = o.value;
          rec["criticality"] = o.criticality;
          locals_.append(rec);
        }
        out["local_optima"] = locals_;
        return out;
      },
      py::arg("instance"), py::arg("starts") = 32, py::arg("seed") = 0);

  m.def(
      "bbar",
      [](const Instance& inst, const Vec& u_raw, int starts,
         std::uint64_t seed) {
        const Direction u = normalize_direction(u_raw, 1e-8);
        BbarOptions opt;
        opt.starts = starts;
        opt.seed = seed;
        const BbarResult r = bbar_eval(inst.beta(), u, opt);
        py::dict out;
        out["value"] = r.value;
        out["argmax"] = r.argmax.weights;
        out["base"] = r.base.weights;
        out["n_local"] = r.n_local;
        return out;
      },
      py::arg("instance"), py::arg("u"), py::arg("starts") = 24,
      py::arg("seed") = 0,
      "Maximum divergence from the codimension-one family of direction u");

  m.def(
      "bbar_classical",
      [](const Instance& inst, const Vec& u_raw) {
        return bbar_classical(inst.beta(), normalize_direction(u_raw, 1e-8));
      },
      py::arg("instance"), py::arg("u"),
      "Closed form for all-classical systems");

  m.def(
      "maximize_bbar",
      [](const Instance& inst, int starts, std::uint64_t seed) {
        BbarOptions opt;
        opt.starts = starts;
        opt.seed = seed;
        const MaxBbarReport rep = maximize_bbar(inst, opt);
        py::dict out;
        out["value"] = rep.value;
        out["argmax_direction"] = rep.argmax.u;
        return out;
      },
      py::arg("instance"), py::arg("starts") = 24, py::arg("seed") = 0);

  m.def(
      "verify",
      [](const Instance& inst, std::uint64_t seed, int budget) {
        const VerifyReport rep = cmd_verify(inst, seed, budget, {});
        py::list checks;
        for (const auto& c : rep.checks) {
          py::dict rec;
          rec["name"] = c.name;
          rec["tested"] = c.tested;
          rec["max_violation"] = c.max_violation;
          rec["tolerance"] = c.tolerance;
          rec["pass"] = c.pass;
          checks.append(rec);
        }
        py::dict out;
        out["all_pass"] = rep.all_pass();
        out["checks"] = checks;
        return out;
      },
      py::arg("instance"), py::arg("seed") = 0, py::arg("budget") = 16,
      "Run the theorem verification suite on an instance");
}
