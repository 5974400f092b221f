#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ruledfib/acceptance.hpp"
#include "ruledfib/classifier.hpp"
#include "ruledfib/config.hpp"
#include "ruledfib/sym_cocycle.hpp"

namespace py = pybind11;
using namespace ruledfib;

namespace {

BundleShape parse_shape(const std::string& s) {
  if (s == "O+L" || s == "O+O") return BundleShape::Decomposable;
  if (s == "E20") return BundleShape::Atiyah;
  if (s == "EQ") return BundleShape::ExtQ;
  throw py::value_error("shape must be one of O+L, O+O, E20, EQ");
}

std::optional<LineOrder> parse_order(const py::object& o) {
  if (o.is_none()) return std::nullopt;
  if (py::isinstance<py::str>(o)) {
    if (o.cast<std::string>() == "inf") return LineOrder::infinite();
    throw py::value_error("order must be a positive int or 'inf'");
  }
  const auto n = o.cast<std::int64_t>();
  if (n < 1) throw py::value_error("order must be a positive int or 'inf'");
  return LineOrder::finite(static_cast<std::uint64_t>(n));
}

Reduction parse_reduction(const std::optional<std::string>& s) {
  if (!s) return Reduction::NotApplicable;
  if (*s == "ordinary") return Reduction::Ordinary;
  if (*s == "supersingular") return Reduction::Supersingular;
  throw py::value_error("reduction must be 'ordinary' or 'supersingular'");
}

py::dict fiber_dict(const MultipleFiber& f) {
  py::dict d;
  d["a"] = f.a;
  d["m"] = f.m;
  d["nu"] = f.nu;
  d["wild"] = f.wild;
  return d;
}

py::dict result_dict(const ClassificationResult& r) {
  py::dict d;
  d["has_fibration"] = r.has_fibration;
  d["row"] = r.row_id;
  d["e"] = r.e;
  py::list fs;
  for (const auto& f : r.fibers) fs.append(fiber_dict(f));
  d["fibers"] = fs;
  d["strange_type"] = r.strange_type();
  d["mode"] = r.symbolic_mode ? "symbolic" : "concrete";
  d["status"] = r.status ? py::object(py::str(std::string(error_name(*r.status)))) : py::object(py::none());
  py::list tr;
  for (const auto& s : r.trace) tr.append(py::make_tuple(s.rule, s.detail));
  d["trace"] = tr;
  return d;
}

py::dict classify_symbolic(const std::string& shape, std::uint32_t p, const std::optional<std::string>& reduction,
                           const py::object& order) {
  ClassificationInput in;
  in.shape = parse_shape(shape);
  in.symbolic = {p, parse_reduction(reduction), std::nullopt};
  in.order = parse_order(order);
  return result_dict(classify(in));
}

py::dict classify_curve(const std::string& path, const std::string& shape, const std::optional<std::string>& point,
                        const py::object& order, int max_extension) {
  const auto spec = curve_from_json(load_config_file(path));
  ClassificationInput in;
  in.shape = parse_shape(shape);
  in.curve = spec.curve;
  in.max_extension = max_extension;
  if (point) {
    const auto it = spec.points.find(*point);
    if (it == spec.points.end()) throw py::key_error("no point named " + *point);
    in.point = it->second;
  }
  in.order = parse_order(order);
  return result_dict(classify(in));
}

py::dict curve_summary(const std::string& path) {
  const auto spec = curve_from_json(load_config_file(path));
  const auto& e = spec.curve;
  py::dict d;
  d["p"] = e.characteristic();
  d["field_degree"] = e.field()->k;
  d["count"] = e.count();
  d["trace"] = e.trace();
  d["supersingular"] = e.supersingular();
  d["group"] = e.group_structure();
  py::dict pts;
  for (const auto& [name, pt] : spec.points) pts[py::str(name)] = point_order(pt);
  d["point_orders"] = pts;
  return d;
}

py::dict ku_check(const std::vector<std::pair<std::int64_t, std::int64_t>>& types) {
  const auto r = ku_feasible(types);
  py::dict d;
  d["feasible"] = r.feasible;
  py::list per;
  for (const auto& i : r.per_index) per.append(py::make_tuple(i.feasible, i.witness));
  d["per_index"] = per;
  return d;
}

py::dict enumerate_fibers(int d, std::uint32_t p, std::int64_t max_m) {
  const auto en = enumerate_configs(d, p, max_m);
  py::dict out;
  for (const auto& fam : en.families) {
    py::list members;
    for (const auto& c : fam.members) {
      py::list fs;
      for (const auto& f : c.fibers) fs.append(fiber_dict(f));
      members.append(fs);
    }
    out[py::str(fam.id)] = members;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_ruledfib, m) {
  m.doc() = "Elliptic fibrations on elliptic ruled surfaces";

  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);

  m.def("classify_symbolic", &classify_symbolic, py::arg("shape"), py::arg("p"), py::arg("reduction") = py::none(),
        py::arg("order") = py::none());
  m.def("classify_curve", &classify_curve, py::arg("path"), py::arg("shape"), py::arg("point") = py::none(),
        py::arg("order") = py::none(), py::arg("max_extension") = kDefaultExtensionBound);
  m.def("curve_summary", &curve_summary, py::arg("path"));
  m.def("ku_check", &ku_check, py::arg("types"));
  m.def("enumerate_fibers", &enumerate_fibers, py::arg("d"), py::arg("p"), py::arg("max_m"));
  m.def(
      "sym_split",
      [](std::uint32_t p, const std::string& mode) {
        return verify_conjugation(p, parse_reduction(mode));
      },
      py::arg("p"), py::arg("mode"));
  m.def(
      "run_acceptance",
      [](const std::vector<int>& which) {
        py::list out;
        for (const auto& r : run_acceptance(which)) {
          py::dict d;
          d["id"] = r.id;
          d["name"] = r.name;
          d["pass"] = r.pass;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("which") = std::vector<int>{});
}
