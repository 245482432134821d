#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "easic/attacks.hpp"
#include "easic/error.hpp"
#include "easic/flow.hpp"
#include "easic/isop.hpp"
#include "easic/json_io.hpp"
#include "easic/npn.hpp"
#include "easic/simulate.hpp"
#include "easic/verilog.hpp"

namespace py = pybind11;
using namespace easic;

namespace {

struct PyFlowResult {
  FlowResult result;
  FlowOptions options;
};

std::vector<std::string> lut_names(const Netlist& nl, const std::vector<InstId>& ids) {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (InstId id : ids) out.push_back(nl.inst(id).name);
  return out;
}

py::dict row_dict(const ReportRow& r) {
  py::dict d;
  d["obf_percent"] = r.obf_percent;
  d["cp"] = r.cp;
  d["sumcp"] = r.sumcp;
  d["a_re"] = r.area.reconfigurable;
  d["a_st"] = r.area.static_logic;
  d["a"] = r.area.total;
  d["luts_re"] = r.luts_re;
  d["luts_st"] = r.luts_st;
  return d;
}

PatternHistogram histogram_from_dict(const std::map<std::pair<unsigned, uint64_t>, uint64_t>& counts) {
  PatternHistogram h;
  for (const auto& [k, c] : counts) h.add({k.first, k.second}, c);
  return h;
}

std::map<std::pair<unsigned, uint64_t>, uint64_t> histogram_to_dict(const PatternHistogram& h) {
  std::map<std::pair<unsigned, uint64_t>, uint64_t> out;
  for (const auto& [k, c] : h.entries) out[{k.width, k.mask}] = c;
  return out;
}

}  // namespace

PYBIND11_MODULE(_easic, m) {
  m.doc() = "LUT obfuscation flow for structured ASICs";

  PYBIND11_CONSTINIT static py::gil_safe_call_once_and_store<py::object> error_type;
  error_type.call_once_and_store_result(
      [&]() { return py::object(py::exception<Error>(m, "EasicError", PyExc_RuntimeError)); });
  // Raised with args (code, message).
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const py::object& type = error_type.get_stored();
      PyErr_SetObject(type.ptr(), py::make_tuple(to_string(e.code()), e.what()).ptr());
    }
  });

  py::class_<TruthTable>(m, "TruthTable")
      .def(py::init<unsigned, uint64_t>(), py::arg("width"), py::arg("bits"))
      .def_static("constant", &TruthTable::constant)
      .def_static("variable", &TruthTable::variable)
      .def_static("from_hex", &TruthTable::from_hex)
      .def_property_readonly("width", &TruthTable::width)
      .def_property_readonly("bits", &TruthTable::bits)
      .def("bit", &TruthTable::bit)
      .def("support_size", &TruthTable::support_size)
      .def("depends_on", &TruthTable::depends_on)
      .def("to_hex", &TruthTable::to_hex)
      .def("__invert__", [](const TruthTable& t) { return ~t; })
      .def("__and__", [](const TruthTable& a, const TruthTable& b) { return a & b; })
      .def("__or__", [](const TruthTable& a, const TruthTable& b) { return a | b; })
      .def("__xor__", [](const TruthTable& a, const TruthTable& b) { return a ^ b; })
      .def("__eq__", [](const TruthTable& a, const TruthTable& b) { return a == b; })
      .def("__hash__", [](const TruthTable& t) { return py::hash(py::make_tuple(t.width(), t.bits())); })
      .def("__repr__", [](const TruthTable& t) { return "TruthTable(" + std::to_string(t.width()) + ", " + t.to_hex() + ")"; });

  m.def(
      "permute_inputs",
      [](const TruthTable& t, const std::vector<unsigned>& perm) { return permute_inputs(t, perm); },
      py::arg("tt"), py::arg("perm"));
  m.def(
      "npn_canonicalize",
      [](const TruthTable& t) {
        const NpnResult r = npn_canonicalize(t);
        std::vector<unsigned> perm(r.transform.perm.begin(), r.transform.perm.begin() + r.transform.width);
        return py::make_tuple(r.canonical, perm, r.transform.input_flips, r.transform.output_flip);
      },
      "Canonical representative plus (perm, input_flips, output_flip) mapping it back to the input.");

  py::class_<SopCover>(m, "SopCover")
      .def_readonly("width", &SopCover::width)
      .def("evaluate", &SopCover::evaluate)
      .def("num_literals", &SopCover::num_literals)
      .def_property_readonly("num_cubes", [](const SopCover& c) { return c.cubes.size(); })
      .def("__str__", &SopCover::to_string);
  m.def("isop_minimize", &isop_minimize);

  py::class_<Netlist>(m, "Netlist")
      .def_readonly("name", &Netlist::name)
      .def_property_readonly("num_luts", [](const Netlist& n) { return n.luts().size(); })
      .def_property_readonly("num_instances", [](const Netlist& n) { return n.instances.size(); })
      .def_property_readonly("inputs", [](const Netlist& n) { return lut_names(n, n.pis); })
      .def_property_readonly("outputs", [](const Netlist& n) { return lut_names(n, n.pos); })
      .def("lut_masks",
           [](const Netlist& n) {
             std::map<std::string, TruthTable> out;
             for (InstId id : n.luts()) out[n.inst(id).name] = n.inst(id).mask;
             return out;
           })
      .def("to_verilog", &emit_verilog)
      .def("to_json", &emit_json);
  m.def("parse_verilog", [](const std::string& text) { return parse_verilog(text); });
  m.def("parse_json_netlist", &parse_json_netlist);
  m.def("load_netlist", &load_netlist, py::arg("path"));
  m.def(
      "equivalent",
      [](const Netlist& a, const Netlist& b, uint64_t vectors) { return check_equivalence(a, b, vectors).equivalent; },
      py::arg("a"), py::arg("b"), py::arg("vectors") = 10000);

  py::class_<PyFlowResult>(m, "FlowResult")
      .def_property_readonly("design", [](const PyFlowResult& r) { return r.result.design; })
      .def_property_readonly("row", [](const PyFlowResult& r) { return row_dict(r.result.row); })
      .def_property_readonly("equivalent", [](const PyFlowResult& r) { return r.result.verification.equivalent; })
      .def_property_readonly("key_length", [](const PyFlowResult& r) { return r.result.bitstream.length(); })
      .def_property_readonly("bitstream_hex", [](const PyFlowResult& r) { return r.result.bitstream.to_hex(); })
      .def_property_readonly("netlist", [](const PyFlowResult& r) { return r.result.netlist; })
      .def_property_readonly("hybrid", [](const PyFlowResult& r) { return r.result.hybrid; })
      .def_property_readonly(
          "static_luts",
          [](const PyFlowResult& r) { return lut_names(r.result.netlist, r.result.partition.static_luts); })
      .def_property_readonly(
          "reconfigurable_luts",
          [](const PyFlowResult& r) { return lut_names(r.result.netlist, r.result.partition.reconfigurable); })
      .def_property_readonly("swap_trajectory",
                             [](const PyFlowResult& r) {
                               std::vector<std::pair<double, double>> t;
                               if (r.result.pinswap)
                                 for (const auto& s : r.result.pinswap->trajectory) t.emplace_back(s.wns, s.tns);
                               return t;
                             })
      .def_property_readonly("notices", [](const PyFlowResult& r) { return r.result.notices; })
      .def("artifacts", [](const PyFlowResult& r) {
        py::dict d;
        for (const auto& [k, v] : flow_artifacts(r.result, r.options)) d[py::str(k)] = py::bytes(v);
        return d;
      });

  m.def(
      "run_flow",
      [](const Netlist& netlist, double obf, bool decompose, double pinswap_freq, unsigned swap_cap,
         uint64_t vectors) {
        PyFlowResult out;
        out.options.decompose = decompose;
        out.options.pinswap_freq = pinswap_freq;
        out.options.swap_cap = swap_cap;
        out.options.verify_vectors = vectors;
        const Preprocessed pre = preprocess(netlist, {}, out.options.delay);
        std::unique_ptr<AllImp> table;
        std::unique_ptr<FcHeuristic> heuristic;
        if (decompose) {
          table = std::make_unique<AllImp>(
              AllImp::build(4, FcCostModel::from_models(out.options.area, out.options.delay, 2000.0)));
          heuristic = std::make_unique<FcHeuristic>(*table);
        }
        out.result = run_flow(netlist, pre, obf, out.options, heuristic.get());
        return out;
      },
      py::arg("netlist"), py::arg("obf"), py::arg("decompose") = false, py::arg("pinswap_freq") = 0.0,
      py::arg("swap_cap") = 200, py::arg("vectors") = 10000,
      "Obfuscate, optionally decompose and pin swap, then verify. Paths are enumerated from the netlist.");

  m.def(
      "pattern_histogram",
      [](const Netlist& n, bool static_only) {
        return histogram_to_dict(pattern_histogram(n, static_only ? PatternScope::static_only : PatternScope::all));
      },
      py::arg("netlist"), py::arg("static_only") = true, "{(width, mask): count} over programmed LUTs.");
  m.def(
      "search_space_bits", [](size_t unique) { return search_space_bits(unique); }, py::arg("unique"));
  m.def(
      "pearson_correlate",
      [](const std::map<std::pair<unsigned, uint64_t>, uint64_t>& a,
         const std::map<std::pair<unsigned, uint64_t>, uint64_t>& b) {
        return pearson_correlate(histogram_from_dict(a), histogram_from_dict(b));
      });
  m.def(
      "predict_distribution",
      [](const std::map<std::pair<unsigned, uint64_t>, uint64_t>& h, unsigned degree, double threshold) {
        const DistributionFit f = predict_distribution(histogram_from_dict(h), degree, threshold);
        std::vector<std::pair<unsigned, uint64_t>> outliers;
        for (const auto& k : f.outliers) outliers.emplace_back(k.width, k.mask);
        py::dict d;
        d["coefficients"] = f.coefficients;
        d["residual"] = f.residual;
        d["threshold"] = f.threshold;
        d["profile"] = f.profile;
        d["outliers"] = outliers;
        return d;
      },
      py::arg("histogram"), py::arg("degree") = 3, py::arg("threshold") = 0.0);
  m.def(
      "composition_attack",
      [](const std::map<std::pair<unsigned, uint64_t>, uint64_t>& exposed,
         const std::map<std::string, std::map<std::pair<unsigned, uint64_t>, uint64_t>>& designs) {
        PatternDatabase db;
        for (const auto& [name, h] : designs) db.add(name, histogram_from_dict(h));
        const CompositionReport r = composition_attack(histogram_from_dict(exposed), db);
        std::vector<std::tuple<std::string, double, std::string>> ranking;
        for (const auto& c : r.ranking) ranking.emplace_back(c.design, c.r, c.regime);
        return py::make_tuple(ranking, r.skipped);
      },
      py::arg("exposed"), py::arg("designs"), "(ranking of (design, r, regime), skipped).");
  m.def(
      "export_bench",
      [](const PyFlowResult& r) {
        const BenchCircuit b = export_bench(r.result.netlist, r.result.partition);
        const SatReport s = sat_ratio_report(b);
        py::dict d;
        d["text"] = b.to_text();
        d["key_length"] = b.key_length;
        d["variables"] = s.variables;
        d["clauses"] = s.clauses;
        d["ratio"] = s.ratio();
        return d;
      },
      "Locked bench circuit of a flow result with its CNF size.");
}
