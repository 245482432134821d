#include "easic/flow.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "easic/error.hpp"
#include "easic/json_io.hpp"
#include "easic/verilog.hpp"

namespace easic {

using nlohmann::ordered_json;

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  std::string s = buf;
  // No "-0.000" in reports.
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string ns(double v) { return fixed(v, 3); }
std::string um2(double v) { return fixed(v, 2); }

}  // namespace

// ---------------------------------------------------------------- config

void RunConfig::validate() const {
  require(!netlist.empty(), "no input netlist");
  require(!obf.empty(), "no obfuscation level");
  for (double p : obf) require(p >= 0 && p <= 100, "obfuscation level " + fixed(p, 2) + " outside [0, 100]");
  require(pinswap_freq >= 0, "pin-swap frequency must not be negative");
  require(delay_weight >= 0, "delay weight must not be negative");
  require(!output_dir.empty(), "no output directory");
}

std::string RunConfig::to_json() const {
  ordered_json j{{"netlist", netlist},       {"timing", timing},
                 {"obf", obf},               {"delay_model", delay_model},
                 {"area_model", area_model}, {"decompose", decompose},
                 {"pinswap_freq", pinswap_freq}, {"swap_cap", swap_cap},
                 {"output_dir", output_dir}, {"fc_cache", fc_cache},
                 {"delay_weight", delay_weight}, {"verify_vectors", verify_vectors}};
  return j.dump(2) + "\n";
}

RunConfig RunConfig::from_json(const std::string& text) {
  RunConfig c;
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::syntax, std::string("config JSON: ") + e.what());
  }
  if (!j.is_object()) fail(ErrorCode::syntax, "config must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "netlist") c.netlist = v.get<std::string>();
      else if (key == "timing") c.timing = v.get<std::string>();
      else if (key == "obf") c.obf = v.get<std::vector<double>>();
      else if (key == "delay_model") c.delay_model = v.get<std::string>();
      else if (key == "area_model") c.area_model = v.get<std::string>();
      else if (key == "decompose") c.decompose = v.get<bool>();
      else if (key == "pinswap_freq") c.pinswap_freq = v.get<double>();
      else if (key == "swap_cap") c.swap_cap = v.get<unsigned>();
      else if (key == "output_dir") c.output_dir = v.get<std::string>();
      else if (key == "fc_cache") c.fc_cache = v.get<std::string>();
      else if (key == "delay_weight") c.delay_weight = v.get<double>();
      else if (key == "verify_vectors") c.verify_vectors = v.get<uint64_t>();
      else fail(ErrorCode::syntax, "unknown config key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::syntax, std::string("config: ") + e.what());
  }
  return c;
}

Netlist load_netlist(const std::string& path) {
  const bool json = path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
  return json ? parse_json_netlist(read_text_file(path)) : read_verilog_file(path);
}

// ---------------------------------------------------------------- flow

FlowResult run_flow(const Netlist& original, const Preprocessed& pre, double obf_percent, const FlowOptions& opt,
                    FcHeuristic* heuristic) {
  require(obf_percent >= 0 && obf_percent <= 100, "obfuscation level outside [0, 100]");
  require(!opt.decompose || heuristic, "decomposition needs a heuristic table");
  FlowResult r;
  r.design = original.name;
  r.obf_percent = obf_percent;
  const size_t n = pre.netlist.luts().size();
  r.obfuscation = obfuscate(pre.netlist, pre.paths, static_target_from_percent(obf_percent, n), opt.delay);
  r.netlist = r.obfuscation.netlist;
  r.partition = r.obfuscation.partition;
  for (const auto& w : r.partition.warnings) r.notices.push_back(w);

  if (opt.decompose) {
    DecomposedNetlist d = decompose_netlist(r.netlist, r.partition, *heuristic);
    r.netlist = std::move(d.netlist);
    r.partition = std::move(d.partition);
  }
  if (opt.pinswap_freq > 0) {
    const TimingState state(enumerate_paths(r.netlist, opt.delay), r.netlist.instances.size());
    r.pinswap = swap_sweep(r.netlist, state, opt.delay, opt.pinswap_freq, opt.swap_cap);
    r.netlist = r.pinswap->netlist;
    r.notices.push_back("pin swap: " + std::to_string(r.pinswap->accepted) + " of " +
                        std::to_string(r.pinswap->trajectory.size() - 1) + " attempts accepted");
  }
  if (!r.partition.reconfigurable.empty()) r.bitstream = gen_bitstream(r.partition, r.netlist);
  r.hybrid = make_hybrid(r.netlist, r.partition);
  r.verification = verify_equivalence(original, r.hybrid, r.bitstream, opt.verify_vectors);

  r.row.obf_percent = obf_percent;
  r.row.cp = r.obfuscation.final_cp;
  r.row.sumcp = r.obfuscation.final_sumcp;
  r.row.area = estimate_area(r.partition, r.netlist, opt.area);
  r.row.luts_re = r.partition.reconfigurable.size();
  r.row.luts_st = r.partition.static_luts.size();
  return r;
}

std::string report_csv_header() { return "obf_pct,cp_ns,sumcp_ns,a_re_um2,a_st_um2,a_um2,luts_re,luts_st\n"; }

std::string report_csv_row(const ReportRow& row) {
  return fixed(row.obf_percent, 2) + "," + ns(row.cp) + "," + ns(row.sumcp) + "," + um2(row.area.reconfigurable) + "," +
         um2(row.area.static_logic) + "," + um2(row.area.total) + "," + std::to_string(row.luts_re) + "," +
         std::to_string(row.luts_st) + "\n";
}

std::string sweep_csv(const std::vector<ReportRow>& rows) {
  std::string out = report_csv_header();
  for (const auto& r : rows) out += report_csv_row(r);
  return out;
}

std::string check_sweep_monotone(std::vector<ReportRow> rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow& a, const ReportRow& b) { return a.obf_percent < b.obf_percent; });
  for (size_t i = 1; i < rows.size(); ++i) {
    const ReportRow &lo = rows[i - 1], &hi = rows[i];
    // More reconfigurable LUTs never make a path faster; the tolerance only absorbs summation order.
    if (hi.sumcp + 1e-9 < lo.sumcp)
      return "sumCP drops from " + ns(lo.sumcp) + " at " + fixed(lo.obf_percent, 2) + "% to " + ns(hi.sumcp) + " at " +
             fixed(hi.obf_percent, 2) + "%";
    if (hi.area.reconfigurable + 1e-9 < lo.area.reconfigurable)
      return "A_re drops from " + um2(lo.area.reconfigurable) + " at " + fixed(lo.obf_percent, 2) + "% to " +
             um2(hi.area.reconfigurable) + " at " + fixed(hi.obf_percent, 2) + "%";
  }
  return {};
}

// ---------------------------------------------------------------- artifacts

namespace {

std::string human_report(const FlowResult& r, const FlowOptions& opt) {
  std::string s;
  auto line = [&](const std::string& k, const std::string& v) {
    s += k;
    s.append(k.size() < 22 ? 22 - k.size() : 1, ' ');
    s += v + "\n";
  };
  line("design", r.design);
  line("obfuscation", fixed(r.obf_percent, 2) + " % (" + fixed(r.partition.obfuscation_percent(), 2) + " % achieved)");
  line("LUTs reconfigurable", std::to_string(r.row.luts_re));
  line("LUTs static", std::to_string(r.row.luts_st));
  line("CP initial", ns(r.obfuscation.initial_cp) + " ns");
  line("CP final", ns(r.row.cp) + " ns");
  line("sumCP initial", ns(r.obfuscation.initial_sumcp) + " ns");
  line("sumCP final", ns(r.row.sumcp) + " ns");
  line("A_re", um2(r.row.area.reconfigurable) + " um2");
  line("A_st", um2(r.row.area.static_logic) + " um2");
  line("A", um2(r.row.area.total) + " um2");
  line("key length", std::to_string(r.bitstream.length()) + " bits");
  line("decomposition", opt.decompose ? "on" : "off");
  if (r.pinswap) {
    const auto& t = r.pinswap->trajectory;
    line("pin swap target", fixed(opt.pinswap_freq, 2) + " MHz");
    line("WNS", ns(t.front().wns) + " -> " + ns(t.back().wns) + " ns");
    line("TNS", ns(t.front().tns) + " -> " + ns(t.back().tns) + " ns");
  } else {
    line("pin swap", "off");
  }
  line("verification", std::string(r.verification.equivalent ? "equivalent" : "MISMATCH") + " (" +
                           std::to_string(r.verification.vectors) + " vectors" +
                           (r.verification.exhaustive ? ", exhaustive" : "") + ")");
  for (const auto& n : r.notices) line("note", n);
  return s;
}

std::string timing_report(const FlowResult& r, size_t top = 20) {
  const Netlist& nl = r.obfuscation.netlist;
  auto sorted = r.obfuscation.timing.sorted(nl);
  std::string s = "# worst paths after obfuscation (ns)\n";
  size_t rank = 0;
  for (auto it = sorted.rbegin(); it != sorted.rend() && rank < top; ++it, ++rank) {
    s += "path " + std::to_string(rank + 1) + " total " + ns(it->total) + "\n";
    for (const auto& e : it->elements) {
      const Instance& inst = nl.inst(e.inst);
      std::string tag = inst.is_lut() ? (inst.state == LutState::static_logic ? " static" : " reconfigurable") : "";
      s += "  " + ns(e.delay) + "  " + inst.name + " (" + cell_type_name(inst) + tag + ")\n";
    }
  }
  return s;
}

}  // namespace

std::map<std::string, std::string> flow_artifacts(const FlowResult& r, const FlowOptions& opt) {
  std::map<std::string, std::string> files;
  files["hybrid.v"] = emit_verilog(r.hybrid);
  files["netlist.json"] = emit_json(r.netlist);
  files["bitstream.hex"] = r.bitstream.to_hex() + "\n";
  files["bitstream.json"] = r.bitstream.manifest_json();
  files["case.tcl"] = gen_case_constraints(r.bitstream);
  files["report.txt"] = human_report(r, opt);
  files["report.csv"] = report_csv_header() + report_csv_row(r.row);
  files["timing.rpt"] = timing_report(r);
  if (r.pinswap) files["pinswap.csv"] = trajectory_csv(r.pinswap->trajectory);
  return files;
}

}  // namespace easic
