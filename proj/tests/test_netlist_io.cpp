#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>

#include "easic/error.hpp"
#include "easic/json_io.hpp"
#include "easic/paths.hpp"
#include "easic/simulate.hpp"
#include "easic/timing.hpp"
#include "easic/verilog.hpp"
#include "support/generator.hpp"

using namespace easic;
using easic::testing::GenOptions;
using easic::testing::random_netlist;

namespace {

ErrorCode parse_error(const std::string& text) {
  try {
    parse_verilog(text);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error");
  return ErrorCode::contract;
}

const char* kChain = R"(
module chain (a, b, c, y);
  input a, b, c;
  output y;
  wire n1;
  LUT2 #(.INIT(4'h8)) u1 (.I0(a), .I1(b), .O(n1));
  LUT2 #(.INIT(4'h6)) u2 (.I0(n1), .I1(c), .O(y));
endmodule
)";

// Oracle: all start-to-end instance paths by plain DFS, as total-delay multisets.
std::vector<double> dfs_path_totals(const Netlist& nl, const DelayModel& model) {
  std::vector<double> totals;
  std::function<void(InstId, double, bool)> walk = [&](InstId v, double acc, bool first) {
    const Instance& inst = nl.inst(v);
    const bool start = inst.kind == CellKind::pi || inst.kind == CellKind::ff || inst.kind == CellKind::tie0 ||
                       inst.kind == CellKind::tie1;
    if (!first && start) {
      totals.push_back(acc + model.average_delay(inst));
      return;
    }
    const double here = first ? 0.0 : model.average_delay(inst);
    std::vector<InstId> preds;
    for (NetId n : inst.inputs)
      if (std::find(preds.begin(), preds.end(), nl.net(n).driver) == preds.end()) preds.push_back(nl.net(n).driver);
    for (InstId u : preds) walk(u, acc + here, false);
  };
  for (InstId e = 0; e < nl.instances.size(); ++e)
    if (nl.inst(e).kind == CellKind::po || nl.inst(e).kind == CellKind::ff) walk(e, 0.0, true);
  std::sort(totals.begin(), totals.end());
  return totals;
}

}  // namespace

TEST_CASE("parse a two-LUT chain") {
  const Netlist nl = parse_verilog(kChain);
  CHECK(nl.count(CellKind::lut) == 2);
  CHECK(nl.pis.size() == 3);
  CHECK(nl.pos.size() == 1);
  // Internal nets: everything that is not a port net.
  int internal = 0;
  for (const auto& n : nl.nets)
    if (n.name != "a" && n.name != "b" && n.name != "c" && n.name != "y") ++internal;
  CHECK(internal == 1);
  CHECK(nl.inst(*nl.find_instance("u1")).mask == TruthTable(2, 0x8));
}

TEST_CASE("parser diagnostics are distinct") {
  CHECK(parse_error("module m (a); input a; LUT6 #(.INIT(63'h0)) u (.I0(a),.I1(a),.I2(a),.I3(a),.I4(a),.I5(a),.O(o)); wire o; endmodule") ==
        ErrorCode::width_mismatch);
  CHECK(parse_error("module m (a); input a; wire o LUT1 endmodule") == ErrorCode::syntax);
  CHECK(parse_error("module m (a, y); input a; output y; LUT1 #(.INIT(2'h1)) u (.I0(a), .O(y)); "
                    "LUT1 #(.INIT(2'h2)) v (.I0(a), .O(y)); endmodule") == ErrorCode::multiple_drivers);
  CHECK(parse_error("module m (a, y); input a; output y; wire p, q; LUT2 #(.INIT(4'h8)) u (.I0(a), .I1(q), .O(p)); "
                    "LUT1 #(.INIT(2'h1)) v (.I0(p), .O(q)); assign y = q; endmodule") == ErrorCode::combinational_cycle);
  CHECK(parse_error("module m (a, y); input a; output y; LUT1 #(.INIT(2'h1)) u (.I0(zz), .O(y)); endmodule") ==
        ErrorCode::undeclared_net);
  CHECK(parse_error("module m (a, y); input a; output y; wire w; LUT2 #(.INIT(4'h1)) u (.I0(a), .I1(w), .O(y)); endmodule") ==
        ErrorCode::dangling_input);
  CHECK(parse_error("module m (a, y); input a; output y; FOO u (.A(a), .Y(y)); endmodule") == ErrorCode::unknown_cell);
  try {
    parse_verilog("module m (a);\n  input a;\n  wire ;\nendmodule");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("subset features: buses, escaped names, constants, aliases") {
  const char* text = R"(
module feat (d, \odd.name , y);
  input [3:0] d;
  input \odd.name ;
  output [1:0] y;
  wire t;
  /* block
     comment */
  LUT4 #(.INIT(16'h8000)) \u$1 (.I0(d[0]), .I1(d[1]), .I2(d[2]), .I3(\odd.name ), .O(t));
  LUT2 #(.INIT(4'h6)) u2 (.I0(t), .I1(1'b1), .O(y[0]));
  assign y[1] = d[3];
endmodule)";
  const Netlist nl = parse_verilog(text);
  CHECK(nl.pis.size() == 5);
  CHECK(nl.inst(nl.pis[0]).name == "d[3]");
  CHECK(nl.find_instance("u$1").has_value());
  CHECK(nl.count(CellKind::tie1) == 1);
  const Netlist back = parse_verilog(emit_verilog(nl));
  std::string why;
  CHECK_MESSAGE(isomorphic(nl, back, &why), why);
  CHECK(check_equivalence(nl, back).equivalent);
}

TEST_CASE("round trip on fixtures and random netlists") {
  std::vector<Netlist> designs;
  for (const auto& path : easic::testing::handcrafted_fixture_paths()) designs.push_back(read_verilog_file(path));
  for (uint64_t s = 0; s < 10; ++s) designs.push_back(random_netlist(s, GenOptions{30 + unsigned(s) * 7, 8, 4, 3, 6, true, 2}));
  for (const auto& nl : designs) {
    const std::string text = emit_verilog(nl);
    const Netlist back = parse_verilog(text);
    std::string why;
    CHECK_MESSAGE(isomorphic(nl, back, &why), nl.name << ": " << why);
    CHECK(emit_verilog(back) == text);
    CHECK(check_equivalence(nl, back).equivalent);
    const Netlist js = parse_json_netlist(emit_json(nl));
    CHECK_MESSAGE(isomorphic(nl, js, &why), nl.name << " (json): " << why);
    CHECK(emit_json(js) == emit_json(nl));
  }
}

TEST_CASE("sbm25 fixture mirrors the reference composition") {
  const Netlist nl = read_verilog_file(easic::testing::fixture_path("sbm25"));
  CHECK(nl.count(CellKind::lut) == 25);
  int lut6 = 0;
  for (InstId l : nl.luts()) lut6 += nl.inst(l).lut_width() == 6;
  CHECK(lut6 == 11);
}

TEST_CASE("buffer removal preserves function") {
  const Netlist buffered = read_verilog_file(easic::testing::fixture_path("buffered"));
  const Netlist clean = remove_buffers(buffered);
  CHECK(clean.count(CellKind::buf) + clean.count(CellKind::ibuf) + clean.count(CellKind::obuf) == 0);
  CHECK(check_equivalence(buffered, clean).equivalent);
  for (uint64_t s = 0; s < 20; ++s) {
    const Netlist nl = random_netlist(100 + s, GenOptions{40, 10, 4, 2, 6, true, 6});
    const Netlist nb = remove_buffers(nl);
    CHECK(nb.instances.size() + 6 == nl.instances.size());
    CHECK(check_equivalence(nl, nb).equivalent);
  }
}

TEST_CASE("preprocess resolves ingested paths") {
  const Netlist nl = parse_verilog(R"(
module p (a, y);
  input a;
  output y;
  wire b1, n1, b2, n2;
  IBUF ib (.I(a), .O(b1));
  LUT1 #(.INIT(2'h1)) l1 (.I0(b1), .O(n1));
  BUF bf (.I(n1), .O(b2));
  LUT1 #(.INIT(2'h1)) l2 (.I0(b2), .O(n2));
  OBUF ob (.I(n2), .O(y));
endmodule)");
  const auto raw = parse_paths_json(R"({"paths":[
    {"elements":[["ib",0.01],["l1",0.3],["bf",0.01],["l2",0.0],["ob",0.01]]},
    {"elements":[["l1",0.1]]},
    {"elements":[["l2",0.2]]}]})");
  const auto pre = preprocess(nl, raw, DelayModel::defaults());
  REQUIRE(pre.paths.size() == 3);
  CHECK(pre.paths[0].total == doctest::Approx(0.1));
  CHECK(pre.paths[1].total == doctest::Approx(0.2));
  CHECK(pre.paths[2].total == doctest::Approx(0.3));
  CHECK(pre.paths[2].elements.size() == 2);
  CHECK(cp_sumcp(pre.paths).cp == doctest::Approx(0.3));
  CHECK(check_equivalence(nl, pre.netlist).equivalent);
  const auto bad = parse_paths_json(R"({"paths":[{"elements":[["nope",0.1]]}]})");
  try {
    preprocess(nl, bad, DelayModel::defaults());
    FAIL("expected unknown instance");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::unknown_instance);
  }
  const auto fallback = preprocess(nl, {}, DelayModel::defaults());
  CHECK(fallback.paths.size() == 1);
}

TEST_CASE("enumerate_paths") {
  const DelayModel model = DelayModel::defaults();
  const Netlist one = parse_verilog(R"(
module one (a, b, c, d, e, f);
  input a, b, c, d, e, f;
  wire q0, q1, q2, q3, q4, q5, n, r;
  FF f0 (.D(a), .Q(q0));
  FF f1 (.D(b), .Q(q1));
  FF f2 (.D(c), .Q(q2));
  FF f3 (.D(d), .Q(q3));
  FF f4 (.D(e), .Q(q4));
  FF f5 (.D(f), .Q(q5));
  LUT6 #(.INIT(64'h8000000000000000)) l (.I0(q0), .I1(q1), .I2(q2), .I3(q3), .I4(q4), .I5(q5), .O(n));
  FF fo (.D(n), .Q(r));
endmodule)");
  const auto paths = enumerate_paths(one, model);
  // Six FF->LUT6->FF paths plus the six PI->FF register loads.
  int through = 0;
  for (const auto& p : paths)
    if (p.contains(*one.find_instance("l"))) {
      ++through;
      CHECK(p.total == doctest::Approx(0.295));
    }
  CHECK(through == 6);

  const Netlist diamond = parse_verilog(R"(
module dia (a, y);
  input a;
  output y;
  wire p, q;
  LUT1 #(.INIT(2'h1)) u (.I0(a), .O(p));
  LUT1 #(.INIT(2'h2)) v (.I0(a), .O(q));
  LUT2 #(.INIT(4'h6)) w (.I0(p), .I1(q), .O(y));
endmodule)");
  CHECK(enumerate_paths(diamond, model).size() == 2);

  for (uint64_t s = 0; s < 10; ++s) {
    const Netlist nl = random_netlist(500 + s, GenOptions{20, 6, 3, 2, 4, true, 0});
    const auto got = enumerate_paths(nl, model, 1u << 20);
    std::vector<double> totals;
    for (const auto& p : got) totals.push_back(p.total);
    std::sort(totals.begin(), totals.end());
    const auto want = dfs_path_totals(nl, model);
    REQUIRE(totals.size() == want.size());
    for (size_t i = 0; i < want.size(); ++i) CHECK(totals[i] == doctest::Approx(want[i]));
    // Capped: per end point the worst `cap` totals.
    const auto capped = enumerate_paths(nl, model, 3);
    std::map<InstId, std::vector<double>> per_end;
    for (const auto& p : capped) per_end[p.elements.back().inst].push_back(p.total);
    std::map<InstId, std::vector<double>> all_end;
    for (const auto& p : got) all_end[p.elements.back().inst].push_back(p.total);
    for (auto& [e, v] : all_end) {
      std::sort(v.rbegin(), v.rend());
      auto c = per_end[e];
      std::sort(c.rbegin(), c.rend());
      REQUIRE(c.size() == std::min<size_t>(3, v.size()));
      for (size_t i = 0; i < c.size(); ++i) CHECK(c[i] == doctest::Approx(v[i]));
    }
  }
  for (size_t i = 1; i < enumerate_paths(diamond, model).size(); ++i)
    CHECK(enumerate_paths(diamond, model)[i - 1].total <= enumerate_paths(diamond, model)[i].total);
}
