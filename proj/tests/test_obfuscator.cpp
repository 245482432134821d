#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "easic/error.hpp"
#include "easic/obfuscator.hpp"
#include "easic/simulate.hpp"
#include "easic/verilog.hpp"
#include "support/generator.hpp"

using namespace easic;
using easic::testing::GenOptions;
using easic::testing::random_netlist;

namespace {

// Oracle: the same greedy loop with linear scans over a plain path list.
std::vector<InstId> naive_obfuscate(const Netlist& nl, std::vector<TimedPath> paths, unsigned target,
                                    const DelayModel& model) {
  std::vector<InstId> st;
  std::vector<char> is_static(nl.instances.size(), 0);
  std::vector<char> active(paths.size(), 1);
  while (st.size() < target) {
    int best = -1;
    for (size_t i = 0; i < paths.size(); ++i)
      if (active[i] && (best < 0 || paths[i].total >= paths[best].total)) best = static_cast<int>(i);
    if (best < 0) break;
    InstId slow = kNone;
    for (const auto& e : paths[best].elements) {
      if (!nl.inst(e.inst).is_lut()) continue;
      if (slow == kNone) {
        slow = e.inst;
        continue;
      }
      double ds = 0;
      for (const auto& f : paths[best].elements)
        if (f.inst == slow) ds = f.delay;
      if (e.delay > ds || (e.delay == ds && nl.inst(e.inst).hash < nl.inst(slow).hash)) slow = e.inst;
    }
    if (slow == kNone || is_static[slow]) {
      active[best] = 0;
      continue;
    }
    is_static[slow] = 1;
    st.push_back(slow);
    const double d = model.static_lut_delay(nl.inst(slow).mask);
    for (auto& p : paths) {
      for (auto& e : p.elements)
        if (e.inst == slow) e.delay = std::min(e.delay, d);
      p.recompute_total();
    }
  }
  return st;
}

Netlist three_lut_chain() {
  return parse_verilog(R"(
module c3 (a, b, c, d, e, f, y);
  input a, b, c, d, e, f;
  output y;
  wire n6, n4;
  LUT6 #(.INIT(64'h8000000000000001)) big (.I0(a), .I1(b), .I2(c), .I3(d), .I4(e), .I5(f), .O(n6));
  LUT4 #(.INIT(16'h8001)) mid (.I0(n6), .I1(a), .I2(b), .I3(c), .O(n4));
  LUT3 #(.INIT(8'h96)) small (.I0(n4), .I1(d), .I2(e), .O(y));
endmodule)");
}

}  // namespace

TEST_CASE("percentage to static count") {
  CHECK(static_target_from_percent(100, 25) == 0);
  CHECK(static_target_from_percent(0, 25) == 25);
  CHECK(static_target_from_percent(50, 25) == 13);
  CHECK(static_target_from_percent(90, 25) == 3);  // 2.5 rounds up
  CHECK(static_target_from_percent(60, 10) == 4);
  CHECK_THROWS_AS(static_target_from_percent(101, 4), Error);
}

TEST_CASE("greedy conversion on a three-LUT path") {
  const Netlist nl = three_lut_chain();
  const DelayModel model = DelayModel::defaults();
  const auto paths = enumerate_paths(nl, model);
  auto r = obfuscate(nl, paths, 1, model);
  REQUIRE(r.partition.static_luts.size() == 1);
  CHECK(nl.inst(r.partition.static_luts[0]).name == "big");
  CHECK(r.partition.reconfigurable.size() == 2);
  CHECK(r.partition.obfuscation_percent() == doctest::Approx(200.0 / 3));

  r = obfuscate(nl, paths, 0, model);
  CHECK(r.partition.static_luts.empty());
  CHECK(r.final_sumcp == r.initial_sumcp);
  r = obfuscate(nl, paths, 3, model);
  CHECK(r.partition.reconfigurable.empty());
  CHECK(r.final_cp < r.initial_cp);
  CHECK_THROWS_AS(obfuscate(nl, paths, 4, model), Error);
}

TEST_CASE("heap-driven loop agrees with the naive loop") {
  const DelayModel model = DelayModel::defaults();
  for (uint64_t s = 0; s < 12; ++s) {
    const Netlist nl = random_netlist(900 + s, GenOptions{40, 10, 4, 3, 6, true, 0});
    auto paths = enumerate_paths(nl, model, 16);
    const unsigned n = static_cast<unsigned>(nl.luts().size());
    for (unsigned target : {1u, n / 4, n / 2, n}) {
      const auto r = obfuscate(nl, paths, target, model);
      const auto want = naive_obfuscate(nl, paths, target, model);
      const std::vector<InstId> got(r.partition.static_luts.begin(), r.partition.static_luts.begin() + want.size());
      CHECK(got == want);
      CHECK(r.partition.static_luts.size() == target);
      CHECK(r.partition.warnings.empty() == (want.size() == target));
      double prev = r.initial_sumcp;
      for (const auto& step : r.steps) {
        CHECK(step.sumcp <= prev + 1e-12);
        prev = step.sumcp;
      }
    }
  }
}

TEST_CASE("LUTs missed by the path list are filled in hash order") {
  const Netlist nl = three_lut_chain();
  const DelayModel model = DelayModel::defaults();
  const auto r = obfuscate(nl, {}, 2, model);
  CHECK(r.partition.static_luts.size() == 2);
  CHECK(r.partition.warnings.size() == 1);
  CHECK(nl.inst(r.partition.static_luts[0]).hash < nl.inst(r.partition.static_luts[1]).hash);
  CHECK(std::all_of(r.steps.begin(), r.steps.end(), [](const auto& s) { return s.filled; }));
}

TEST_CASE("decode_static realizes the mask") {
  auto build = [](const TruthTable& mask) {
    Netlist nl;
    Instance lut;
    lut.name = "u";
    lut.kind = CellKind::lut;
    lut.mask = mask;
    for (unsigned i = 0; i < mask.width(); ++i) {
      Instance pi;
      pi.name = "i" + std::to_string(i);
      pi.kind = CellKind::pi;
      pi.output = nl.add_net(pi.name);
      lut.inputs.push_back(pi.output);
      nl.add_instance(std::move(pi));
    }
    lut.output = nl.add_net("o");
    Instance po;
    po.name = "o";
    po.kind = CellKind::po;
    po.inputs = {lut.output};
    nl.add_instance(std::move(lut));
    nl.add_instance(std::move(po));
    nl.finalize();
    return nl;
  };
  auto gates = [](const Netlist& nl) {
    return nl.count(CellKind::inv) + nl.count(CellKind::and_gate) + nl.count(CellKind::or_gate) +
           nl.count(CellKind::buf);
  };
  {
    const Netlist nl = build(TruthTable(2, 0x8));
    Netlist d = nl;
    decode_static(d, *d.find_instance("u"));
    d.finalize();
    CHECK(d.count(CellKind::and_gate) == 1);
    CHECK(gates(d) == 1);
  }
  for (uint64_t bits : {0ull, 0xfull}) {
    Netlist d = build(TruthTable(2, bits));
    decode_static(d, *d.find_instance("u"));
    d.finalize();
    CHECK(gates(d) == 0);
    CHECK(d.count(bits ? CellKind::tie1 : CellKind::tie0) == 1);
    CHECK(check_equivalence(build(TruthTable(2, bits)), d).equivalent);
  }
  std::mt19937_64 rng(17);
  for (int i = 0; i < 200; ++i) {
    const unsigned k = 1 + i % 6;
    const TruthTable tt(k, rng() & TruthTable::mask_for(k));
    const Netlist nl = build(tt);
    Netlist d = nl;
    decode_static(d, *d.find_instance("u"));
    d.finalize();
    CHECK(d.count(CellKind::lut) == 0);
    const auto eq = check_equivalence(nl, d);
    CHECK(eq.exhaustive);
    CHECK(eq.equivalent);
    CHECK(gates(d) == static_gate_count(tt));
  }
}

TEST_CASE("area estimate") {
  const AreaModel model = AreaModel::defaults();
  const Netlist nl = three_lut_chain();
  Partition p;
  p.reconfigurable = {*nl.find_instance("big")};
  auto a = estimate_area(p, nl, model);
  CHECK(a.reconfigurable == doctest::Approx(957.60));
  CHECK(a.static_logic == 0);
  CHECK(estimate_area(Partition{}, Netlist{}, model).total == 0);
  p.static_luts = {*nl.find_instance("mid"), *nl.find_instance("small")};
  a = estimate_area(p, nl, model);
  // mid = x0 x1 x2 x3 + x0' x1' x2' x3': 4 INV, 6 AND2, 1 OR2. small = 3-input XOR: 3 INV, 8 AND2, 3 OR2.
  CHECK(a.static_logic == doctest::Approx((11 + 14) * 1.44));
  CHECK(a.total == doctest::Approx(a.reconfigurable + a.static_logic));
  const AreaModel back = area_model_from_json(area_model_to_json(model));
  CHECK(back.lut_area == model.lut_area);
}

TEST_CASE("bitstream layout") {
  Netlist nl = parse_verilog(R"(
module b (a, c, y, z);
  input a, c;
  output y, z;
  LUT2 #(.INIT(4'h6)) x (.I0(a), .I1(c), .O(y));
  LUT1 #(.INIT(2'h1)) w (.I0(a), .O(z));
endmodule)");
  Partition p;
  p.reconfigurable = {*nl.find_instance("x")};
  Bitstream bs = gen_bitstream(p, nl);
  CHECK(bs.bits == std::vector<bool>{false, true, true, false});
  CHECK(bs.to_hex() == "06");
  p.reconfigurable = {*nl.find_instance("x"), *nl.find_instance("w")};
  bs = gen_bitstream(p, nl);
  CHECK(bs.length() == 6);
  const Bitstream back = Bitstream::from_manifest_json(bs.manifest_json());
  CHECK(back.bits == bs.bits);
  CHECK(back.chain.size() == 2);
  CHECK_THROWS_AS(gen_bitstream(Partition{}, nl), Error);

  Partition lut2;
  Netlist and2 = parse_verilog("module a (p, q, y); input p, q; output y; LUT2 #(.INIT(4'h8)) g (.I0(p), .I1(q), .O(y)); endmodule");
  lut2.reconfigurable = {*and2.find_instance("g")};
  const std::string cases = gen_case_constraints(gen_bitstream(lut2, and2));
  CHECK(cases == "set_case g/cfg[0] 0\nset_case g/cfg[1] 0\nset_case g/cfg[2] 0\nset_case g/cfg[3] 1\n");

  const Netlist sbm = read_verilog_file(easic::testing::fixture_path("sbm25"));
  Partition all;
  all.reconfigurable = sbm.luts();
  size_t expect = 0;
  for (InstId l : sbm.luts()) expect += size_t{1} << sbm.inst(l).lut_width();
  const Bitstream sb = gen_bitstream(all, sbm);
  CHECK(sb.length() == expect);
  CHECK(sb.length() >= 11 * 64);
  std::istringstream lines(gen_case_constraints(sb));
  size_t count = 0;
  for (std::string line; std::getline(lines, line);) ++count;
  CHECK(count == expect);
}

TEST_CASE("hybrid netlists reproduce the original once programmed") {
  const DelayModel model = DelayModel::defaults();
  for (const auto& path : easic::testing::handcrafted_fixture_paths()) {
    const Netlist nl = read_verilog_file(path);
    const auto paths = enumerate_paths(nl, model);
    const unsigned n = static_cast<unsigned>(nl.luts().size());
    for (unsigned target : {0u, n / 3, n - 1}) {
      const auto r = obfuscate(nl, paths, target, model);
      const Netlist hybrid = make_hybrid(nl, r.partition);
      CHECK(hybrid.count(CellKind::lut) == r.partition.reconfigurable.size());
      const Bitstream bs = gen_bitstream(r.partition, nl);
      const auto v = verify_equivalence(nl, hybrid, bs);
      CHECK_MESSAGE(v.equivalent, path << " target " << target);
      // Through Verilog: masks are gone, the chain survives.
      const Netlist reread = parse_verilog(emit_verilog(hybrid));
      CHECK(reread.config_chain.size() == bs.chain.size());
      for (InstId c : reread.config_chain) CHECK_FALSE(reread.inst(c).programmed);
      CHECK(verify_equivalence(nl, reread, bs).equivalent);
      CHECK_THROWS_AS(Simulator(reread).run({}), Error);
    }
  }
}

TEST_CASE("a flipped key bit is detected") {
  const Netlist nl = read_verilog_file(easic::testing::fixture_path("parity16"));
  Partition p;
  p.reconfigurable = nl.luts();
  std::sort(p.reconfigurable.begin(), p.reconfigurable.end(),
            [&](InstId a, InstId b) { return nl.inst(a).hash < nl.inst(b).hash; });
  const Netlist hybrid = make_hybrid(nl, p);
  Bitstream bs = gen_bitstream(p, nl);
  CHECK(verify_equivalence(nl, hybrid, bs).equivalent);
  for (size_t i = 0; i < bs.length(); i += 7) {
    Bitstream bad = bs;
    bad.bits[i] = !bad.bits[i];
    const auto v = verify_equivalence(nl, hybrid, bad);
    CHECK_FALSE(v.equivalent);
    CHECK_FALSE(v.counterexample.empty());
  }
}

TEST_CASE("reconfigurable area grows with obfuscation") {
  const Netlist nl = read_verilog_file(easic::testing::fixture_path("sbm25"));
  const DelayModel model = DelayModel::defaults();
  const auto paths = enumerate_paths(nl, model);
  double prev_area = -1, prev_sumcp = 0;
  for (int pct = 0; pct <= 100; pct += 10) {
    const auto r = obfuscate(nl, paths, static_target_from_percent(pct, nl.luts().size()), model);
    const auto area = estimate_area(r.partition, nl, AreaModel::defaults());
    CHECK(area.reconfigurable > prev_area);
    if (pct) CHECK(r.final_sumcp >= prev_sumcp);
    prev_area = area.reconfigurable;
    prev_sumcp = r.final_sumcp;
  }
}
