#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "easic/error.hpp"
#include "easic/isop.hpp"
#include "easic/paths.hpp"
#include "easic/timing.hpp"
#include "easic/verilog.hpp"
#include "support/generator.hpp"

using namespace easic;
using easic::testing::GenOptions;
using easic::testing::random_netlist;

TEST_CASE("default delay model") {
  const DelayModel m = DelayModel::defaults();
  CHECK_NOTHROW(m.validate());
  for (unsigned k = 1; k <= 6; ++k) {
    const auto& arcs = m.lut_arc[k - 1];
    CHECK(std::accumulate(arcs.begin(), arcs.end(), 0.0) / k == doctest::Approx(m.lut_avg[k - 1]).epsilon(1e-12));
    CHECK(std::is_sorted(arcs.rbegin(), arcs.rend()));
  }
  CHECK(m.lut_avg[5] == doctest::Approx(0.295));
  DelayModel bad = m;
  std::swap(bad.lut_arc[3][0], bad.lut_arc[3][3]);
  CHECK_THROWS_AS(bad.validate(), Error);
  const DelayModel back = delay_model_from_json(delay_model_to_json(m));
  CHECK(back.lut_arc == m.lut_arc);
  const DelayModel scaled = delay_model_from_json(R"({"lut_avg":[0.1,0.2,0.3,0.4,0.5,0.6]})");
  CHECK(std::accumulate(scaled.lut_arc[5].begin(), scaled.lut_arc[5].end(), 0.0) / 6 == doctest::Approx(0.6));
  CHECK_THROWS_AS(delay_model_from_json("{"), Error);
}

TEST_CASE("static replacement delay") {
  const DelayModel m = DelayModel::defaults();
  std::mt19937_64 rng(3);
  for (int i = 0; i < 300; ++i) {
    const unsigned k = 1 + rng() % 6;
    const TruthTable tt(k, rng() & TruthTable::mask_for(k));
    const double fastest = m.lut_arc[k - 1].back();
    const double logic = sop_depth(isop_minimize(tt)) * m.gate_delay;
    const double d = m.static_lut_delay(tt);
    CHECK(d == doctest::Approx(std::min(fastest, std::max(0.5 * m.lut_avg[k - 1], logic))));
    CHECK(d <= m.lut_avg[k - 1]);
  }
}

TEST_CASE("cp and sumcp") {
  CHECK_THROWS_AS(cp_sumcp({}), Error);
  std::vector<TimedPath> paths(3);
  paths[0].total = 0.3;
  paths[1].total = 0.1;
  paths[2].total = 0.2;
  const auto r = cp_sumcp(paths);
  CHECK(r.cp == doctest::Approx(0.3));
  CHECK(r.sumcp == doctest::Approx(0.6));
}

TEST_CASE("incremental update matches full recompute") {
  const DelayModel model = DelayModel::defaults();
  for (uint64_t s = 0; s < 8; ++s) {
    Netlist nl = random_netlist(700 + s, GenOptions{30, 8, 4, 2, 6, true, 0});
    TimingState state(enumerate_paths(nl, model, 1u << 20), nl.instances.size());
    std::mt19937_64 rng(s);
    auto luts = nl.luts();
    std::shuffle(luts.begin(), luts.end(), rng);
    for (size_t i = 0; i < luts.size() / 2; ++i) {
      update_timing(state, nl, luts[i], model);
      nl.instances[luts[i]].state = LutState::static_logic;
      const auto full = enumerate_paths(nl, model, 1u << 20);
      const auto r = cp_sumcp(full);
      CHECK(state.cp() == doctest::Approx(r.cp));
      CHECK(state.sumcp() == doctest::Approx(r.sumcp));
    }
    // A second update of the same LUT changes nothing.
    CHECK(update_timing(state, nl, luts[0], model).empty());
  }
  Netlist nl = random_netlist(9, GenOptions{});
  TimingState state(enumerate_paths(nl, model), nl.instances.size());
  CHECK_THROWS_AS(update_timing(state, nl, nl.pis[0], model), Error);
}

TEST_CASE("arrival and required times") {
  const DelayModel m = DelayModel::defaults();
  const Netlist nl = parse_verilog(R"(
module chain (a, b, c, y);
  input a, b, c;
  output y;
  wire n1;
  LUT2 #(.INIT(4'h8)) u1 (.I0(a), .I1(b), .O(n1));
  LUT2 #(.INIT(4'h6)) u2 (.I0(c), .I1(n1), .O(y));
endmodule)");
  const double arrive = m.lut_arc[1][0] + m.lut_arc[1][1];
  auto r = run_sta(nl, m, 1.0);
  CHECK(r.wns == doctest::Approx(1.0 - arrive));
  CHECK(r.tns == 0);
  r = run_sta(nl, m, 0.05);
  CHECK(r.wns == doctest::Approx(0.05 - arrive));
  CHECK(r.tns == doctest::Approx(0.05 - arrive));
  // Required time at input a: through u1 pin 0 then u2 pin 1.
  CHECK(r.required[*nl.find_net("a")] == doctest::Approx(0.05 - arrive));
  CHECK(r.required[*nl.find_net("c")] == doctest::Approx(0.05 - m.lut_arc[1][0]));
}
