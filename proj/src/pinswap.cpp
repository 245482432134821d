#include "easic/pinswap.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

#include "easic/error.hpp"

namespace easic {

std::pair<double, double> evaluate_order(const PinTimingContext& ctx, const std::vector<unsigned>& order) {
  double wns = std::numeric_limits<double>::infinity(), tns = 0;
  for (size_t p = 0; p < order.size(); ++p) {
    const double slack = ctx.rt - (ctx.at[order[p]] + ctx.dly[p]);
    wns = std::min(wns, slack);
    if (slack < 0) tns += slack;
  }
  return {wns, tns};
}

namespace {

bool improves(double wns, double tns, double best_wns, double best_tns) {
  return wns > best_wns || (wns == best_wns && tns > best_tns);
}

struct Search {
  const PinTimingContext& ctx;
  unsigned k;
  std::vector<unsigned> order, best;
  std::vector<char> used;
  double best_wns = -std::numeric_limits<double>::infinity();
  double best_tns = -std::numeric_limits<double>::infinity();

  void run(unsigned pin, double wns, double tns) {
    if (pin == k) {
      if (best.empty() || improves(wns, tns, best_wns, best_tns)) {
        best = order;
        best_wns = wns;
        best_tns = tns;
      }
      return;
    }
    for (unsigned net = 0; net < k; ++net) {
      if (used[net]) continue;
      const double slack = ctx.rt - (ctx.at[net] + ctx.dly[pin]);
      const double w = std::min(wns, slack);
      const double t = slack < 0 ? tns + slack : tns;
      // WNS and TNS only get worse deeper down, and later leaves lose ties.
      if (!best.empty() && !improves(w, t, best_wns, best_tns)) continue;
      used[net] = 1;
      order[pin] = net;
      run(pin + 1, w, t);
      used[net] = 0;
    }
  }
};

}  // namespace

SwapResult swap_pins(const PinTimingContext& ctx) {
  const unsigned k = ctx.tt.width();
  require(ctx.at.size() == k && ctx.dly.size() == k, "pin timing context needs one AT and one DLY per input");
  Search s{ctx, k, std::vector<unsigned>(k), {}, std::vector<char>(k, 0)};
  s.run(0, std::numeric_limits<double>::infinity(), 0.0);
  SwapResult r;
  r.net_order = s.best;
  r.wns = s.best_wns;
  r.tns = s.best_tns;
  r.new_tt = permute_inputs(ctx.tt, r.net_order);
  return r;
}

std::vector<InstId> select_swap_candidates(const TimingState& state, const Netlist& nl, double freq_mhz) {
  require(freq_mhz > 0, "target frequency must be positive");
  const double period = 1000.0 / freq_mhz;
  std::vector<uint32_t> violating;
  for (uint32_t i = 0; i < state.paths().size(); ++i)
    if (state.paths()[i].total > period) violating.push_back(i);
  std::stable_sort(violating.begin(), violating.end(),
                   [&](uint32_t a, uint32_t b) { return state.paths()[a].total > state.paths()[b].total; });
  std::vector<InstId> out;
  std::vector<char> seen(nl.instances.size(), 0);
  for (uint32_t id : violating)
    for (const auto& e : state.paths()[id].elements) {
      const Instance& inst = nl.inst(e.inst);
      if (!inst.is_lut() || inst.state != LutState::reconfigurable || seen[e.inst]) continue;
      seen[e.inst] = 1;
      out.push_back(e.inst);
    }
  return out;
}

SwapSweepResult swap_sweep(const Netlist& netlist, const TimingState& state, const DelayModel& model, double freq_mhz,
                           unsigned max_swaps) {
  const double period = 1000.0 / freq_mhz;
  SwapSweepResult r;
  r.netlist = netlist;
  StaResult sta = run_sta(r.netlist, model, period);
  r.trajectory.push_back({0, kNone, false, sta.wns, sta.tns});
  const auto candidates = select_swap_candidates(state, netlist, freq_mhz);
  unsigned index = 0;
  for (InstId lut : candidates) {
    if (index == max_swaps) break;
    ++index;
    const Instance& inst = r.netlist.inst(lut);
    const unsigned k = inst.lut_width();
    PinTimingContext ctx;
    ctx.tt = inst.mask;
    for (unsigned p = 0; p < k; ++p) {
      ctx.at.push_back(sta.arrival[inst.inputs[p]]);
      ctx.dly.push_back(model.lut_arc_delay(k, p));
    }
    ctx.rt = sta.required[inst.output];
    const SwapResult s = swap_pins(ctx);
    bool identity = true;
    for (unsigned p = 0; p < k; ++p) identity = identity && s.net_order[p] == p;
    bool accepted = false;
    if (!identity) {
      Netlist trial = r.netlist;
      Instance& t = trial.instances[lut];
      std::vector<NetId> ins(k);
      for (unsigned p = 0; p < k; ++p) ins[p] = inst.inputs[s.net_order[p]];
      t.inputs = std::move(ins);
      t.mask = s.new_tt;
      trial.finalize();
      StaResult next = run_sta(trial, model, period);
      if (improves(next.wns, next.tns, sta.wns, sta.tns)) {
        r.netlist = std::move(trial);
        sta = std::move(next);
        accepted = true;
        ++r.accepted;
      }
    }
    r.trajectory.push_back({index, lut, accepted, sta.wns, sta.tns});
  }
  return r;
}

std::string trajectory_csv(const std::vector<SwapStep>& trajectory) {
  std::string out = "swap_index,wns_ns,tns_ns\n";
  char buf[96];
  for (const auto& s : trajectory) {
    std::snprintf(buf, sizeof buf, "%u,%.6f,%.6f\n", s.index, s.wns, s.tns);
    out += buf;
  }
  return out;
}

}  // namespace easic
