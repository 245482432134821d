#pragma once

#include <string>
#include <vector>

#include "easic/netlist.hpp"
#include "easic/timing.hpp"
#include "easic/truth_table.hpp"

namespace easic {

/// Timing seen by one LUT: arrival per input net, arc delay per pin position,
/// required time at the output.
struct PinTimingContext {
  TruthTable tt;
  std::vector<double> at;
  std::vector<double> dly;
  double rt = 0;
};

struct SwapResult {
  TruthTable new_tt;
  std::vector<unsigned> net_order;  // pin position -> original input index
  double wns = 0;
  double tns = 0;
};

/// Slacks of one assignment: pin p carries net order[p].
/// WNS is the minimum of rt - (at + dly); TNS sums the negative slacks in pin order.
std::pair<double, double> evaluate_order(const PinTimingContext& ctx, const std::vector<unsigned>& order);

/// Best assignment by (WNS, TNS), ties to the lexicographically smallest order.
/// Branch and bound over the k! assignments; the table is permuted to keep the function.
SwapResult swap_pins(const PinTimingContext& ctx);

/// Reconfigurable LUTs on paths longer than the period 1000 / freq_mhz, worst path first, without repeats.
std::vector<InstId> select_swap_candidates(const TimingState& state, const Netlist& netlist, double freq_mhz);

struct SwapStep {
  unsigned index;  // 0 = before any swap
  InstId lut;      // kNone for the initial point
  bool accepted;
  double wns;
  double tns;
};

struct SwapSweepResult {
  Netlist netlist;
  std::vector<SwapStep> trajectory;
  unsigned accepted = 0;
};

/// Tries swap_pins on up to `max_swaps` candidates in order, committing a swap
/// only when the design (WNS, TNS) against the period improves strictly.
SwapSweepResult swap_sweep(const Netlist& netlist, const TimingState& state, const DelayModel& model, double freq_mhz,
                           unsigned max_swaps);

/// "swap_index,wns_ns,tns_ns" rows.
std::string trajectory_csv(const std::vector<SwapStep>& trajectory);

}  // namespace easic
