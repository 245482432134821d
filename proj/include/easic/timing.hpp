#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "easic/netlist.hpp"
#include "easic/paths.hpp"

namespace easic {

/// Abstract pre-layout delay model. Wire delay is zero.
struct DelayModel {
  std::array<double, 6> lut_avg{0.049, 0.052, 0.119, 0.192, 0.257, 0.295};
  /// lut_arc[k-1][pin]; non-increasing in pin (the highest pin is nearest the output).
  std::array<std::vector<double>, 6> lut_arc;
  double ff_delay = 0.0;  // clock-to-output
  double mux_delay = 0.05;
  double carry_delay = 0.04;
  double alpha = 0.5;        // static replacement scale
  double gate_delay = 0.03;  // per static logic level (INV, AND2, OR2)

  /// Average values above with arcs spread linearly from 1.3x to 0.7x of the mean.
  static DelayModel defaults();
  /// Throws contract errors for negative delays, non-monotone arcs or a mean mismatch.
  void validate() const;

  double lut_arc_delay(unsigned k, unsigned pin) const;
  /// Delay of a LUT converted to static gates:
  /// min(fastest arc, max(alpha * avg, depth * gate_delay)).
  double static_lut_delay(const TruthTable& mask) const;
  /// Pin-independent delay used when enumerating paths.
  double average_delay(const Instance& inst) const;
  /// Arc delay through `pin` of `inst`; static LUTs use static_lut_delay.
  double arc_delay(const Instance& inst, unsigned pin) const;
};

DelayModel delay_model_from_json(const std::string& text);
std::string delay_model_to_json(const DelayModel& model);

struct CpSumCp {
  double cp;
  double sumcp;
};

/// Exact max and sum (in list order). Empty input is an error.
CpSumCp cp_sumcp(const std::vector<TimedPath>& paths);

/// The timed path list with an instance -> path index.
///
/// Path ids are positions in the list as given (normally sorted ascending),
/// and stay fixed while delays are updated.
class TimingState {
 public:
  TimingState() = default;
  TimingState(std::vector<TimedPath> paths, size_t num_instances);

  const std::vector<TimedPath>& paths() const { return paths_; }
  const std::vector<uint32_t>& paths_through(InstId inst) const;
  double cp() const { return cp_; }
  double sumcp() const { return sumcp_; }
  /// Paths re-sorted ascending for reporting.
  std::vector<TimedPath> sorted(const Netlist& netlist) const;

  /// Sets the arc delay of `inst` on every path through it to min(current, delay).
  /// Returns the ids of paths whose total changed.
  std::vector<uint32_t> set_instance_delay(InstId inst, double delay);

 private:
  std::vector<TimedPath> paths_;
  std::vector<std::vector<uint32_t>> index_;
  double cp_ = 0, sumcp_ = 0;
  void refresh_totals();
};

/// Retimes every path through `lut` with its static replacement delay.
std::vector<uint32_t> update_timing(TimingState& state, const Netlist& netlist, InstId lut, const DelayModel& model);

/// Arrival/required analysis on the netlist with per-pin arcs, used by pin swapping.
struct StaResult {
  std::vector<double> arrival;  // per net
  std::vector<double> required;  // per net (min over fanout)
  double wns = 0;               // min over endpoints of required - arrival
  double tns = 0;               // sum of negative endpoint slacks
  std::vector<std::pair<InstId, double>> endpoint_slack;  // PO / FF data inputs
};

StaResult run_sta(const Netlist& netlist, const DelayModel& model, double required_time);

}  // namespace easic
