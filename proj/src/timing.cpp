#include "easic/timing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "easic/error.hpp"
#include "easic/isop.hpp"

namespace easic {

DelayModel DelayModel::defaults() {
  DelayModel m;
  for (unsigned k = 1; k <= 6; ++k) {
    auto& arcs = m.lut_arc[k - 1];
    arcs.resize(k);
    if (k == 1) {
      arcs[0] = m.lut_avg[0];
      continue;
    }
    double sum = 0;
    for (unsigned j = 0; j < k; ++j) {
      arcs[j] = 1.3 - 0.6 * j / (k - 1);
      sum += arcs[j];
    }
    for (auto& a : arcs) a *= m.lut_avg[k - 1] * k / sum;
  }
  return m;
}

void DelayModel::validate() const {
  require(alpha > 0 && alpha <= 1, "alpha must be in (0, 1]");
  require(ff_delay >= 0 && mux_delay >= 0 && carry_delay >= 0 && gate_delay >= 0, "delays must be non-negative");
  for (unsigned k = 1; k <= 6; ++k) {
    const auto& arcs = lut_arc[k - 1];
    require(lut_avg[k - 1] >= 0, "LUT delays must be non-negative");
    require(arcs.size() == k, "LUT" + std::to_string(k) + " needs " + std::to_string(k) + " arc delays");
    for (unsigned j = 0; j < k; ++j) {
      require(arcs[j] >= 0, "arc delays must be non-negative");
      if (j) require(arcs[j] <= arcs[j - 1], "arc delays must be non-increasing in pin index");
    }
    const double mean = std::accumulate(arcs.begin(), arcs.end(), 0.0) / k;
    require(std::abs(mean - lut_avg[k - 1]) <= 1e-9, "arc mean of LUT" + std::to_string(k) + " differs from its average");
  }
}

double DelayModel::lut_arc_delay(unsigned k, unsigned pin) const {
  require(k >= 1 && k <= 6, "LUT width out of range");
  require(pin < k, "pin index out of range");
  return lut_arc[k - 1][pin];
}

double DelayModel::static_lut_delay(const TruthTable& mask) const {
  const unsigned k = mask.width();
  const auto& arcs = lut_arc[k - 1];
  const double fastest = *std::min_element(arcs.begin(), arcs.end());
  const double logic = sop_depth(isop_minimize(mask)) * gate_delay;
  return std::min(fastest, std::max(alpha * lut_avg[k - 1], logic));
}

double DelayModel::average_delay(const Instance& inst) const {
  switch (inst.kind) {
    case CellKind::lut:
      return inst.state == LutState::static_logic ? static_lut_delay(inst.mask) : lut_avg[inst.lut_width() - 1];
    case CellKind::ff: return ff_delay;
    case CellKind::mux2: return mux_delay;
    case CellKind::carry: return carry_delay;
    case CellKind::inv:
    case CellKind::and_gate:
    case CellKind::or_gate: return gate_delay;
    default: return 0.0;
  }
}

double DelayModel::arc_delay(const Instance& inst, unsigned pin) const {
  if (inst.kind == CellKind::lut && inst.state == LutState::reconfigurable) return lut_arc_delay(inst.lut_width(), pin);
  return average_delay(inst);
}

DelayModel delay_model_from_json(const std::string& text) {
  DelayModel m = DelayModel::defaults();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::syntax, std::string("delay model JSON: ") + e.what());
  }
  try {
    bool arcs_given = false;
    if (j.contains("lut_avg")) {
      const auto v = j.at("lut_avg").get<std::vector<double>>();
      require(v.size() == 6, "lut_avg needs 6 values");
      std::copy(v.begin(), v.end(), m.lut_avg.begin());
    }
    if (j.contains("lut_arc")) {
      const auto v = j.at("lut_arc").get<std::vector<std::vector<double>>>();
      require(v.size() == 6, "lut_arc needs 6 rows");
      for (unsigned k = 0; k < 6; ++k) m.lut_arc[k] = v[k];
      arcs_given = true;
    }
    if (!arcs_given) {
      // Spread the (possibly overridden) averages with the default profile.
      const DelayModel base = DelayModel::defaults();
      for (unsigned k = 0; k < 6; ++k)
        for (auto& a : m.lut_arc[k] = base.lut_arc[k]) a *= m.lut_avg[k] / base.lut_avg[k];
    }
    m.ff_delay = j.value("ff_delay", m.ff_delay);
    m.mux_delay = j.value("mux_delay", m.mux_delay);
    m.carry_delay = j.value("carry_delay", m.carry_delay);
    m.alpha = j.value("alpha", m.alpha);
    m.gate_delay = j.value("gate_delay", m.gate_delay);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::syntax, std::string("delay model schema: ") + e.what());
  }
  m.validate();
  return m;
}

std::string delay_model_to_json(const DelayModel& m) {
  nlohmann::ordered_json j;
  j["lut_avg"] = m.lut_avg;
  j["lut_arc"] = m.lut_arc;
  j["ff_delay"] = m.ff_delay;
  j["mux_delay"] = m.mux_delay;
  j["carry_delay"] = m.carry_delay;
  j["alpha"] = m.alpha;
  j["gate_delay"] = m.gate_delay;
  return j.dump(2) + "\n";
}

CpSumCp cp_sumcp(const std::vector<TimedPath>& paths) {
  if (paths.empty()) fail(ErrorCode::empty_input, "path list is empty");
  CpSumCp r{-std::numeric_limits<double>::infinity(), 0};
  for (const auto& p : paths) {
    r.cp = std::max(r.cp, p.total);
    r.sumcp += p.total;
  }
  return r;
}

TimingState::TimingState(std::vector<TimedPath> paths, size_t num_instances)
    : paths_(std::move(paths)), index_(num_instances) {
  for (uint32_t id = 0; id < paths_.size(); ++id) {
    for (const auto& e : paths_[id].elements) {
      require(e.inst < num_instances, "path references an instance outside the netlist");
      auto& list = index_[e.inst];
      if (list.empty() || list.back() != id) list.push_back(id);
    }
  }
  refresh_totals();
}

const std::vector<uint32_t>& TimingState::paths_through(InstId inst) const {
  if (inst >= index_.size()) fail(ErrorCode::unknown_instance, "instance id " + std::to_string(inst) + " is unknown");
  return index_[inst];
}

std::vector<TimedPath> TimingState::sorted(const Netlist& netlist) const {
  std::vector<TimedPath> s = paths_;
  sort_paths(s, netlist);
  return s;
}

void TimingState::refresh_totals() {
  cp_ = 0;
  sumcp_ = 0;
  for (const auto& p : paths_) {
    cp_ = std::max(cp_, p.total);
    sumcp_ += p.total;
  }
}

std::vector<uint32_t> TimingState::set_instance_delay(InstId inst, double delay) {
  std::vector<uint32_t> changed;
  for (uint32_t id : paths_through(inst)) {
    TimedPath& p = paths_[id];
    bool touched = false;
    for (auto& e : p.elements)
      if (e.inst == inst && delay < e.delay) {
        e.delay = delay;
        touched = true;
      }
    if (touched) {
      p.recompute_total();
      changed.push_back(id);
    }
  }
  if (!changed.empty()) refresh_totals();
  return changed;
}

std::vector<uint32_t> update_timing(TimingState& state, const Netlist& netlist, InstId lut, const DelayModel& model) {
  if (lut >= netlist.instances.size() || !netlist.inst(lut).is_lut())
    fail(ErrorCode::unknown_instance, "update_timing needs a LUT instance");
  return state.set_instance_delay(lut, model.static_lut_delay(netlist.inst(lut).mask));
}

StaResult run_sta(const Netlist& nl, const DelayModel& model, double required_time) {
  StaResult r;
  const double ninf = -std::numeric_limits<double>::infinity();
  r.arrival.assign(nl.nets.size(), ninf);
  r.required.assign(nl.nets.size(), std::numeric_limits<double>::infinity());
  const auto& order = nl.topo_order();
  for (InstId id : order) {
    const Instance& inst = nl.inst(id);
    if (inst.output == kNone) continue;
    double at = 0;
    if (inst.kind == CellKind::ff) {
      at = model.ff_delay;
    } else if (is_combinational(inst.kind)) {
      at = ninf;
      for (unsigned p = 0; p < inst.inputs.size(); ++p)
        at = std::max(at, r.arrival[inst.inputs[p]] + model.arc_delay(inst, p));
    }
    r.arrival[inst.output] = at;
  }
  // Endpoints: PO inputs and FF data inputs.
  for (InstId id = 0; id < nl.instances.size(); ++id) {
    const Instance& inst = nl.inst(id);
    if (inst.kind != CellKind::po && inst.kind != CellKind::ff) continue;
    const NetId n = inst.inputs[0];
    r.required[n] = std::min(r.required[n], required_time);
    r.endpoint_slack.emplace_back(id, required_time - r.arrival[n]);
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Instance& inst = nl.inst(*it);
    if (!is_combinational(inst.kind) || inst.output == kNone) continue;
    const double rt = r.required[inst.output];
    for (unsigned p = 0; p < inst.inputs.size(); ++p)
      r.required[inst.inputs[p]] = std::min(r.required[inst.inputs[p]], rt - model.arc_delay(inst, p));
  }
  r.wns = std::numeric_limits<double>::infinity();
  for (const auto& [id, s] : r.endpoint_slack) {
    r.wns = std::min(r.wns, s);
    if (s < 0) r.tns += s;
  }
  if (r.endpoint_slack.empty()) r.wns = 0;
  return r;
}

}  // namespace easic
