#include "easic/paths.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include "easic/error.hpp"
#include "easic/timing.hpp"

namespace easic {

void TimedPath::recompute_total() {
  total = 0;
  for (const auto& e : elements) total += e.delay;
}

bool TimedPath::contains(InstId inst) const {
  return std::any_of(elements.begin(), elements.end(), [inst](const PathElement& e) { return e.inst == inst; });
}

void sort_paths(std::vector<TimedPath>& paths, const Netlist& nl) {
  std::stable_sort(paths.begin(), paths.end(), [&](const TimedPath& a, const TimedPath& b) {
    if (a.total != b.total) return a.total < b.total;
    return std::lexicographical_compare(
        a.elements.begin(), a.elements.end(), b.elements.begin(), b.elements.end(),
        [&](const PathElement& x, const PathElement& y) { return nl.inst(x.inst).hash < nl.inst(y.inst).hash; });
  });
}

namespace {

bool is_start(CellKind k) { return k == CellKind::pi || k == CellKind::ff || k == CellKind::tie0 || k == CellKind::tie1; }

}  // namespace

std::vector<TimedPath> enumerate_paths(const Netlist& nl, const DelayModel& model, size_t cap) {
  require(cap >= 1, "path cap must be positive");
  const size_t n = nl.instances.size();
  std::vector<double> delay(n), maxpred(n, 0.0);
  // Unique predecessor instances per instance, in pin order.
  std::vector<std::vector<InstId>> preds(n);
  for (InstId i = 0; i < n; ++i) {
    const Instance& inst = nl.inst(i);
    delay[i] = (inst.kind == CellKind::po) ? 0.0 : model.average_delay(inst);
    for (NetId net : inst.inputs) {
      const InstId d = nl.net(net).driver;
      if (std::find(preds[i].begin(), preds[i].end(), d) == preds[i].end()) preds[i].push_back(d);
    }
  }
  // arrival[v] = longest start-to-v delay including v.
  std::vector<double> arrival(n, 0.0);
  for (InstId v : nl.topo_order()) {
    if (is_start(nl.inst(v).kind)) {
      arrival[v] = delay[v];
      continue;
    }
    double m = 0;
    for (InstId u : preds[v]) m = std::max(m, arrival[u]);
    maxpred[v] = m;
    arrival[v] = m + delay[v];
  }
  // FF as an end point: the longest arrival at its data input.
  auto end_maxpred = [&](InstId e) {
    double m = 0;
    for (InstId u : preds[e]) m = std::max(m, arrival[u]);
    return m;
  };

  struct Node {
    InstId inst;
    uint32_t parent;  // index into arena, kNone for the end point
    uint32_t depth;
    double suffix;    // delay of this node and everything after it
  };
  struct Entry {
    double priority;
    uint32_t depth;
    uint64_t seq;
    uint32_t node;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.priority != b.priority) return a.priority < b.priority;
    if (a.depth != b.depth) return a.depth < b.depth;
    return a.seq > b.seq;
  };

  std::vector<TimedPath> out;
  for (InstId e = 0; e < n; ++e) {
    const CellKind ek = nl.inst(e).kind;
    if (ek != CellKind::po && ek != CellKind::ff) continue;
    std::vector<Node> arena;
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
    uint64_t seq = 0;
    arena.push_back({e, kNone, 0, 0.0});
    heap.push({end_maxpred(e), 0, seq++, 0});
    size_t found = 0;
    while (!heap.empty() && found < cap) {
      const Entry top = heap.top();
      heap.pop();
      const Node node = arena[top.node];
      const bool at_end = node.parent == kNone;
      if (!at_end && is_start(nl.inst(node.inst).kind)) {
        TimedPath p;
        for (uint32_t k = top.node; k != kNone; k = arena[k].parent) {
          const InstId id = arena[k].inst;
          p.elements.push_back({id, arena[k].parent == kNone ? 0.0 : delay[id]});
        }
        p.recompute_total();
        out.push_back(std::move(p));
        ++found;
        continue;
      }
      for (InstId u : preds[node.inst]) {
        const double suffix = node.suffix + delay[u];
        const uint32_t idx = static_cast<uint32_t>(arena.size());
        arena.push_back({u, top.node, node.depth + 1, suffix});
        const double rest = is_start(nl.inst(u).kind) ? 0.0 : maxpred[u];
        heap.push({suffix + rest, node.depth + 1, seq++, idx});
      }
    }
  }
  sort_paths(out, nl);
  return out;
}

Netlist remove_buffers(const Netlist& src) {
  Netlist nl = src;
  // Resolve chains: the net each buffer output ultimately aliases.
  std::vector<NetId> alias(nl.nets.size());
  for (NetId i = 0; i < alias.size(); ++i) alias[i] = i;
  for (InstId id : nl.topo_order()) {
    const Instance& inst = nl.inst(id);
    if (!is_buffer(inst.kind)) continue;
    alias[inst.output] = alias[inst.inputs[0]];
  }
  for (auto& inst : nl.instances) {
    if (is_buffer(inst.kind)) {
      inst.alive = false;
      continue;
    }
    for (auto& in : inst.inputs) in = alias[in];
  }
  nl.finalize();
  return nl;
}

Preprocessed preprocess(const Netlist& netlist, const std::vector<RawPath>& raw, const DelayModel& model, size_t cap) {
  Preprocessed r{remove_buffers(netlist), {}};
  if (raw.empty()) {
    r.paths = enumerate_paths(r.netlist, model, cap);
    return r;
  }
  auto resolve = [](const Netlist& nl, const std::string& name) -> std::optional<InstId> {
    if (name.rfind("port:", 0) == 0) {
      const std::string port = name.substr(5);
      if (auto p = nl.find_port(port, CellKind::pi)) return p;
      return nl.find_port(port, CellKind::po);
    }
    return nl.find_instance(name);
  };
  for (const auto& rp : raw) {
    TimedPath p;
    for (const auto& [name, d] : rp.elements) {
      const auto orig = resolve(netlist, name);
      if (!orig) fail(ErrorCode::unknown_instance, "timing path references unknown instance " + name);
      if (is_buffer(netlist.inst(*orig).kind)) continue;
      const auto id = resolve(r.netlist, name);
      if (!id) fail(ErrorCode::unknown_instance, "instance " + name + " vanished during buffer removal");
      p.elements.push_back({*id, d});
    }
    if (p.elements.empty()) continue;
    p.recompute_total();
    r.paths.push_back(std::move(p));
  }
  sort_paths(r.paths, r.netlist);
  return r;
}

}  // namespace easic
