#include "easic/netlist.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "easic/error.hpp"

namespace easic {

const char* to_string(CellKind kind) {
  switch (kind) {
    case CellKind::pi: return "PI";
    case CellKind::po: return "PO";
    case CellKind::lut: return "LUT";
    case CellKind::ff: return "FF";
    case CellKind::mux2: return "MUX2";
    case CellKind::carry: return "CARRY";
    case CellKind::buf: return "BUF";
    case CellKind::ibuf: return "IBUF";
    case CellKind::obuf: return "OBUF";
    case CellKind::inv: return "INV";
    case CellKind::and_gate: return "AND";
    case CellKind::or_gate: return "OR";
    case CellKind::tie0: return "TIE0";
    case CellKind::tie1: return "TIE1";
  }
  return "?";
}

bool is_buffer(CellKind kind) { return kind == CellKind::buf || kind == CellKind::ibuf || kind == CellKind::obuf; }

bool is_combinational(CellKind kind) {
  switch (kind) {
    case CellKind::pi:
    case CellKind::po:
    case CellKind::ff:
    case CellKind::tie0:
    case CellKind::tie1: return false;
    default: return true;
  }
}

uint64_t stable_hash(std::string_view text) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

uint64_t instance_hash(CellKind kind, std::string_view name) {
  if (kind == CellKind::pi || kind == CellKind::po) return stable_hash("port:" + std::string(name));
  return stable_hash(name);
}

NetId Netlist::add_net(const std::string& net_name) {
  require(!net_by_name_.count(net_name), "duplicate net " + net_name);
  const NetId id = static_cast<NetId>(nets.size());
  nets.push_back(Net{net_name, kNone, {}});
  net_by_name_.emplace(net_name, id);
  return id;
}

NetId Netlist::find_or_add_net(const std::string& net_name) {
  auto it = net_by_name_.find(net_name);
  return it != net_by_name_.end() ? it->second : add_net(net_name);
}

InstId Netlist::add_instance(Instance inst) {
  const InstId id = static_cast<InstId>(instances.size());
  if (inst.kind == CellKind::pi) pis.push_back(id);
  if (inst.kind == CellKind::po) pos.push_back(id);
  instances.push_back(std::move(inst));
  return id;
}

std::optional<InstId> Netlist::find_instance(std::string_view inst_name) const {
  auto it = inst_by_name_.find(std::string(inst_name));
  if (it == inst_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<InstId> Netlist::find_port(std::string_view port_name, CellKind kind) const {
  for (InstId p : kind == CellKind::pi ? pis : pos)
    if (instances[p].name == port_name) return p;
  return std::nullopt;
}

std::optional<NetId> Netlist::find_net(std::string_view net_name) const {
  auto it = net_by_name_.find(std::string(net_name));
  if (it == net_by_name_.end()) return std::nullopt;
  return it->second;
}

std::vector<InstId> Netlist::luts() const {
  std::vector<InstId> r;
  for (InstId i = 0; i < instances.size(); ++i)
    if (instances[i].is_lut()) r.push_back(i);
  return r;
}

size_t Netlist::count(CellKind kind) const {
  return static_cast<size_t>(
      std::count_if(instances.begin(), instances.end(), [kind](const Instance& i) { return i.kind == kind; }));
}

std::optional<CellType> lookup_cell_type(const std::string& type) {
  auto numbered = [](const std::string& prefix, unsigned n) {
    std::vector<std::string> v;
    for (unsigned i = 0; i < n; ++i) v.push_back(prefix + std::to_string(i));
    return v;
  };
  auto parse_width = [](const std::string& s) -> unsigned {
    if (s.empty() || s.size() > 2 || !std::all_of(s.begin(), s.end(), ::isdigit)) return 0;
    return static_cast<unsigned>(std::stoul(s));
  };
  if (type.rfind("LUT", 0) == 0) {
    std::string rest = type.substr(3);
    bool cfg = false;
    if (rest.size() > 4 && rest.substr(rest.size() - 4) == "_CFG") {
      cfg = true;
      rest = rest.substr(0, rest.size() - 4);
    }
    const unsigned k = parse_width(rest);
    if (k < 1 || k > 6) return std::nullopt;
    return CellType{CellKind::lut, numbered("I", k), "O", k, cfg};
  }
  if (type == "FF") return CellType{CellKind::ff, {"D"}, "Q"};
  if (type == "MUX2") return CellType{CellKind::mux2, {"I0", "I1", "S"}, "O"};
  if (type == "CARRY") return CellType{CellKind::carry, {"A", "B", "CI"}, "CO"};
  if (type == "BUF") return CellType{CellKind::buf, {"I"}, "O"};
  if (type == "IBUF") return CellType{CellKind::ibuf, {"I"}, "O"};
  if (type == "OBUF") return CellType{CellKind::obuf, {"I"}, "O"};
  if (type == "INV") return CellType{CellKind::inv, {"A"}, "Y"};
  if (type == "TIE0") return CellType{CellKind::tie0, {}, "Y"};
  if (type == "TIE1") return CellType{CellKind::tie1, {}, "Y"};
  for (auto [prefix, kind] : {std::pair{"AND", CellKind::and_gate}, std::pair{"OR", CellKind::or_gate}}) {
    const std::string p = prefix;
    if (type.rfind(p, 0) == 0) {
      const unsigned n = parse_width(type.substr(p.size()));
      if (n >= 2 && n <= 64) return CellType{kind, numbered("A", n), "Y"};
    }
  }
  return std::nullopt;
}

std::string cell_type_name(const Instance& inst) {
  switch (inst.kind) {
    case CellKind::lut: return "LUT" + std::to_string(inst.lut_width()) + (inst.configurable ? "_CFG" : "");
    case CellKind::and_gate: return "AND" + std::to_string(inst.inputs.size());
    case CellKind::or_gate: return "OR" + std::to_string(inst.inputs.size());
    default: return to_string(inst.kind);
  }
}

std::vector<std::string> input_pin_names(const Instance& inst) {
  auto numbered = [&](const char* p) {
    std::vector<std::string> v;
    for (size_t i = 0; i < inst.inputs.size(); ++i) v.push_back(p + std::to_string(i));
    return v;
  };
  switch (inst.kind) {
    case CellKind::lut: return numbered("I");
    case CellKind::ff: return {"D"};
    case CellKind::mux2: return {"I0", "I1", "S"};
    case CellKind::carry: return {"A", "B", "CI"};
    case CellKind::buf:
    case CellKind::ibuf:
    case CellKind::obuf: return {"I"};
    case CellKind::inv: return {"A"};
    case CellKind::and_gate:
    case CellKind::or_gate: return numbered("A");
    default: return {};
  }
}

const char* output_pin_name(const Instance& inst) {
  switch (inst.kind) {
    case CellKind::lut:
    case CellKind::mux2:
    case CellKind::buf:
    case CellKind::ibuf:
    case CellKind::obuf: return "O";
    case CellKind::ff: return "Q";
    case CellKind::carry: return "CO";
    default: return "Y";
  }
}

namespace {

void check_arity(const Instance& inst) {
  const size_t n = inst.inputs.size();
  auto bad = [&](const std::string& what) {
    fail(ErrorCode::width_mismatch, "instance " + inst.name + " (" + to_string(inst.kind) + "): " + what);
  };
  switch (inst.kind) {
    case CellKind::pi:
    case CellKind::tie0:
    case CellKind::tie1:
      if (n != 0) bad("takes no inputs");
      break;
    case CellKind::po:
    case CellKind::ff:
    case CellKind::buf:
    case CellKind::ibuf:
    case CellKind::obuf:
    case CellKind::inv:
      if (n != 1) bad("takes one input");
      break;
    case CellKind::mux2:
    case CellKind::carry:
      if (n != 3) bad("takes three inputs");
      break;
    case CellKind::and_gate:
    case CellKind::or_gate:
      if (n < 2) bad("needs at least two inputs");
      break;
    case CellKind::lut:
      if (n < 1 || n > 6) bad("LUT width must be 1..6");
      if (inst.mask.width() != n) bad("mask width does not match the pin count");
      break;
  }
  if ((inst.kind == CellKind::po) != (inst.output == kNone)) bad("output connection missing");
}

}  // namespace

void Netlist::finalize() {
  // Compact instances.
  std::vector<InstId> inst_map(instances.size(), kNone);
  std::vector<Instance> live;
  live.reserve(instances.size());
  for (InstId i = 0; i < instances.size(); ++i) {
    if (!instances[i].alive) continue;
    inst_map[i] = static_cast<InstId>(live.size());
    live.push_back(std::move(instances[i]));
  }
  instances = std::move(live);
  auto remap_list = [&](std::vector<InstId>& v) {
    std::vector<InstId> out;
    for (InstId i : v)
      if (i < inst_map.size() && inst_map[i] != kNone) out.push_back(inst_map[i]);
    v = std::move(out);
  };
  remap_list(pis);
  remap_list(pos);
  remap_list(config_chain);

  // Compact nets to the referenced ones.
  std::vector<NetId> net_map(nets.size(), kNone);
  std::vector<Net> used;
  auto use = [&](NetId& n) {
    require(n < nets.size(), "net id out of range");
    if (net_map[n] == kNone) {
      net_map[n] = static_cast<NetId>(used.size());
      used.push_back(Net{std::move(nets[n].name), kNone, {}});
    }
    n = net_map[n];
  };
  for (auto& inst : instances) {
    if (inst.output != kNone) use(inst.output);
    for (auto& n : inst.inputs) use(n);
  }
  nets = std::move(used);
  net_by_name_.clear();
  for (NetId n = 0; n < nets.size(); ++n) net_by_name_.emplace(nets[n].name, n);

  // Connectivity and per-instance checks.
  inst_by_name_.clear();
  std::map<uint64_t, InstId> by_hash;
  for (InstId i = 0; i < instances.size(); ++i) {
    Instance& inst = instances[i];
    check_arity(inst);
    inst.hash = instance_hash(inst.kind, inst.name);
    auto [it, fresh] = by_hash.emplace(inst.hash, i);
    if (!fresh) {
      const Instance& other = instances[it->second];
      if (other.name == inst.name) fail(ErrorCode::syntax, "duplicate instance name " + inst.name);
      fail(ErrorCode::hash_collision, "hash collision between " + other.name + " and " + inst.name);
    }
    if (inst.kind != CellKind::pi && inst.kind != CellKind::po) inst_by_name_.emplace(inst.name, i);
    if (inst.output != kNone) {
      Net& n = nets[inst.output];
      if (n.driver != kNone)
        fail(ErrorCode::multiple_drivers,
             "net " + n.name + " is driven by both " + instances[n.driver].name + " and " + inst.name);
      n.driver = i;
    }
    for (uint32_t p = 0; p < inst.inputs.size(); ++p) nets[inst.inputs[p]].fanout.push_back({i, p});
  }
  for (InstId i = 0; i < instances.size(); ++i)
    for (uint32_t p = 0; p < instances[i].inputs.size(); ++p)
      if (nets[instances[i].inputs[p]].driver == kNone)
        fail(ErrorCode::dangling_input, "input " + std::to_string(p) + " of " + instances[i].name + " (net " +
                                            nets[instances[i].inputs[p]].name + ") has no driver");
  compute_topo_order();
}

void Netlist::compute_topo_order() {
  const size_t n = instances.size();
  std::vector<uint32_t> pending(n, 0);
  for (InstId i = 0; i < n; ++i)
    if (is_combinational(instances[i].kind) || instances[i].kind == CellKind::po)
      pending[i] = static_cast<uint32_t>(instances[i].inputs.size());
  std::deque<InstId> ready;
  for (InstId i = 0; i < n; ++i)
    if (pending[i] == 0) ready.push_back(i);
  topo_.clear();
  topo_.reserve(n);
  while (!ready.empty()) {
    const InstId i = ready.front();
    ready.pop_front();
    topo_.push_back(i);
    if (instances[i].output == kNone) continue;
    for (const PinRef& f : nets[instances[i].output].fanout) {
      const CellKind k = instances[f.inst].kind;
      if (!is_combinational(k) && k != CellKind::po) continue;
      if (--pending[f.inst] == 0) ready.push_back(f.inst);
    }
  }
  if (topo_.size() != n) {
    for (InstId i = 0; i < n; ++i)
      if (pending[i] != 0)
        fail(ErrorCode::combinational_cycle, "combinational cycle through instance " + instances[i].name);
  }
}

bool isomorphic(const Netlist& a, const Netlist& b, std::string* why) {
  auto no = [&](const std::string& m) {
    if (why) *why = m;
    return false;
  };
  // A net is identified by its driver (kind class + name).
  auto driver_key = [](const Netlist& nl, NetId n) {
    const Instance& d = nl.instances[nl.nets[n].driver];
    return std::string(d.kind == CellKind::pi ? "port:" : "") + d.name;
  };
  if (a.instances.size() != b.instances.size()) return no("instance counts differ");
  auto inst_key = [](const Instance& inst) {
    const bool port = inst.kind == CellKind::pi || inst.kind == CellKind::po;
    return (port ? std::string(to_string(inst.kind)) + ":" : std::string()) + inst.name;
  };
  std::map<std::string, const Instance*> mb;
  for (const auto& inst : b.instances) mb[inst_key(inst)] = &inst;
  for (const auto& ia : a.instances) {
    auto it = mb.find(inst_key(ia));
    if (it == mb.end()) return no("instance " + ia.name + " missing");
    const Instance& ib = *it->second;
    if (ia.kind != ib.kind) return no("kind of " + ia.name + " differs");
    if (ia.is_lut()) {
      if (ia.configurable != ib.configurable) return no("configurability of " + ia.name + " differs");
      if (!ia.configurable && ia.mask != ib.mask) return no("mask of " + ia.name + " differs");
    }
    if (ia.inputs.size() != ib.inputs.size()) return no("pin count of " + ia.name + " differs");
    for (size_t p = 0; p < ia.inputs.size(); ++p)
      if (driver_key(a, ia.inputs[p]) != driver_key(b, ib.inputs[p]))
        return no("pin " + std::to_string(p) + " of " + ia.name + " differs");
  }
  if (a.config_chain.size() != b.config_chain.size()) return no("configuration chains differ");
  for (size_t i = 0; i < a.config_chain.size(); ++i)
    if (a.instances[a.config_chain[i]].name != b.instances[b.config_chain[i]].name)
      return no("configuration chain order differs");
  return true;
}

}  // namespace easic
