#include "easic/obfuscator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>

#include <json.hpp>

#include "easic/error.hpp"
#include "easic/isop.hpp"
#include "easic/simulate.hpp"

namespace easic {

double Partition::obfuscation_percent() const {
  if (num_luts() == 0) return 100.0;
  return 100.0 * static_cast<double>(reconfigurable.size()) / static_cast<double>(num_luts());
}

unsigned static_target_from_percent(double obf_percent, size_t num_luts) {
  require(obf_percent >= 0 && obf_percent <= 100, "obfuscation percentage must be within [0, 100]");
  const double exact = (100.0 - obf_percent) * static_cast<double>(num_luts) / 100.0;
  return static_cast<unsigned>(std::floor(exact + 0.5 + 1e-9));
}

namespace {

std::vector<InstId> by_hash(const Netlist& nl, std::vector<InstId> ids) {
  std::sort(ids.begin(), ids.end(), [&](InstId a, InstId b) { return nl.inst(a).hash < nl.inst(b).hash; });
  return ids;
}

}  // namespace

ObfuscationResult obfuscate(const Netlist& nl, const std::vector<TimedPath>& paths, unsigned target_static,
                            const DelayModel& model) {
  const std::vector<InstId> luts = nl.luts();
  require(target_static <= luts.size(), "static LUT target exceeds the LUT count");
  ObfuscationResult r;
  r.netlist = nl;
  r.timing = TimingState(paths, nl.instances.size());
  if (!paths.empty()) {
    r.initial_cp = r.timing.cp();
    r.initial_sumcp = r.timing.sumcp();
  }
  std::vector<char> is_static(nl.instances.size(), 0);
  std::vector<char> active(paths.size(), 1);
  auto& st = r.partition.static_luts;

  auto convert = [&](InstId lut, bool filled) {
    is_static[lut] = 1;
    st.push_back(lut);
    r.netlist.instances[lut].state = LutState::static_logic;
    auto changed = update_timing(r.timing, nl, lut, model);
    r.steps.push_back({lut, paths.empty() ? 0.0 : r.timing.cp(), paths.empty() ? 0.0 : r.timing.sumcp(), filled});
    return changed;
  };

  // Max-heap of (total, path id); entries go stale when a path is retimed or dropped.
  std::priority_queue<std::pair<double, uint32_t>> heap;
  for (uint32_t i = 0; i < paths.size(); ++i) heap.emplace(paths[i].total, i);
  while (st.size() < target_static) {
    while (!heap.empty() && (!active[heap.top().second] ||
                             heap.top().first != r.timing.paths()[heap.top().second].total))
      heap.pop();
    if (heap.empty()) break;
    const uint32_t critical = heap.top().second;
    InstId slowest = kNone;
    double worst = -1;
    for (const auto& e : r.timing.paths()[critical].elements) {
      const Instance& inst = nl.inst(e.inst);
      if (!inst.is_lut()) continue;
      if (e.delay > worst || (e.delay == worst && inst.hash < nl.inst(slowest).hash)) {
        worst = e.delay;
        slowest = e.inst;
      }
    }
    if (slowest == kNone || is_static[slowest]) {
      active[critical] = 0;
      heap.pop();
      continue;
    }
    for (uint32_t id : convert(slowest, false))
      if (active[id]) heap.emplace(r.timing.paths()[id].total, id);
  }

  if (st.size() < target_static) {
    const size_t reached = st.size();
    std::vector<InstId> rest;
    for (InstId l : luts)
      if (!is_static[l]) rest.push_back(l);
    for (InstId l : by_hash(nl, rest)) {
      if (st.size() == target_static) break;
      convert(l, true);
    }
    r.partition.warnings.push_back("timed paths exhausted after " + std::to_string(reached) + " static LUTs; " +
                                   std::to_string(st.size() - reached) + " more converted in hash order");
  }
  std::vector<InstId> re;
  for (InstId l : luts)
    if (!is_static[l]) re.push_back(l);
  r.partition.reconfigurable = by_hash(nl, re);
  if (!paths.empty()) {
    r.final_cp = r.timing.cp();
    r.final_sumcp = r.timing.sumcp();
  }
  return r;
}

AreaModel area_model_from_json(const std::string& text) {
  AreaModel m;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.contains("lut_area")) {
      const auto v = j.at("lut_area").get<std::vector<double>>();
      require(v.size() == 6, "lut_area needs 6 values");
      std::copy(v.begin(), v.end(), m.lut_area.begin());
    }
    m.gate_area = j.value("gate_area", m.gate_area);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::syntax, std::string("area model JSON: ") + e.what());
  }
  for (double a : m.lut_area) require(a >= 0, "areas must be non-negative");
  require(m.gate_area >= 0, "areas must be non-negative");
  return m;
}

std::string area_model_to_json(const AreaModel& m) {
  nlohmann::ordered_json j;
  j["lut_area"] = m.lut_area;
  j["gate_area"] = m.gate_area;
  return j.dump(2) + "\n";
}

unsigned static_gate_count(const TruthTable& mask) {
  const SopCover cover = isop_minimize(mask);
  if (cover.cubes.empty() || cover.cubes[0].is_universal()) return 0;
  uint8_t negated = 0;
  unsigned gates = static_cast<unsigned>(cover.cubes.size()) - 1;
  for (const Cube& c : cover.cubes) {
    negated |= c.care & ~c.value;
    gates += c.num_literals() - 1;
  }
  gates += std::popcount(negated);
  // A lone positive literal still needs a buffer to drive the output net.
  if (gates == 0) gates = 1;
  return gates;
}

AreaReport estimate_area(const Partition& partition, const Netlist& nl, const AreaModel& model) {
  AreaReport r;
  for (InstId l : partition.reconfigurable) r.reconfigurable += model.lut_area[nl.inst(l).lut_width() - 1];
  for (InstId l : partition.static_luts) r.static_logic += static_gate_count(nl.inst(l).mask) * model.gate_area;
  r.total = r.reconfigurable + r.static_logic;
  return r;
}

void decode_static(Netlist& nl, InstId lut) {
  require(lut < nl.instances.size() && nl.inst(lut).is_lut(), "decode_static needs a LUT");
  const Instance src = nl.inst(lut);
  nl.kill(lut);
  const std::string prefix = src.name + "/";
  unsigned net_count = 0, inv_count = 0, and_count = 0, or_count = 0;
  std::vector<InstId> created;
  auto fresh_net = [&] { return nl.add_net(prefix + "n" + std::to_string(net_count++)); };
  auto gate = [&](CellKind kind, std::string name, std::vector<NetId> ins, NetId out) {
    Instance g;
    g.name = prefix + std::move(name);
    g.kind = kind;
    g.inputs = std::move(ins);
    g.output = out;
    created.push_back(nl.add_instance(std::move(g)));
    return out;
  };

  const SopCover cover = isop_minimize(src.mask);
  if (cover.cubes.empty() || cover.cubes[0].is_universal()) {
    gate(cover.cubes.empty() ? CellKind::tie0 : CellKind::tie1, "tie", {}, src.output);
    return;
  }
  std::vector<NetId> negated(src.inputs.size(), kNone);
  auto literal = [&](unsigned var, bool positive) {
    if (positive) return src.inputs[var];
    if (negated[var] == kNone)
      negated[var] = gate(CellKind::inv, "inv" + std::to_string(inv_count++), {src.inputs[var]}, fresh_net());
    return negated[var];
  };
  // Balanced pairwise reduction, matching the depth used by the delay model.
  auto reduce = [&](std::vector<NetId> level, CellKind kind) {
    while (level.size() > 1) {
      std::vector<NetId> next;
      for (size_t i = 0; i + 1 < level.size(); i += 2) {
        const std::string name = kind == CellKind::and_gate ? "and" + std::to_string(and_count++)
                                                            : "or" + std::to_string(or_count++);
        next.push_back(gate(kind, name, {level[i], level[i + 1]}, fresh_net()));
      }
      if (level.size() % 2) next.push_back(level.back());
      level = std::move(next);
    }
    return level[0];
  };
  std::vector<NetId> terms;
  for (const Cube& c : cover.cubes) {
    std::vector<NetId> lits;
    for (unsigned v = 0; v < src.inputs.size(); ++v)
      if ((c.care >> v) & 1) lits.push_back(literal(v, (c.value >> v) & 1));
    terms.push_back(reduce(std::move(lits), CellKind::and_gate));
  }
  const NetId root = reduce(std::move(terms), CellKind::or_gate);
  for (InstId g : created)
    if (nl.instances[g].output == root) {
      nl.instances[g].output = src.output;
      return;
    }
  gate(CellKind::buf, "buf", {root}, src.output);
}

std::string Bitstream::to_hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out;
  for (size_t byte = 0; byte * 8 < bits.size(); ++byte) {
    unsigned v = 0;
    for (unsigned b = 0; b < 8 && byte * 8 + b < bits.size(); ++b) v |= unsigned(bits[byte * 8 + b]) << b;
    out += digits[v >> 4];
    out += digits[v & 15];
  }
  return out;
}

std::string Bitstream::manifest_json() const {
  nlohmann::ordered_json j;
  j["format"] = "easic-bitstream";
  j["version"] = 1;
  j["length"] = length();
  auto& chain_json = j["chain"] = nlohmann::ordered_json::array();
  for (const auto& e : chain)
    chain_json.push_back(nlohmann::ordered_json{{"instance", e.instance}, {"width", e.width}, {"offset", e.offset}});
  j["bits"] = to_hex();
  return j.dump(2) + "\n";
}

Bitstream Bitstream::from_manifest_json(const std::string& text) {
  Bitstream bs;
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.value("format", "") != "easic-bitstream") fail(ErrorCode::syntax, "not an easic bitstream manifest");
    const size_t length = j.at("length").get<size_t>();
    size_t offset = 0;
    for (const auto& e : j.at("chain")) {
      Entry entry{e.at("instance").get<std::string>(), e.at("width").get<unsigned>(), e.at("offset").get<size_t>()};
      if (entry.width < 1 || entry.width > 6) fail(ErrorCode::width_mismatch, "chain LUT width out of range");
      if (entry.offset != offset) fail(ErrorCode::syntax, "chain offsets are not contiguous");
      offset += size_t{1} << entry.width;
      bs.chain.push_back(std::move(entry));
    }
    if (offset != length) fail(ErrorCode::width_mismatch, "bitstream length does not match the chain");
    const std::string hex = j.at("bits").get<std::string>();
    if (hex.size() != (length + 7) / 8 * 2) fail(ErrorCode::width_mismatch, "bit payload length does not match");
    bs.bits.resize(length);
    for (size_t i = 0; i < length; ++i) {
      const char c = hex[(i / 8) * 2 + ((i % 8) < 4 ? 1 : 0)];
      unsigned nibble;
      if (c >= '0' && c <= '9') nibble = c - '0';
      else if (c >= 'a' && c <= 'f') nibble = c - 'a' + 10;
      else if (c >= 'A' && c <= 'F') nibble = c - 'A' + 10;
      else fail(ErrorCode::syntax, "bad hex digit in bit payload");
      bs.bits[i] = (nibble >> (i % 4)) & 1;
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::syntax, std::string("bitstream manifest: ") + e.what());
  }
  return bs;
}

Bitstream gen_bitstream(const Partition& partition, const Netlist& nl) {
  require(!partition.reconfigurable.empty(), "nothing to program");
  Bitstream bs;
  for (InstId l : by_hash(nl, partition.reconfigurable)) {
    const Instance& inst = nl.inst(l);
    bs.chain.push_back({inst.name, inst.lut_width(), bs.bits.size()});
    for (unsigned i = 0; i < inst.mask.num_bits(); ++i) bs.bits.push_back(inst.mask.bit(i));
  }
  return bs;
}

Netlist make_hybrid(const Netlist& netlist, const Partition& partition) {
  Netlist out = netlist;
  out.config_chain.clear();
  for (InstId l : by_hash(netlist, partition.reconfigurable)) {
    Instance& inst = out.instances[l];
    inst.configurable = true;
    inst.programmed = false;
    inst.state = LutState::reconfigurable;
    inst.mask = TruthTable::constant(inst.lut_width(), false);
    out.config_chain.push_back(l);
  }
  for (InstId l : partition.static_luts) decode_static(out, l);
  out.finalize();
  return out;
}

Netlist program(const Netlist& hybrid, const Bitstream& bs) {
  if (hybrid.config_chain.size() != bs.chain.size())
    fail(ErrorCode::width_mismatch, "bitstream has " + std::to_string(bs.chain.size()) + " LUTs, chain has " +
                                        std::to_string(hybrid.config_chain.size()));
  Netlist out = hybrid;
  for (size_t i = 0; i < bs.chain.size(); ++i) {
    Instance& inst = out.instances[out.config_chain[i]];
    const auto& e = bs.chain[i];
    if (inst.name != e.instance || inst.lut_width() != e.width)
      fail(ErrorCode::width_mismatch, "chain position " + std::to_string(i) + " is " + inst.name + ", bitstream has " +
                                          e.instance);
    uint64_t bits = 0;
    for (unsigned b = 0; b < (1u << e.width); ++b) bits |= uint64_t(bs.bits[e.offset + b]) << b;
    inst.mask = TruthTable(e.width, bits);
    inst.programmed = true;
  }
  return out;
}

std::string gen_case_constraints(const Bitstream& bs) {
  std::string out;
  for (const auto& e : bs.chain)
    for (unsigned i = 0; i < (1u << e.width); ++i)
      out += "set_case " + e.instance + "/cfg[" + std::to_string(i) + "] " + (bs.bits[e.offset + i] ? "1" : "0") + "\n";
  return out;
}

VerificationReport verify_equivalence(const Netlist& original, const Netlist& hybrid, const Bitstream& bs,
                                      uint64_t vectors) {
  const Netlist programmed = program(hybrid, bs);
  const EquivalenceReport eq = check_equivalence(original, programmed, vectors);
  return {eq.equivalent, eq.vectors, eq.exhaustive, eq.mismatch_output, eq.counterexample};
}

}  // namespace easic
