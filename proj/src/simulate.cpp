#include "easic/simulate.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "easic/error.hpp"

namespace easic {

uint64_t eval_lut_words(const TruthTable& mask, std::span<const uint64_t> in) {
  // Shannon expansion on the highest input, bottom-up over the table.
  const unsigned k = mask.width();
  uint64_t level[64];
  for (unsigned m = 0; m < (1u << k); ++m) level[m] = mask.bit(m) ? ~uint64_t{0} : 0;
  for (unsigned v = 0; v < k; ++v) {
    const unsigned half = 1u << (k - v - 1);
    const uint64_t x = in[v];
    for (unsigned m = 0; m < half; ++m) level[m] = (level[2 * m] & ~x) | (level[2 * m + 1] & x);
  }
  return level[0];
}

Simulator::Simulator(const Netlist& nl) : nl_(&nl) {
  for (InstId p : nl.pis) {
    input_names_.push_back(nl.inst(p).name);
    input_nets_.push_back(nl.inst(p).output);
  }
  for (InstId p : nl.pos) {
    output_names_.push_back(nl.inst(p).name);
    output_nets_.push_back(nl.inst(p).inputs[0]);
  }
  for (const auto& inst : nl.instances) {
    if (inst.kind != CellKind::ff) continue;
    input_names_.push_back("ff:" + inst.name);
    input_nets_.push_back(inst.output);
    output_names_.push_back("ff:" + inst.name);
    output_nets_.push_back(inst.inputs[0]);
  }
  for (const auto& inst : nl.instances)
    if (inst.is_lut() && !inst.programmed)
      fail(ErrorCode::contract, "LUT " + inst.name + " is not programmed; apply a bitstream first");
}

std::vector<uint64_t> Simulator::run(std::span<const uint64_t> inputs) const {
  require(inputs.size() == input_nets_.size(), "stimulus width does not match the simulator inputs");
  const Netlist& nl = *nl_;
  std::vector<uint64_t> val(nl.nets.size(), 0);
  for (size_t i = 0; i < inputs.size(); ++i) val[input_nets_[i]] = inputs[i];
  uint64_t ins[64];
  for (InstId id : nl.topo_order()) {
    const Instance& inst = nl.inst(id);
    if (inst.output == kNone) continue;
    const size_t n = inst.inputs.size();
    for (size_t p = 0; p < n && p < 64; ++p) ins[p] = val[inst.inputs[p]];
    uint64_t out = 0;
    switch (inst.kind) {
      case CellKind::pi:
      case CellKind::ff: continue;
      case CellKind::lut: out = eval_lut_words(inst.mask, std::span<const uint64_t>(ins, n)); break;
      case CellKind::mux2: out = (ins[0] & ~ins[2]) | (ins[1] & ins[2]); break;
      case CellKind::carry: out = (ins[0] & ins[1]) | (ins[0] & ins[2]) | (ins[1] & ins[2]); break;
      case CellKind::buf:
      case CellKind::ibuf:
      case CellKind::obuf: out = ins[0]; break;
      case CellKind::inv: out = ~ins[0]; break;
      case CellKind::and_gate:
        out = ~uint64_t{0};
        for (NetId in : inst.inputs) out &= val[in];
        break;
      case CellKind::or_gate:
        out = 0;
        for (NetId in : inst.inputs) out |= val[in];
        break;
      case CellKind::tie0: out = 0; break;
      case CellKind::tie1: out = ~uint64_t{0}; break;
      case CellKind::po: break;
    }
    val[inst.output] = out;
  }
  std::vector<uint64_t> res(output_nets_.size());
  for (size_t i = 0; i < res.size(); ++i) res[i] = val[output_nets_[i]];
  return res;
}

EquivalenceReport check_equivalence(const Netlist& a, const Netlist& b, uint64_t vectors, uint64_t seed,
                                    unsigned exhaustive_limit) {
  const Simulator sa(a), sb(b);
  auto sorted = [](std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  };
  if (sorted(sa.input_names()) != sorted(sb.input_names()))
    fail(ErrorCode::contract, "netlists have different inputs (ports or FFs)");
  if (sorted(sa.output_names()) != sorted(sb.output_names()))
    fail(ErrorCode::contract, "netlists have different outputs (ports or FFs)");
  std::map<std::string, size_t> b_in, b_out;
  for (size_t i = 0; i < sb.input_names().size(); ++i) b_in[sb.input_names()[i]] = i;
  for (size_t i = 0; i < sb.output_names().size(); ++i) b_out[sb.output_names()[i]] = i;

  const size_t ni = sa.input_names().size();
  EquivalenceReport rep;
  rep.exhaustive = ni <= exhaustive_limit;
  std::mt19937_64 rng(seed);
  std::vector<uint64_t> wa(ni), wb(ni);
  auto compare = [&](uint64_t lanes) {
    for (size_t i = 0; i < ni; ++i) wb[b_in[sa.input_names()[i]]] = wa[i];
    const auto oa = sa.run(wa), ob = sb.run(wb);
    for (size_t o = 0; o < oa.size(); ++o) {
      const uint64_t diff = (oa[o] ^ ob[b_out[sa.output_names()[o]]]) & lanes;
      if (!diff) continue;
      const unsigned lane = static_cast<unsigned>(__builtin_ctzll(diff));
      rep.equivalent = false;
      rep.mismatch_output = sa.output_names()[o];
      for (size_t i = 0; i < ni; ++i) rep.counterexample.emplace_back(sa.input_names()[i], (wa[i] >> lane) & 1);
      return false;
    }
    return true;
  };
  if (rep.exhaustive) {
    const uint64_t total = uint64_t{1} << ni;
    for (uint64_t base = 0; base < total; base += 64) {
      const uint64_t count = std::min<uint64_t>(64, total - base);
      for (size_t i = 0; i < ni; ++i) {
        uint64_t w = 0;
        for (uint64_t l = 0; l < count; ++l)
          if (((base + l) >> i) & 1) w |= uint64_t{1} << l;
        wa[i] = w;
      }
      const uint64_t lanes = count == 64 ? ~uint64_t{0} : ((uint64_t{1} << count) - 1);
      rep.vectors += count;
      if (!compare(lanes)) return rep;
    }
    return rep;
  }
  // Corner vectors first (lanes 0 and 1 of the first word), then random lanes.
  uint64_t remaining = vectors + 2;
  bool first = true;
  while (remaining > 0) {
    const uint64_t count = std::min<uint64_t>(64, remaining);
    for (size_t i = 0; i < ni; ++i) {
      wa[i] = rng();
      if (first) wa[i] = (wa[i] & ~uint64_t{3}) | 2;  // lane 0 all-zeros, lane 1 all-ones
    }
    first = false;
    const uint64_t lanes = count == 64 ? ~uint64_t{0} : ((uint64_t{1} << count) - 1);
    rep.vectors += count;
    remaining -= count;
    if (!compare(lanes)) return rep;
  }
  return rep;
}

}  // namespace easic
