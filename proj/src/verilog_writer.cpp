#include <algorithm>
#include <map>
#include <regex>
#include <set>
#include <sstream>

#include "easic/error.hpp"
#include "easic/verilog.hpp"

namespace easic {

namespace {

const std::set<std::string>& keywords() {
  static const std::set<std::string> k = {"module", "endmodule", "input", "output", "wire", "assign", "inout", "reg"};
  return k;
}

bool simple_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$')) return false;
  return !keywords().count(s);
}

struct BitName {
  std::string base;
  long index;
};

std::optional<BitName> split_bit(const std::string& s) {
  static const std::regex re(R"(^([A-Za-z_][A-Za-z0-9_$]*)\[(\d+)\]$)");
  std::smatch m;
  if (!std::regex_match(s, m, re) || keywords().count(m[1].str())) return std::nullopt;
  return BitName{m[1].str(), std::stol(m[2].str())};
}

// A declaration item: a scalar name or a contiguous run of bits of one bus.
struct DeclItem {
  std::string name;  // scalar or bus base
  std::optional<std::pair<long, long>> range;
};

class Namer {
 public:
  // `groups` lists names in declaration order per direction.
  void plan(const std::vector<std::vector<std::string>>& groups) {
    std::map<std::string, int> runs;
    std::set<std::string> scalars;
    for (const auto& g : groups) {
      std::optional<BitName> last;
      long step = 0;
      for (const auto& n : g) {
        const auto b = split_bit(n);
        if (!b) {
          scalars.insert(n);
          last.reset();
          continue;
        }
        const long diff = last && last->base == b->base ? b->index - last->index : 0;
        if (diff != 0 && std::abs(diff) == 1 && (step == 0 || diff == step)) {
          step = diff;
        } else {
          runs[b->base]++;
          step = 0;
        }
        last = b;
      }
    }
    for (const auto& [base, n] : runs)
      if (n == 1 && !scalars.count(base)) buses_.insert(base);
  }

  std::string ref(const std::string& name) const {
    if (const auto b = split_bit(name); b && buses_.count(b->base)) return name;
    return verilog_name(name);
  }

  std::vector<DeclItem> items(const std::vector<std::string>& names) const {
    std::vector<DeclItem> out;
    for (const auto& n : names) {
      const auto b = split_bit(n);
      if (b && buses_.count(b->base)) {
        if (!out.empty() && out.back().range && out.back().name == b->base) {
          out.back().range->second = b->index;
          continue;
        }
        out.push_back({b->base, std::pair{b->index, b->index}});
      } else {
        out.push_back({verilog_name(n), std::nullopt});
      }
    }
    return out;
  }

 private:
  std::set<std::string> buses_;
};

std::string pin_list(const std::vector<std::pair<std::string, std::string>>& pins) {
  std::string s;
  for (size_t i = 0; i < pins.size(); ++i) {
    if (i) s += ", ";
    s += "." + pins[i].first + "(" + pins[i].second + ")";
  }
  return s;
}

}  // namespace

std::string verilog_name(const std::string& name) { return simple_identifier(name) ? name : "\\" + name + " "; }

std::string emit_verilog(const Netlist& nl) {
  std::vector<std::string> ins, outs, wires;
  std::set<std::string> port_names;
  for (InstId p : nl.pis) ins.push_back(nl.inst(p).name);
  for (InstId p : nl.pos) outs.push_back(nl.inst(p).name);
  port_names.insert(ins.begin(), ins.end());
  port_names.insert(outs.begin(), outs.end());
  for (const auto& n : nl.nets)
    if (!port_names.count(n.name)) wires.push_back(n.name);

  // Configuration chain nets.
  std::set<std::string> taken;
  for (const auto& n : nl.nets) taken.insert(n.name);
  for (const auto& p : port_names) taken.insert(p);
  auto fresh = [&](const std::string& base) {
    std::string n = base;
    for (int s = 1; taken.count(n); ++s) n = base + "_" + std::to_string(s);
    taken.insert(n);
    return n;
  };
  std::vector<std::string> chain_nets;
  std::string cfg_sin, cfg_en, cfg_sout;
  if (!nl.config_chain.empty()) {
    cfg_sin = fresh("cfg_sin");
    cfg_en = fresh("cfg_en");
    cfg_sout = fresh("cfg_sout");
    chain_nets.push_back(cfg_sin);
    for (size_t i = 1; i < nl.config_chain.size(); ++i) chain_nets.push_back(fresh("cfg_chain_" + std::to_string(i)));
    chain_nets.push_back(cfg_sout);
  }

  Namer namer;
  namer.plan({ins, outs, wires});
  std::ostringstream os;
  os << "module " << verilog_name(nl.name) << " (";
  {
    std::vector<std::string> heads;
    for (const auto& list : {ins, outs})
      for (const auto& item : namer.items(list)) heads.push_back(item.name);
    if (!cfg_sin.empty()) {
      heads.push_back(cfg_sin);
      heads.push_back(cfg_en);
      heads.push_back(cfg_sout);
    }
    for (size_t i = 0; i < heads.size(); ++i) os << (i ? ", " : "") << heads[i];
  }
  os << ");\n";
  auto declare = [&](const char* kw, const std::vector<std::string>& names) {
    for (const auto& item : namer.items(names)) {
      os << "  " << kw << " ";
      if (item.range) os << "[" << item.range->first << ":" << item.range->second << "] ";
      os << item.name << ";\n";
    }
  };
  declare("input", ins);
  declare("output", outs);
  if (!cfg_sin.empty()) os << "  input " << cfg_sin << ";\n  input " << cfg_en << ";\n  output " << cfg_sout << ";\n";
  declare("wire", wires);
  for (size_t i = 1; i + 1 < chain_nets.size(); ++i) os << "  wire " << chain_nets[i] << ";\n";

  std::map<InstId, size_t> chain_pos;
  for (size_t i = 0; i < nl.config_chain.size(); ++i) chain_pos[nl.config_chain[i]] = i;
  for (InstId id = 0; id < nl.instances.size(); ++id) {
    const Instance& inst = nl.inst(id);
    if (inst.kind == CellKind::pi || inst.kind == CellKind::po) continue;
    std::vector<std::pair<std::string, std::string>> pins;
    const auto names = input_pin_names(inst);
    for (size_t p = 0; p < inst.inputs.size(); ++p) pins.emplace_back(names[p], namer.ref(nl.net(inst.inputs[p]).name));
    pins.emplace_back(output_pin_name(inst), namer.ref(nl.net(inst.output).name));
    os << "  " << cell_type_name(inst) << " ";
    if (inst.is_lut() && !inst.configurable) os << "#(.INIT(" << inst.mask.to_hex() << ")) ";
    if (inst.is_lut() && inst.configurable) {
      auto it = chain_pos.find(id);
      require(it != chain_pos.end(), "configurable LUT " + inst.name + " is not on the configuration chain");
      pins.emplace_back("SIN", chain_nets[it->second]);
      pins.emplace_back("SOUT", chain_nets[it->second + 1]);
      pins.emplace_back("EN", cfg_en);
    }
    os << verilog_name(inst.name) << " (" << pin_list(pins) << ");\n";
  }
  for (InstId p : nl.pos) {
    const std::string& port = nl.inst(p).name;
    const std::string& net = nl.net(nl.inst(p).inputs[0]).name;
    if (net != port) os << "  assign " << namer.ref(port) << " = " << namer.ref(net) << ";\n";
  }
  os << "endmodule\n";
  return os.str();
}

}  // namespace easic
