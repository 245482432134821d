#include "easic/attacks.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Dense>
#include <json.hpp>

#include "easic/error.hpp"

namespace easic {

using nlohmann::ordered_json;

// ---------------------------------------------------------------- histograms

uint64_t PatternHistogram::total() const {
  uint64_t t = 0;
  for (const auto& [k, c] : entries) t += c;
  return t;
}

void PatternHistogram::add(PatternKey key, uint64_t count) {
  if (count > 0) entries[key] += count;
}

void PatternHistogram::merge(const PatternHistogram& other) {
  for (const auto& [k, c] : other.entries) entries[k] += c;
}

PatternHistogram pattern_histogram(const Netlist& nl, PatternScope scope) {
  PatternHistogram h;
  for (InstId id : nl.luts()) {
    const Instance& inst = nl.inst(id);
    if (scope == PatternScope::static_only && inst.state != LutState::static_logic) continue;
    if (!inst.programmed) continue;
    h.add({inst.lut_width(), inst.mask.bits()});
  }
  return h;
}

void PatternDatabase::add(const std::string& design, PatternHistogram hist) {
  auto [it, fresh] = designs_.emplace(design, PatternHistogram{});
  require(fresh, "design '" + design + "' is already in the pattern database");
  it->second = std::move(hist);
  merged_.merge(it->second);
}

namespace {

std::string hex_mask(const PatternKey& k) {
  char buf[24];
  const unsigned digits = k.width <= 2 ? 1 : 1u << (k.width - 2);
  std::snprintf(buf, sizeof buf, "%0*llx", static_cast<int>(digits), static_cast<unsigned long long>(k.mask));
  return buf;
}

ordered_json parse_json(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(ErrorCode::syntax, std::string("JSON: ") + e.what());
  }
}

}  // namespace

std::string PatternDatabase::to_json() const {
  ordered_json designs = ordered_json::object();
  for (const auto& [name, h] : designs_) {
    ordered_json rows = ordered_json::array();
    for (const auto& [k, c] : h.entries) rows.push_back({k.width, hex_mask(k), c});
    designs[name] = std::move(rows);
  }
  ordered_json j{{"format", "easic-patterns"}, {"version", 1}, {"designs", std::move(designs)}};
  return j.dump(1) + "\n";
}

PatternDatabase PatternDatabase::from_json(const std::string& text) {
  const ordered_json j = parse_json(text);
  PatternDatabase db;
  try {
    if (j.at("format") != "easic-patterns" || j.at("version") != 1)
      fail(ErrorCode::syntax, "not an easic-patterns v1 database");
    for (const auto& [name, rows] : j.at("designs").items()) {
      PatternHistogram h;
      for (const auto& row : rows) {
        const unsigned w = row.at(0).get<unsigned>();
        if (w < 1 || w > 6) fail(ErrorCode::syntax, "pattern width out of range in '" + name + "'");
        const uint64_t mask = std::stoull(row.at(1).get<std::string>(), nullptr, 16);
        if (mask & ~TruthTable::mask_for(w)) fail(ErrorCode::syntax, "pattern wider than its LUT in '" + name + "'");
        const uint64_t c = row.at(2).get<uint64_t>();
        if (c == 0) fail(ErrorCode::syntax, "zero pattern count in '" + name + "'");
        h.add({w, mask}, c);
      }
      db.add(name, std::move(h));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::syntax, std::string("pattern database: ") + e.what());
  } catch (const std::logic_error& e) {
    fail(ErrorCode::syntax, std::string("pattern database: bad mask: ") + e.what());
  }
  return db;
}

double search_space_bits(size_t unique) {
  if (unique == 0) fail(ErrorCode::empty_input, "search space of an empty pattern set");
  return std::log2(static_cast<double>(unique));
}

double search_space_bits(const PatternHistogram& hist) { return search_space_bits(hist.unique()); }

// ---------------------------------------------------------------- statistics

DistributionFit predict_distribution(const PatternHistogram& exposed, unsigned degree, double threshold) {
  const size_t u = exposed.unique();
  if (u < degree + 1)
    fail(ErrorCode::contract, "trendline of degree " + std::to_string(degree) + " needs at least " +
                                  std::to_string(degree + 1) + " patterns, got " + std::to_string(u));
  DistributionFit fit;
  std::vector<std::pair<uint64_t, PatternKey>> byc;
  for (const auto& [k, c] : exposed.entries) byc.emplace_back(c, k);
  std::stable_sort(byc.begin(), byc.end(), [](const auto& a, const auto& b) { return a.first > b.first; });

  Eigen::MatrixXd a(u, degree + 1);
  Eigen::VectorXd y(u);
  Eigen::VectorXd scale(degree + 1);
  for (unsigned i = 0; i <= degree; ++i) scale[i] = std::pow(static_cast<double>(u), i);
  double mean_log = 0;
  for (size_t r = 0; r < u; ++r) {
    y[r] = std::log(static_cast<double>(byc[r].first));
    mean_log += y[r];
    for (unsigned i = 0; i <= degree; ++i) a(r, i) = std::pow(static_cast<double>(r + 1), i) / scale[i];
  }
  mean_log /= static_cast<double>(u);
  // Columns are scaled to unit range; the coefficients are unscaled afterwards.
  const Eigen::VectorXd c = a.colPivHouseholderQr().solve(y);
  const Eigen::VectorXd fitted = a * c;
  fit.residual = std::sqrt((fitted - y).squaredNorm() / static_cast<double>(u));
  for (unsigned i = 0; i <= degree; ++i) fit.coefficients.push_back(c[i] / scale[i]);
  fit.threshold = threshold > 0 ? threshold : std::exp(mean_log + 1.0);
  for (size_t r = 0; r < u; ++r) {
    const double f = std::exp(fitted[r]);
    fit.profile.push_back(f);
    fit.ranked.push_back(byc[r].second);
    if (f > fit.threshold) fit.outliers.push_back(byc[r].second);
  }
  return fit;
}

double pearson_correlate(const PatternHistogram& a, const PatternHistogram& b) {
  std::set<PatternKey> keys;
  for (const auto& [k, c] : a.entries) keys.insert(k);
  for (const auto& [k, c] : b.entries) keys.insert(k);
  if (keys.size() < 2) fail(ErrorCode::contract, "correlation needs at least two distinct patterns");
  const double n = static_cast<double>(keys.size());
  const double ma = static_cast<double>(a.total()) / n, mb = static_cast<double>(b.total()) / n;
  auto count = [](const PatternHistogram& h, const PatternKey& k) {
    const auto it = h.entries.find(k);
    return it == h.entries.end() ? 0.0 : static_cast<double>(it->second);
  };
  double sab = 0, saa = 0, sbb = 0;
  for (const PatternKey& k : keys) {
    const double da = count(a, k) - ma, db = count(b, k) - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0 || sbb == 0) fail(ErrorCode::contract, "correlation of a constant count vector is undefined");
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

CompositionReport composition_attack(const PatternHistogram& exposed, const PatternDatabase& db,
                                     CompositionThresholds thresholds) {
  require(!db.designs().empty(), "composition attack needs a non-empty database");
  CompositionReport rep;
  for (const auto& [name, h] : db.designs()) {
    try {
      const double r = pearson_correlate(exposed, h);
      const char* regime = r >= thresholds.self    ? "self-correlation"
                           : r >= thresholds.cross ? "cross-correlation"
                                                   : "no correlation";
      rep.ranking.push_back({name, r, regime});
    } catch (const Error& e) {
      rep.skipped.push_back(name + ": " + e.what());
    }
  }
  std::stable_sort(rep.ranking.begin(), rep.ranking.end(),
                   [](const CompositionMatch& x, const CompositionMatch& y) { return x.r > y.r; });
  return rep;
}

// ---------------------------------------------------------------- bench

std::string key_input_name(size_t bit) { return "keyinput" + std::to_string(bit); }

std::string BenchCircuit::to_text() const {
  std::string out;
  out += "# key length " + std::to_string(key_length) + "\n";
  for (const auto& i : inputs) out += "INPUT(" + i + ")\n";
  for (const auto& o : outputs) out += "OUTPUT(" + o + ")\n";
  for (const auto& g : gates) {
    out += g.output + " = " + g.op + "(";
    for (size_t i = 0; i < g.inputs.size(); ++i) out += (i ? ", " : "") + g.inputs[i];
    out += ")\n";
  }
  return out;
}

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool valid_wire(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' || c == ']')) return false;
  return true;
}

const std::set<std::string>& bench_ops() {
  static const std::set<std::string> ops{"AND", "OR", "NAND", "NOR", "XOR", "XNOR", "NOT", "BUF"};
  return ops;
}

}  // namespace

BenchCircuit BenchCircuit::parse(const std::string& text) {
  BenchCircuit b;
  std::istringstream in(text);
  std::string raw;
  std::set<std::string> defined;
  auto err = [](ErrorCode code, size_t line, const std::string& msg) {
    fail(code, "bench line " + std::to_string(line) + ": " + msg);
  };
  for (size_t line = 1; std::getline(in, raw); ++line) {
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto open = s.find('('), close = s.rfind(')');
    if (open == std::string::npos || close != s.size() - 1) err(ErrorCode::syntax, line, "expected '(...)'");
    const auto eq = s.find('=');
    std::vector<std::string> args;
    {
      std::string inner = s.substr(open + 1, close - open - 1);
      std::stringstream ss(inner);
      for (std::string a; std::getline(ss, a, ',');) args.push_back(trim(a));
      for (const auto& a : args)
        if (!valid_wire(a)) err(ErrorCode::syntax, line, "bad wire name '" + a + "'");
    }
    if (eq == std::string::npos) {
      const std::string kw = trim(s.substr(0, open));
      if (args.size() != 1) err(ErrorCode::syntax, line, kw + " takes one name");
      if (kw == "INPUT") {
        if (!defined.insert(args[0]).second) err(ErrorCode::multiple_drivers, line, "'" + args[0] + "' defined twice");
        b.inputs.push_back(args[0]);
        b.input_origin.push_back(args[0]);
        if (args[0].rfind("keyinput", 0) == 0) ++b.key_length;
      } else if (kw == "OUTPUT") {
        b.outputs.push_back(args[0]);
        b.output_origin.push_back(args[0]);
      } else {
        err(ErrorCode::syntax, line, "unknown declaration '" + kw + "'");
      }
      continue;
    }
    const std::string lhs = trim(s.substr(0, eq));
    const std::string op = trim(s.substr(eq + 1, open - eq - 1));
    if (!valid_wire(lhs)) err(ErrorCode::syntax, line, "bad wire name '" + lhs + "'");
    if (!bench_ops().count(op)) err(ErrorCode::unknown_cell, line, "unknown gate '" + op + "'");
    if (args.empty() || ((op == "NOT" || op == "BUF") && args.size() != 1))
      err(ErrorCode::width_mismatch, line, op + " with " + std::to_string(args.size()) + " inputs");
    if (!defined.insert(lhs).second) err(ErrorCode::multiple_drivers, line, "'" + lhs + "' defined twice");
    b.gates.push_back({lhs, op, std::move(args)});
  }
  return b;
}

BenchEvaluator::BenchEvaluator(const BenchCircuit& bench) {
  auto id = [&](const std::string& n) {
    auto [it, fresh] = index_.emplace(n, names_.size());
    if (fresh) names_.push_back(n);
    return static_cast<uint32_t>(it->second);
  };
  for (const auto& i : bench.inputs) inputs_.push_back(id(i));
  std::vector<int64_t> gate_of;
  std::vector<Step> raw;
  static const std::unordered_map<std::string, Op> ops{{"AND", Op::and_}, {"OR", Op::or_},   {"NAND", Op::nand},
                                                       {"NOR", Op::nor},  {"XOR", Op::xor_}, {"XNOR", Op::xnor},
                                                       {"NOT", Op::not_}, {"BUF", Op::buf}};
  for (const auto& g : bench.gates) {
    const auto op = ops.find(g.op);
    if (op == ops.end()) fail(ErrorCode::unknown_cell, "unknown bench gate '" + g.op + "'");
    Step st{op->second, id(g.output), {}};
    for (const auto& in : g.inputs) st.ins.push_back(id(in));
    raw.push_back(std::move(st));
  }
  for (const auto& o : bench.outputs) outputs_.push_back(id(o));
  gate_of.assign(names_.size(), -1);
  std::vector<char> is_input(names_.size(), 0);
  for (uint32_t i : inputs_) is_input[i] = 1;
  for (size_t g = 0; g < raw.size(); ++g) {
    if (is_input[raw[g].out] || gate_of[raw[g].out] >= 0)
      fail(ErrorCode::multiple_drivers, "bench wire '" + names_[raw[g].out] + "' defined twice");
    gate_of[raw[g].out] = static_cast<int64_t>(g);
  }
  for (size_t w = 0; w < names_.size(); ++w)
    if (!is_input[w] && gate_of[w] < 0) fail(ErrorCode::undeclared_net, "bench wire '" + names_[w] + "' is never defined");
  // Iterative DFS so deep chains cannot overflow the stack.
  std::vector<uint8_t> mark(raw.size(), 0);  // 1 = on stack, 2 = done
  for (size_t root = 0; root < raw.size(); ++root) {
    if (mark[root]) continue;
    std::vector<std::pair<size_t, size_t>> stack{{root, 0}};
    mark[root] = 1;
    while (!stack.empty()) {
      auto& [g, next] = stack.back();
      if (next < raw[g].ins.size()) {
        const int64_t d = gate_of[raw[g].ins[next++]];
        if (d < 0 || mark[d] == 2) continue;
        if (mark[d] == 1) fail(ErrorCode::combinational_cycle, "bench cycle through '" + names_[raw[d].out] + "'");
        mark[d] = 1;
        stack.push_back({static_cast<size_t>(d), 0});
      } else {
        mark[g] = 2;
        steps_.push_back(raw[g]);
        stack.pop_back();
      }
    }
  }
}

std::optional<size_t> BenchEvaluator::wire(const std::string& name) const {
  const auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<uint64_t> BenchEvaluator::values(const std::vector<uint64_t>& words) const {
  require(words.size() == inputs_.size(), "one input word per bench input");
  std::vector<uint64_t> v(names_.size(), 0);
  for (size_t i = 0; i < inputs_.size(); ++i) v[inputs_[i]] = words[i];
  for (const Step& s : steps_) {
    uint64_t acc;
    switch (s.op) {
      case Op::and_:
      case Op::nand:
        acc = ~uint64_t{0};
        for (uint32_t i : s.ins) acc &= v[i];
        break;
      case Op::or_:
      case Op::nor:
        acc = 0;
        for (uint32_t i : s.ins) acc |= v[i];
        break;
      case Op::xor_:
      case Op::xnor:
        acc = 0;
        for (uint32_t i : s.ins) acc ^= v[i];
        break;
      default: acc = v[s.ins[0]];
    }
    if (s.op == Op::nand || s.op == Op::nor || s.op == Op::xnor || s.op == Op::not_) acc = ~acc;
    v[s.out] = acc;
  }
  return v;
}

std::vector<uint64_t> BenchEvaluator::outputs(const std::vector<uint64_t>& words) const {
  const auto v = values(words);
  std::vector<uint64_t> out;
  for (uint32_t o : outputs_) out.push_back(v[o]);
  return out;
}

std::vector<uint64_t> BenchCircuit::evaluate(const std::vector<uint64_t>& words) const {
  return BenchEvaluator(*this).outputs(words);
}

namespace {

class BenchBuilder {
 public:
  BenchCircuit b;

  std::string fresh(const std::string& hint) {
    std::string s;
    for (char c : hint) s += std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '_';
    if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) s = "n_" + s;
    std::string name = s;
    for (unsigned i = 1; !used_.insert(name).second; ++i) name = s + "_" + std::to_string(i);
    return name;
  }
  void reserve(const std::string& name) { used_.insert(name); }

  void gate(std::string out, std::string op, std::vector<std::string> ins) {
    b.gates.push_back({std::move(out), std::move(op), std::move(ins)});
  }

  std::string constant(bool one) {
    require(!b.inputs.empty(), "bench constants need at least one input");
    if (const0_.empty()) {
      const0_ = fresh("const0");
      gate(const0_, "XOR", {b.inputs[0], b.inputs[0]});
    }
    if (!one) return const0_;
    if (const1_.empty()) {
      const1_ = fresh("const1");
      gate(const1_, "NOT", {const0_});
    }
    return const1_;
  }

 private:
  std::set<std::string> used_;
  std::string const0_, const1_;
};

}  // namespace

BenchCircuit export_bench(const Netlist& netlist, const Partition& partition) {
  const Bitstream bs = partition.reconfigurable.empty() ? Bitstream{} : gen_bitstream(partition, netlist);
  Netlist nl = netlist;
  for (InstId s : partition.static_luts) decode_static(nl, s);
  nl.finalize();
  std::unordered_map<std::string, size_t> key_offset;
  for (const auto& e : bs.chain) key_offset[e.instance] = e.offset;

  BenchBuilder bb;
  for (size_t i = 0; i < bs.length(); ++i) bb.reserve(key_input_name(i));
  std::vector<std::string> wire(nl.nets.size());
  auto net_wire = [&](NetId n) -> const std::string& {
    if (wire[n].empty()) wire[n] = bb.fresh(nl.net(n).name);
    return wire[n];
  };
  for (InstId pi : nl.pis) {
    bb.b.inputs.push_back(net_wire(nl.inst(pi).output));
    bb.b.input_origin.push_back(nl.inst(pi).name);
  }
  for (InstId id = 0; id < nl.instances.size(); ++id)
    if (nl.inst(id).kind == CellKind::ff) {
      bb.b.inputs.push_back(net_wire(nl.inst(id).output));
      bb.b.input_origin.push_back("ff:" + nl.inst(id).name);
    }
  for (size_t i = 0; i < bs.length(); ++i) {
    bb.b.inputs.push_back(key_input_name(i));
    bb.b.input_origin.push_back(key_input_name(i));
  }
  bb.b.key_length = bs.length();

  for (InstId id : nl.topo_order()) {
    const Instance& inst = nl.inst(id);
    if (inst.output == kNone || inst.kind == CellKind::pi || inst.kind == CellKind::ff) continue;
    std::vector<std::string> ins;
    for (NetId n : inst.inputs) ins.push_back(net_wire(n));
    const std::string out = net_wire(inst.output);
    const std::string base = inst.name;
    switch (inst.kind) {
      case CellKind::lut: {
        const auto it = key_offset.find(inst.name);
        require(it != key_offset.end(), "LUT '" + inst.name + "' is neither static nor on the key chain");
        const unsigned k = inst.lut_width();
        std::vector<std::string> neg(k);
        for (unsigned j = 0; j < k; ++j) {
          neg[j] = bb.fresh(base + "_n" + std::to_string(j));
          bb.gate(neg[j], "NOT", {ins[j]});
        }
        std::vector<std::string> terms;
        for (unsigned m = 0; m < (1u << k); ++m) {
          std::vector<std::string> lits{key_input_name(it->second + m)};
          for (unsigned j = 0; j < k; ++j) lits.push_back((m >> j) & 1 ? ins[j] : neg[j]);
          terms.push_back(bb.fresh(base + "_m" + std::to_string(m)));
          bb.gate(terms.back(), "AND", std::move(lits));
        }
        bb.gate(out, "OR", std::move(terms));
        break;
      }
      case CellKind::mux2: {
        const std::string ns = bb.fresh(base + "_ns"), a = bb.fresh(base + "_a"), c = bb.fresh(base + "_b");
        bb.gate(ns, "NOT", {ins[2]});
        bb.gate(a, "AND", {ins[1], ins[2]});
        bb.gate(c, "AND", {ins[0], ns});
        bb.gate(out, "OR", {a, c});
        break;
      }
      case CellKind::carry: {
        const std::string ab = bb.fresh(base + "_ab"), ac = bb.fresh(base + "_ac"), bc = bb.fresh(base + "_bc");
        bb.gate(ab, "AND", {ins[0], ins[1]});
        bb.gate(ac, "AND", {ins[0], ins[2]});
        bb.gate(bc, "AND", {ins[1], ins[2]});
        bb.gate(out, "OR", {ab, ac, bc});
        break;
      }
      case CellKind::buf:
      case CellKind::ibuf:
      case CellKind::obuf: bb.gate(out, "BUF", ins); break;
      case CellKind::inv: bb.gate(out, "NOT", ins); break;
      case CellKind::and_gate:
      case CellKind::or_gate:
        if (ins.empty()) bb.gate(out, "BUF", {bb.constant(inst.kind == CellKind::and_gate)});
        else bb.gate(out, ins.size() == 1 ? "BUF" : inst.kind == CellKind::and_gate ? "AND" : "OR", ins);
        break;
      case CellKind::tie0:
      case CellKind::tie1: bb.gate(out, "BUF", {bb.constant(inst.kind == CellKind::tie1)}); break;
      default: fail(ErrorCode::unknown_cell, std::string("no bench form for ") + to_string(inst.kind));
    }
  }
  for (NetId n = 0; n < nl.nets.size(); ++n)
    if (!wire[n].empty()) bb.b.net_wire[nl.net(n).name] = wire[n];
  for (InstId po : nl.pos) {
    const Instance& inst = nl.inst(po);
    const std::string& w = net_wire(inst.inputs[0]);
    if (w == inst.name) {
      bb.b.outputs.push_back(w);
    } else {
      const std::string o = bb.fresh(inst.name);
      bb.gate(o, "BUF", {w});
      bb.b.outputs.push_back(o);
    }
    bb.b.output_origin.push_back(inst.name);
  }
  for (InstId id = 0; id < nl.instances.size(); ++id)
    if (nl.inst(id).kind == CellKind::ff) {
      const std::string o = bb.fresh(nl.inst(id).name + "_d");
      bb.gate(o, "BUF", {net_wire(nl.inst(id).inputs[0])});
      bb.b.outputs.push_back(o);
      bb.b.output_origin.push_back("ff:" + nl.inst(id).name);
    }
  return std::move(bb.b);
}

// ---------------------------------------------------------------- SAT reports

namespace {

void finish(SatReport& r, double tol) {
  r.computed_ratio = r.variables ? static_cast<double>(r.clauses) / static_cast<double>(r.variables) : 0.0;
  r.ideal_region = std::abs(r.ratio() - kIdealSatRatio) <= tol;
}

}  // namespace

SatReport sat_ratio_report(const BenchCircuit& bench, double tol) {
  SatReport r;
  r.source = "tseitin";
  r.key_length = bench.key_length;
  r.variables = bench.inputs.size();
  for (const auto& g : bench.gates) {
    const uint64_t n = g.inputs.size();
    ++r.variables;
    if (g.op == "NOT" || g.op == "BUF") {
      r.clauses += 2;
    } else if (g.op == "XOR" || g.op == "XNOR") {
      r.clauses += 4 * (n - 1);
      r.variables += n >= 2 ? n - 2 : 0;
    } else {
      r.clauses += n + 1;
    }
  }
  finish(r, tol);
  return r;
}

SatReport parse_solver_log(const std::string& text, double tol) {
  SatReport r;
  r.source = "log";
  bool have_vars = false, have_clauses = false;
  std::istringstream in(text);
  std::string raw;
  for (size_t line = 1; std::getline(in, raw); ++line) {
    if (auto h = raw.find('#'); h != std::string::npos) raw.resize(h);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const auto colon = s.find(':');
    auto bad = [&](const std::string& msg) { fail(ErrorCode::syntax, "solver log line " + std::to_string(line) + ": " + msg); };
    if (colon == std::string::npos) bad("expected 'key: value'");
    const std::string key = trim(s.substr(0, colon)), value = trim(s.substr(colon + 1));
    auto as_uint = [&]() {
      uint64_t v = 0;
      const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size()) bad("'" + value + "' is not a count");
      return v;
    };
    auto as_real = [&]() {
      double v = 0;
      const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || p != value.data() + value.size()) bad("'" + value + "' is not a number");
      return v;
    };
    if (key == "attack") r.attack = value;
    else if (key == "obf") r.obf_percent = as_real();
    else if (key == "key_length") r.key_length = as_uint();
    else if (key == "variables") r.variables = as_uint(), have_vars = true;
    else if (key == "clauses") r.clauses = as_uint(), have_clauses = true;
    else if (key == "iterations") r.iterations = as_uint();
    else if (key == "ratio") r.reported_ratio = as_real();
    else bad("unknown key '" + key + "'");
  }
  if (!have_vars || !have_clauses) fail(ErrorCode::syntax, "solver log needs 'variables' and 'clauses'");
  finish(r, tol);
  return r;
}

std::string SatReport::to_json() const {
  ordered_json j{{"source", source}, {"attack", attack}};
  j["obf_percent"] = obf_percent ? ordered_json(*obf_percent) : ordered_json(nullptr);
  j["key_length"] = key_length;
  j["variables"] = variables;
  j["clauses"] = clauses;
  j["iterations"] = iterations ? ordered_json(*iterations) : ordered_json(nullptr);
  j["computed_ratio"] = computed_ratio;
  j["reported_ratio"] = reported_ratio ? ordered_json(*reported_ratio) : ordered_json(nullptr);
  j["ideal_region"] = ideal_region;
  return j.dump(1) + "\n";
}

}  // namespace easic
