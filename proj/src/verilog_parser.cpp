#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "easic/error.hpp"
#include "easic/verilog.hpp"

namespace easic {

namespace {

enum class Tok { ident, number, punct, end };

struct Token {
  Tok type = Tok::end;
  std::string text;
  int line = 1, col = 1;
};

std::string where(const Token& t) { return "line " + std::to_string(t.line) + ", column " + std::to_string(t.col); }

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      Token t;
      t.line = line_;
      t.col = col_;
      if (pos_ >= src_.size()) {
        out.push_back(t);
        break;
      }
      const char c = src_[pos_];
      if (c == '\\') {
        advance();
        std::string name;
        while (pos_ < src_.size() && !std::isspace(static_cast<unsigned char>(src_[pos_]))) name += advance();
        if (name.empty()) fail(ErrorCode::syntax, "empty escaped identifier at " + where(t));
        t.type = Tok::ident;
        t.text = name;
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_' ||
                                      src_[pos_] == '$'))
          t.text += advance();
        t.type = Tok::ident;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '\'') {
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) t.text += advance();
        if (pos_ < src_.size() && src_[pos_] == '\'') {
          t.text += advance();
          if (pos_ >= src_.size() || !std::isalpha(static_cast<unsigned char>(src_[pos_])))
            fail(ErrorCode::syntax, "malformed based literal at " + where(t));
          t.text += advance();
          while (pos_ < src_.size() && (std::isxdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            t.text += advance();
        }
        t.type = Tok::number;
      } else if (std::string_view("();,.#[]:=").find(c) != std::string_view::npos) {
        t.text = std::string(1, advance());
        t.type = Tok::punct;
      } else {
        fail(ErrorCode::syntax, std::string("unexpected character '") + c + "' at " + where(t));
      }
      out.push_back(std::move(t));
    }
    return out;
  }

 private:
  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;

  char advance() {
    const char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_space() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '*') {
        const int l = line_, cc = col_;
        advance();
        advance();
        while (pos_ + 1 < src_.size() && !(src_[pos_] == '*' && src_[pos_ + 1] == '/')) advance();
        if (pos_ + 1 >= src_.size())
          fail(ErrorCode::syntax, "unterminated comment starting at line " + std::to_string(l) + ", column " +
                                      std::to_string(cc));
        advance();
        advance();
      } else {
        break;
      }
    }
  }
};

struct PinConn {
  std::string pin;
  std::string net;  // empty = unconnected
  Token at;
};

struct CellStmt {
  std::string type;
  std::string name;
  std::optional<std::string> init;
  std::vector<PinConn> pins;
  Token at;
};

enum class Dir { input, output, wire };

struct Decl {
  Dir dir;
  Token at;
};

struct Module {
  std::string name;
  std::vector<std::string> port_list;
  std::vector<std::string> inputs, outputs;  // per-bit, declaration order
  std::map<std::string, Decl> decls;
  std::vector<std::pair<std::string, std::string>> assigns;
  std::vector<Token> assign_at;
  std::vector<CellStmt> cells;
  std::map<std::string, std::vector<std::string>> bus_bits;  // base -> bit names
};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

  Module parse() {
    expect_kw("module");
    Module m;
    m.name = ident();
    if (accept("(")) {
      if (!accept(")")) {
        do m.port_list.push_back(ident());
        while (accept(","));
        expect(")");
      }
    }
    expect(";");
    while (!is_kw("endmodule")) {
      if (peek().type == Tok::end) fail(ErrorCode::syntax, "missing endmodule at " + where(peek()));
      if (is_kw("input") || is_kw("output") || is_kw("wire")) {
        declaration(m);
      } else if (is_kw("assign")) {
        const Token at = next();
        std::string lhs = netref();
        expect("=");
        std::string rhs = netref();
        expect(";");
        m.assigns.emplace_back(std::move(lhs), std::move(rhs));
        m.assign_at.push_back(at);
      } else if (peek().type == Tok::ident) {
        m.cells.push_back(cell());
      } else {
        fail(ErrorCode::syntax, "unexpected '" + peek().text + "' at " + where(peek()));
      }
    }
    next();
    if (peek().type != Tok::end) fail(ErrorCode::syntax, "only one module is supported; extra text at " + where(peek()));
    return m;
  }

 private:
  std::vector<Token> t_;
  size_t i_ = 0;

  const Token& peek() const { return t_[i_]; }
  Token next() { return t_[i_ < t_.size() - 1 ? i_++ : i_]; }
  bool is_kw(const char* kw) const { return peek().type == Tok::ident && peek().text == kw; }
  bool accept(const char* p) {
    if (peek().type == Tok::punct && peek().text == p) {
      ++i_;
      return true;
    }
    return false;
  }
  void expect(const char* p) {
    if (!accept(p)) fail(ErrorCode::syntax, std::string("expected '") + p + "' at " + where(peek()) + ", got '" + peek().text + "'");
  }
  void expect_kw(const char* kw) {
    if (!is_kw(kw)) fail(ErrorCode::syntax, std::string("expected '") + kw + "' at " + where(peek()));
    ++i_;
  }
  std::string ident() {
    if (peek().type != Tok::ident) fail(ErrorCode::syntax, "expected identifier at " + where(peek()) + ", got '" + peek().text + "'");
    return next().text;
  }
  long number() {
    if (peek().type != Tok::number || peek().text.find('\'') != std::string::npos)
      fail(ErrorCode::syntax, "expected integer at " + where(peek()));
    return std::stol(next().text);
  }

  std::string netref() {
    if (peek().type == Tok::number) {
      const std::string v = next().text;
      if (v == "1'b0" || v == "1'h0") return "1'b0";
      if (v == "1'b1" || v == "1'h1") return "1'b1";
      fail(ErrorCode::syntax, "unsupported constant " + v + " at " + where(t_[i_ - 1]));
    }
    std::string n = ident();
    if (accept("[")) {
      n += "[" + std::to_string(number()) + "]";
      expect("]");
    }
    return n;
  }

  void declaration(Module& m) {
    const std::string kw = next().text;
    const Dir dir = kw == "input" ? Dir::input : kw == "output" ? Dir::output : Dir::wire;
    if (dir != Dir::wire && is_kw("wire")) next();
    std::optional<std::pair<long, long>> range;
    if (accept("[")) {
      const long a = number();
      expect(":");
      const long b = number();
      expect("]");
      range = {a, b};
    }
    do {
      const Token at = peek();
      const std::string base = ident();
      std::vector<std::string> bits;
      if (range) {
        const long step = range->first >= range->second ? -1 : 1;
        for (long v = range->first;; v += step) {
          bits.push_back(base + "[" + std::to_string(v) + "]");
          if (v == range->second) break;
        }
        m.bus_bits[base] = bits;
      } else {
        bits.push_back(base);
      }
      for (const auto& b : bits) {
        auto it = m.decls.find(b);
        if (it != m.decls.end()) {
          // "output y; wire y;" is legal Verilog; only conflicting directions are errors.
          if (dir == Dir::wire) continue;
          if (it->second.dir != Dir::wire) fail(ErrorCode::syntax, "redeclaration of " + b + " at " + where(at));
        }
        m.decls[b] = Decl{dir, at};
        if (dir == Dir::input) m.inputs.push_back(b);
        if (dir == Dir::output) m.outputs.push_back(b);
      }
    } while (accept(","));
    expect(";");
  }

  CellStmt cell() {
    CellStmt c;
    c.at = peek();
    c.type = ident();
    if (accept("#")) {
      expect("(");
      do {
        expect(".");
        const Token pt = peek();
        const std::string param = ident();
        expect("(");
        if (peek().type != Tok::number) fail(ErrorCode::syntax, "expected literal for parameter at " + where(peek()));
        const std::string value = next().text;
        expect(")");
        if (param != "INIT") fail(ErrorCode::syntax, "unsupported parameter " + param + " at " + where(pt));
        c.init = value;
      } while (accept(","));
      expect(")");
    }
    c.name = ident();
    expect("(");
    if (!accept(")")) {
      do {
        PinConn pc;
        pc.at = peek();
        expect(".");
        pc.pin = ident();
        expect("(");
        if (!accept(")")) {
          pc.net = netref();
          expect(")");
        }
        c.pins.push_back(std::move(pc));
      } while (accept(","));
      expect(")");
    }
    expect(";");
    return c;
  }
};

struct UnionFind {
  std::map<std::string, std::string> parent;
  std::string find(const std::string& x) {
    auto it = parent.find(x);
    if (it == parent.end() || it->second == x) return x;
    const std::string r = find(it->second);
    parent[x] = r;
    return r;
  }
  void unite(const std::string& a, const std::string& b) {
    const std::string ra = find(a), rb = find(b);
    if (ra != rb) parent[ra] = rb;
  }
};

Netlist build(const Module& m) {
  auto declared = [&](const std::string& n, const Token& at) {
    if (n == "1'b0" || n == "1'b1") return;
    if (!m.decls.count(n)) fail(ErrorCode::undeclared_net, "undeclared net " + n + " at " + where(at));
  };
  for (const auto& p : m.port_list) {
    const bool bus = m.bus_bits.count(p) > 0;
    const auto it = m.decls.find(bus ? m.bus_bits.at(p).front() : p);
    if (it == m.decls.end() || it->second.dir == Dir::wire)
      fail(ErrorCode::undeclared_net, "port " + p + " has no input/output declaration");
  }

  // Configuration pins are kept out of the logic graph.
  std::set<std::string> config_nets;
  for (const auto& c : m.cells) {
    for (const auto& pc : c.pins) {
      if (pc.pin == "SIN" || pc.pin == "SOUT" || pc.pin == "EN") {
        declared(pc.net, pc.at);
        config_nets.insert(pc.net);
      }
    }
  }

  UnionFind uf;
  for (size_t i = 0; i < m.assigns.size(); ++i) {
    declared(m.assigns[i].first, m.assign_at[i]);
    declared(m.assigns[i].second, m.assign_at[i]);
    uf.unite(m.assigns[i].first, m.assigns[i].second);
  }
  // Canonical name per alias class: the input port, else an internal wire, else the first output.
  std::map<std::string, std::vector<std::string>> classes;
  for (const auto& [name, decl] : m.decls) classes[uf.find(name)].push_back(name);
  std::map<std::string, std::string> canonical;
  std::map<std::string, size_t> order;
  for (size_t i = 0; i < m.outputs.size(); ++i) order[m.outputs[i]] = i;
  for (auto& [root, members] : classes) {
    std::string pick, wire_pick, out_pick;
    for (const auto& n : members) {
      const Dir d = m.decls.at(n).dir;
      if (d == Dir::input) {
        if (!pick.empty()) fail(ErrorCode::multiple_drivers, "inputs " + pick + " and " + n + " are shorted by assign");
        pick = n;
      } else if (d == Dir::wire) {
        if (wire_pick.empty()) wire_pick = n;
      } else if (out_pick.empty() || order[n] < order[out_pick]) {
        out_pick = n;
      }
    }
    if (pick.empty()) pick = !wire_pick.empty() ? wire_pick : out_pick;
    for (const auto& n : members) canonical[n] = pick;
  }

  Netlist nl;
  nl.name = m.name;
  auto net_of = [&](const std::string& n, const Token& at) -> NetId {
    declared(n, at);
    if (n == "1'b0" || n == "1'b1") {
      const std::string tie = n == "1'b0" ? "$tie0" : "$tie1";
      if (!nl.find_net(tie)) {
        Instance t;
        t.name = tie;
        t.kind = n == "1'b0" ? CellKind::tie0 : CellKind::tie1;
        t.output = nl.add_net(tie);
        nl.add_instance(std::move(t));
      }
      return *nl.find_net(tie);
    }
    if (config_nets.count(n)) fail(ErrorCode::syntax, "configuration net " + n + " used as logic at " + where(at));
    return nl.find_or_add_net(canonical.at(n));
  };

  for (const auto& p : m.inputs) {
    if (config_nets.count(p)) continue;
    Instance pi;
    pi.name = p;
    pi.kind = CellKind::pi;
    pi.output = nl.find_or_add_net(canonical.at(p));
    nl.add_instance(std::move(pi));
  }

  struct CfgLinks {
    InstId inst;
    std::string sin, sout;
    Token at;
  };
  std::vector<CfgLinks> cfg;
  for (const auto& c : m.cells) {
    const auto ctype = lookup_cell_type(c.type);
    if (!ctype) fail(ErrorCode::unknown_cell, "unknown cell type " + c.type + " at " + where(c.at));
    Instance inst;
    inst.name = c.name;
    inst.kind = ctype->kind;
    std::vector<std::optional<std::string>> ins(ctype->inputs.size());
    std::optional<std::string> out, sin, sout, en;
    std::vector<Token> at(ctype->inputs.size(), c.at);
    Token out_at = c.at;
    std::set<std::string> seen;
    for (const auto& pc : c.pins) {
      if (!seen.insert(pc.pin).second) fail(ErrorCode::syntax, "pin " + pc.pin + " connected twice at " + where(pc.at));
      if (pc.net.empty()) continue;
      auto pos = std::find(ctype->inputs.begin(), ctype->inputs.end(), pc.pin);
      if (pos != ctype->inputs.end()) {
        ins[pos - ctype->inputs.begin()] = pc.net;
        at[pos - ctype->inputs.begin()] = pc.at;
      } else if (pc.pin == ctype->output) {
        out = pc.net;
        out_at = pc.at;
      } else if (ctype->configurable && pc.pin == "SIN") {
        sin = pc.net;
      } else if (ctype->configurable && pc.pin == "SOUT") {
        sout = pc.net;
      } else if (ctype->configurable && pc.pin == "EN") {
        en = pc.net;
      } else {
        fail(ErrorCode::width_mismatch, "cell " + c.type + " has no pin " + pc.pin + " (" + where(pc.at) + ")");
      }
    }
    for (size_t p = 0; p < ins.size(); ++p) {
      if (!ins[p])
        fail(ErrorCode::dangling_input, "pin " + ctype->inputs[p] + " of " + c.name + " is unconnected (" + where(c.at) + ")");
      inst.inputs.push_back(net_of(*ins[p], at[p]));
    }
    if (!out) fail(ErrorCode::width_mismatch, "output pin " + ctype->output + " of " + c.name + " is unconnected");
    inst.output = net_of(*out, out_at);
    if (ctype->kind == CellKind::lut) {
      if (ctype->configurable) {
        if (c.init) fail(ErrorCode::syntax, "configurable macro " + c.name + " must not carry INIT");
        if (!sin || !sout || !en)
          fail(ErrorCode::syntax, "configurable macro " + c.name + " needs SIN, SOUT and EN connections");
        inst.configurable = true;
        inst.programmed = false;
        inst.mask = TruthTable(ctype->lut_width, 0);
      } else {
        if (!c.init) fail(ErrorCode::width_mismatch, c.type + " " + c.name + " has no INIT (" + where(c.at) + ")");
        try {
          inst.mask = TruthTable::from_hex(ctype->lut_width, *c.init);
        } catch (const Error& e) {
          fail(e.code(), std::string(e.what()) + " (instance " + c.name + ", " + where(c.at) + ")");
        }
      }
    } else if (c.init) {
      fail(ErrorCode::syntax, "INIT is only valid on LUT cells (" + where(c.at) + ")");
    }
    const InstId id = nl.add_instance(std::move(inst));
    if (ctype->configurable) cfg.push_back({id, *sin, *sout, c.at});
  }

  for (const auto& p : m.outputs) {
    if (config_nets.count(p)) continue;
    Instance po;
    po.name = p;
    po.kind = CellKind::po;
    po.inputs.push_back(nl.find_or_add_net(canonical.at(p)));
    nl.add_instance(std::move(po));
  }

  // Rebuild the configuration chain from SIN/SOUT connectivity.
  if (!cfg.empty()) {
    std::map<std::string, size_t> by_sin, by_sout;
    for (size_t i = 0; i < cfg.size(); ++i) {
      if (!by_sin.emplace(cfg[i].sin, i).second)
        fail(ErrorCode::multiple_drivers, "configuration net " + cfg[i].sin + " feeds two SIN pins");
      if (!by_sout.emplace(cfg[i].sout, i).second)
        fail(ErrorCode::multiple_drivers, "configuration net " + cfg[i].sout + " is driven by two SOUT pins");
    }
    std::optional<size_t> head;
    for (size_t i = 0; i < cfg.size(); ++i)
      if (!by_sout.count(cfg[i].sin)) {
        if (head) fail(ErrorCode::syntax, "configuration chain has more than one head");
        head = i;
      }
    if (!head) fail(ErrorCode::syntax, "configuration chain is circular");
    std::vector<bool> used(cfg.size(), false);
    for (std::optional<size_t> cur = head; cur;) {
      if (used[*cur]) fail(ErrorCode::syntax, "configuration chain is circular");
      used[*cur] = true;
      nl.config_chain.push_back(cfg[*cur].inst);
      auto it = by_sin.find(cfg[*cur].sout);
      cur = it == by_sin.end() ? std::nullopt : std::optional<size_t>(it->second);
    }
    if (nl.config_chain.size() != cfg.size()) fail(ErrorCode::syntax, "configuration chain is broken");
  }

  nl.finalize();
  return nl;
}

}  // namespace

Netlist parse_verilog(std::string_view text) {
  Lexer lex(text);
  Parser p(lex.run());
  return build(p.parse());
}

Netlist read_verilog_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::io, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_verilog(ss.str());
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

}  // namespace easic
