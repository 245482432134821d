#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "easic/truth_table.hpp"

namespace easic {

using InstId = uint32_t;
using NetId = uint32_t;
inline constexpr uint32_t kNone = std::numeric_limits<uint32_t>::max();

enum class CellKind : uint8_t {
  pi,
  po,
  lut,
  ff,
  mux2,   // O = S ? I1 : I0
  carry,  // CO = MAJ(A, B, CI)
  buf,
  ibuf,
  obuf,
  inv,
  and_gate,  // n-ary
  or_gate,   // n-ary
  tie0,
  tie1,
};

enum class LutState : uint8_t { reconfigurable, static_logic };

const char* to_string(CellKind kind);
bool is_buffer(CellKind kind);
/// Cells that pass signals combinationally (everything except ports, FFs and ties).
bool is_combinational(CellKind kind);

/// Library cell description: logic pins in order, output pin, LUT width.
struct CellType {
  CellKind kind;
  std::vector<std::string> inputs;
  std::string output;
  unsigned lut_width = 0;
  bool configurable = false;  // LUTk_CFG macro
};

/// Resolves a cell type name (LUT1..LUT6, LUTk_CFG, FF, MUX2, CARRY, BUF, IBUF,
/// OBUF, INV, ANDn, ORn, TIE0, TIE1).
std::optional<CellType> lookup_cell_type(const std::string& type);

struct Instance {
  std::string name;
  uint64_t hash = 0;
  CellKind kind = CellKind::lut;
  std::vector<NetId> inputs;  // ordered by pin
  NetId output = kNone;       // kNone for PO
  TruthTable mask;            // LUT only; width == inputs.size()
  LutState state = LutState::reconfigurable;  // LUT only
  bool configurable = false;  // LUT emitted as a programmable macro (no INIT)
  bool programmed = true;     // false until a bitstream fills `mask`
  bool alive = true;

  bool is_lut() const { return kind == CellKind::lut; }
  unsigned lut_width() const { return static_cast<unsigned>(inputs.size()); }
};

/// Cell type name and pin names of an instance, as used in emitted files.
std::string cell_type_name(const Instance& inst);
std::vector<std::string> input_pin_names(const Instance& inst);
const char* output_pin_name(const Instance& inst);

struct PinRef {
  InstId inst;
  uint32_t pin;
  friend bool operator==(const PinRef&, const PinRef&) = default;
};

struct Net {
  std::string name;
  InstId driver = kNone;
  std::vector<PinRef> fanout;
};

/// 64-bit FNV-1a. Cells hash their instance name; ports hash "port:" + name.
uint64_t stable_hash(std::string_view text);
uint64_t instance_hash(CellKind kind, std::string_view name);

/// Flat single-output-per-instance netlist.
///
/// Ports are instances of kind pi (drives the net named after the port) and po
/// (reads one net). Edits go through add_* / kill() and must be followed by
/// finalize(), which compacts dead instances, rebuilds connectivity and checks
/// every structural invariant.
class Netlist {
 public:
  std::string name = "top";
  std::vector<Instance> instances;
  std::vector<Net> nets;
  std::vector<InstId> pis;  // declaration order
  std::vector<InstId> pos;  // declaration order
  /// Shift order of programmable LUT macros (first element receives the first bit).
  std::vector<InstId> config_chain;

  NetId add_net(const std::string& net_name);
  NetId find_or_add_net(const std::string& net_name);
  InstId add_instance(Instance inst);
  void kill(InstId id) { instances[id].alive = false; }

  std::optional<InstId> find_instance(std::string_view inst_name) const;
  std::optional<InstId> find_port(std::string_view port_name, CellKind kind) const;
  std::optional<NetId> find_net(std::string_view net_name) const;

  /// Compacts, rebuilds driver/fanout, validates. Throws easic::Error.
  void finalize();
  /// Combinational topological order over live instances (sources first).
  const std::vector<InstId>& topo_order() const { return topo_; }

  std::vector<InstId> luts() const;
  size_t count(CellKind kind) const;
  const Net& net(NetId id) const { return nets[id]; }
  const Instance& inst(InstId id) const { return instances[id]; }

 private:
  std::unordered_map<std::string, InstId> inst_by_name_;
  std::unordered_map<std::string, NetId> net_by_name_;
  std::vector<InstId> topo_;

  void compute_topo_order();
};

/// Structural equality by names: same ports, same instances with same kinds,
/// masks and pin connections (by net name modulo port-alias naming).
bool isomorphic(const Netlist& a, const Netlist& b, std::string* why = nullptr);

}  // namespace easic
