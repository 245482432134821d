#pragma once

#include <string>
#include <string_view>

#include "easic/netlist.hpp"

namespace easic {

/// Parses the structural subset documented in docs/verilog_subset.md.
/// Errors carry a distinct ErrorCode; syntax errors report "line:col".
Netlist parse_verilog(std::string_view text);
Netlist read_verilog_file(const std::string& path);

/// Emits the netlist. LUTs with `configurable` set become LUTk_CFG macros wired
/// into one configuration chain (cfg_sin -> ... -> cfg_sout, shared cfg_en) in
/// `config_chain` order; all other LUTs keep their INIT. Byte-deterministic.
std::string emit_verilog(const Netlist& netlist);

/// Verilog identifier, escaped when it is not a simple identifier.
std::string verilog_name(const std::string& name);

}  // namespace easic
