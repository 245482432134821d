#pragma once

#include <string>
#include <vector>

#include "easic/netlist.hpp"
#include "easic/paths.hpp"

namespace easic {

/// JSON interchange form of a netlist (schema in docs/formats.md).
std::string emit_json(const Netlist& netlist);
Netlist parse_json_netlist(const std::string& text);

/// {"paths":[{"elements":[["name",0.123],...]}]}
std::vector<RawPath> parse_paths_json(const std::string& text);
std::string emit_paths_json(const std::vector<TimedPath>& paths, const Netlist& netlist);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace easic
