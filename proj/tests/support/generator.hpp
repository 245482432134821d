#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "easic/netlist.hpp"

namespace easic::testing {

struct GenOptions {
  unsigned num_luts = 50;
  unsigned num_pis = 12;
  unsigned num_pos = 6;
  unsigned num_ffs = 4;
  unsigned max_width = 6;
  bool primitives = true;  // sprinkle MUX2 / CARRY cells
  unsigned buffers = 0;    // random BUFs spliced into existing nets
};

/// Random LUT-mapped netlist: LUTs read earlier signals only, FFs close loops.
Netlist random_netlist(uint64_t seed, const GenOptions& opt);

/// The 50 seeded corpus netlists (20..500 LUTs).
std::vector<Netlist> generated_corpus();

/// Handcrafted fixtures shipped under data/corpus.
std::vector<std::string> handcrafted_fixture_paths();
std::string fixture_path(const std::string& name);

}  // namespace easic::testing
