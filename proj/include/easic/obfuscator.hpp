#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "easic/netlist.hpp"
#include "easic/paths.hpp"
#include "easic/timing.hpp"

namespace easic {

/// Static / reconfigurable split of the LUTs of one netlist.
struct Partition {
  std::vector<InstId> static_luts;     // in conversion order
  std::vector<InstId> reconfigurable;  // ascending instance hash
  std::vector<std::string> warnings;

  size_t num_luts() const { return static_luts.size() + reconfigurable.size(); }
  /// Share of reconfigurable LUTs, in percent (100 for a LUT-free netlist).
  double obfuscation_percent() const;
};

/// Timing after each conversion of the obfuscation loop.
struct ObfuscationStep {
  InstId lut;
  double cp;
  double sumcp;
  bool filled;  // converted outside the path loop
};

struct ObfuscationResult {
  Partition partition;
  std::vector<ObfuscationStep> steps;
  double initial_cp = 0, initial_sumcp = 0;
  double final_cp = 0, final_sumcp = 0;
  TimingState timing;
  /// `netlist` with the state of every static LUT set.
  Netlist netlist;
};

/// Static LUT count for an obfuscation percentage: round-half-up((100 - pct) * n / 100).
unsigned static_target_from_percent(double obf_percent, size_t num_luts);

/// Greedy critical-path conversion: repeatedly take the slowest LUT of the
/// current critical path and make it static, dropping paths whose slowest LUT
/// is already static, until `target_static` LUTs are static. LUTs left when the
/// path list runs out are converted in hash order, with a warning.
ObfuscationResult obfuscate(const Netlist& netlist, const std::vector<TimedPath>& paths, unsigned target_static,
                            const DelayModel& model);

struct AreaModel {
  std::array<double, 6> lut_area{36.00, 64.80, 117.00, 259.20, 491.40, 957.60};  // um^2
  double gate_area = 1.44;  // per INV / BUF / 2-input gate

  static AreaModel defaults() { return {}; }
};

AreaModel area_model_from_json(const std::string& text);
std::string area_model_to_json(const AreaModel& model);

struct AreaReport {
  double reconfigurable = 0;  // A_re
  double static_logic = 0;    // A_st
  double total = 0;           // A
};

/// Gate count of the decoded form of `mask` (constants cost nothing).
unsigned static_gate_count(const TruthTable& mask);

AreaReport estimate_area(const Partition& partition, const Netlist& netlist, const AreaModel& model);

/// Replaces LUT `lut` of `netlist` (in place, before finalize) with INV / AND2 /
/// OR2 / BUF or tie cells realizing its minimized SOP. Gate names are prefixed
/// with "<lut>/". The LUT instance is killed.
void decode_static(Netlist& netlist, InstId lut);

/// Shift chain bits of the reconfigurable LUTs.
struct Bitstream {
  struct Entry {
    std::string instance;
    unsigned width;
    size_t offset;  // first bit of this LUT in `bits`
  };
  std::vector<Entry> chain;
  std::vector<bool> bits;  // bits[offset + i] = mask bit i

  size_t length() const { return bits.size(); }
  /// Bytes in chain order, bit 0 of each byte first; two hex digits per byte.
  std::string to_hex() const;
  /// JSON manifest with the chain, offsets and hex payload.
  std::string manifest_json() const;
  static Bitstream from_manifest_json(const std::string& text);
};

/// Chain = reconfigurable LUTs sorted by hash; bit 0 of the first LUT first.
/// Throws contract when there is nothing to program.
Bitstream gen_bitstream(const Partition& partition, const Netlist& netlist);

/// Static LUTs decoded to gates; reconfigurable LUTs become unprogrammed
/// configurable macros on a chain in bitstream order.
Netlist make_hybrid(const Netlist& netlist, const Partition& partition);

/// Copy of `hybrid` with every chain LUT programmed from `bitstream`.
Netlist program(const Netlist& hybrid, const Bitstream& bitstream);

/// `set_case <inst>/cfg[<i>] <b>` per configuration bit, in chain order.
std::string gen_case_constraints(const Bitstream& bitstream);

struct VerificationReport {
  bool equivalent = false;
  uint64_t vectors = 0;
  bool exhaustive = false;
  std::string mismatch_output;
  std::vector<std::pair<std::string, bool>> counterexample;
};

/// Programs `hybrid` with `bitstream` and compares it with `original`.
VerificationReport verify_equivalence(const Netlist& original, const Netlist& hybrid, const Bitstream& bitstream,
                                      uint64_t vectors = 10000);

}  // namespace easic
