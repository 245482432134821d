#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "easic/fc.hpp"
#include "easic/netlist.hpp"
#include "easic/obfuscator.hpp"
#include "easic/paths.hpp"
#include "easic/pinswap.hpp"
#include "easic/timing.hpp"

namespace easic {

/// Everything a run needs; round-trips through JSON.
struct RunConfig {
  std::string netlist;                // .v or .json
  std::string timing;                 // optional paths JSON; enumerated when empty
  std::vector<double> obf{100.0};     // percentages
  std::string delay_model;            // optional JSON
  std::string area_model;             // optional JSON
  bool decompose = false;
  double pinswap_freq = 0;            // MHz, 0 = off
  unsigned swap_cap = 200;
  std::string output_dir = "easic_out";
  std::string fc_cache;               // optional FC table cache file
  double delay_weight = 2000.0;       // um^2 per ns in the decomposition cost
  uint64_t verify_vectors = 10000;

  /// Throws contract errors for out-of-range values.
  void validate() const;
  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct FlowOptions {
  DelayModel delay = DelayModel::defaults();
  AreaModel area = AreaModel::defaults();
  bool decompose = false;
  double pinswap_freq = 0;
  unsigned swap_cap = 200;
  uint64_t verify_vectors = 10000;
};

/// One sweep / report row.
struct ReportRow {
  double obf_percent = 0;
  double cp = 0, sumcp = 0;  // ns, obfuscation timing model
  AreaReport area;           // um^2, final netlist
  size_t luts_re = 0, luts_st = 0;
};

struct FlowResult {
  std::string design;
  double obf_percent = 0;
  ObfuscationResult obfuscation;
  Netlist netlist;  // final netlist, static LUTs tagged
  Partition partition;
  Bitstream bitstream;  // empty when nothing is reconfigurable
  Netlist hybrid;
  std::optional<SwapSweepResult> pinswap;
  ReportRow row;
  VerificationReport verification;
  std::vector<std::string> notices;
};

/// Transform a preprocessed netlist at one obfuscation level:
/// obfuscate, decompose, pin swap, bitstream, hybrid, then verify against `original`.
/// `heuristic` is required when decomposition is on.
FlowResult run_flow(const Netlist& original, const Preprocessed& pre, double obf_percent, const FlowOptions& options,
                    FcHeuristic* heuristic = nullptr);

/// Output files of one run, name -> contents.
std::map<std::string, std::string> flow_artifacts(const FlowResult& result, const FlowOptions& options);

std::string report_csv_header();
std::string report_csv_row(const ReportRow& row);
std::string sweep_csv(const std::vector<ReportRow>& rows);

/// Empty when sumCP and A_re are non-decreasing with rising obfuscation; otherwise a description.
std::string check_sweep_monotone(std::vector<ReportRow> rows);

/// Netlist by extension (.json or Verilog).
Netlist load_netlist(const std::string& path);

}  // namespace easic
