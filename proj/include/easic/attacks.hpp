#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "easic/netlist.hpp"
#include "easic/obfuscator.hpp"

namespace easic {

/// Masking pattern keyed by LUT width, so equal bits of different widths stay apart.
struct PatternKey {
  unsigned width = 0;
  uint64_t mask = 0;
  friend auto operator<=>(const PatternKey&, const PatternKey&) = default;
};

struct PatternHistogram {
  std::map<PatternKey, uint64_t> entries;

  uint64_t total() const;
  size_t unique() const { return entries.size(); }
  void add(PatternKey key, uint64_t count = 1);
  void merge(const PatternHistogram& other);
  friend bool operator==(const PatternHistogram&, const PatternHistogram&) = default;
};

enum class PatternScope { static_only, all };

/// Multiset of LUT masks in scope. Static scope is what a reverse engineer sees.
PatternHistogram pattern_histogram(const Netlist& netlist, PatternScope scope);

/// Histograms of known designs and their merge.
class PatternDatabase {
 public:
  void add(const std::string& design, PatternHistogram hist);
  const std::map<std::string, PatternHistogram>& designs() const { return designs_; }
  const PatternHistogram& merged() const { return merged_; }
  /// Unique patterns over all designs.
  size_t m() const { return merged_.unique(); }

  std::string to_json() const;
  static PatternDatabase from_json(const std::string& text);

 private:
  std::map<std::string, PatternHistogram> designs_;
  PatternHistogram merged_;
};

/// log2 of the number of unique patterns; throws on zero.
double search_space_bits(size_t unique);
double search_space_bits(const PatternHistogram& hist);

struct DistributionFit {
  std::vector<double> coefficients;  // ln(count) = sum c_i * rank^i, rank from 1
  double residual = 0;               // RMS error in ln(count)
  double threshold = 0;              // count above which a rank is an outlier
  std::vector<double> profile;       // fitted count per rank
  std::vector<PatternKey> ranked;    // patterns by descending count, ties by key
  std::vector<PatternKey> outliers;  // patterns whose fitted count exceeds the threshold
};

/// Least-squares polynomial over rank-ordered log counts. A threshold <= 0 means
/// exp(mean ln(count) + 1).
DistributionFit predict_distribution(const PatternHistogram& exposed, unsigned degree = 3, double threshold = 0);

/// Pearson r of the count vectors aligned on the union of patterns (missing = 0).
/// Throws when the union has fewer than two patterns or either vector is constant.
double pearson_correlate(const PatternHistogram& a, const PatternHistogram& b);

struct CompositionMatch {
  std::string design;
  double r;
  std::string regime;  // "self-correlation", "cross-correlation" or "no correlation"
};

struct CompositionReport {
  std::vector<CompositionMatch> ranking;  // descending r, ties by name
  std::vector<std::string> skipped;       // "<design>: <reason>"
};

struct CompositionThresholds {
  double self = 0.97;
  double cross = 0.86;
};

CompositionReport composition_attack(const PatternHistogram& exposed, const PatternDatabase& db,
                                     CompositionThresholds thresholds = {});

/// ISCAS .bench circuit. FFs are cut into pseudo inputs and outputs and every
/// reconfigurable LUT becomes a key-gated minterm network.
struct BenchCircuit {
  struct Gate {
    std::string output;
    std::string op;  // AND OR NAND NOR XOR NOT BUF
    std::vector<std::string> inputs;
  };
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<Gate> gates;
  /// Simulator-style names per input / output: port name, "ff:<instance>" or the key input itself.
  std::vector<std::string> input_origin;
  std::vector<std::string> output_origin;
  size_t key_length = 0;
  /// Netlist net name -> bench wire (export only).
  std::unordered_map<std::string, std::string> net_wire;

  std::string to_text() const;
  /// Parses INPUT/OUTPUT/gate lines; origins are set to the wire names.
  static BenchCircuit parse(const std::string& text);
  /// Bit-parallel evaluation; one word per input in `inputs` order, one per output.
  std::vector<uint64_t> evaluate(const std::vector<uint64_t>& input_words) const;
};

/// Bench compiled to wire indices for repeated bit-parallel runs.
class BenchEvaluator {
 public:
  /// Throws on undefined wires and cycles.
  explicit BenchEvaluator(const BenchCircuit& bench);

  size_t num_wires() const { return names_.size(); }
  std::optional<size_t> wire(const std::string& name) const;
  /// Every wire value for one word per bench input.
  std::vector<uint64_t> values(const std::vector<uint64_t>& input_words) const;
  std::vector<uint64_t> outputs(const std::vector<uint64_t>& input_words) const;

 private:
  enum class Op : uint8_t { and_, or_, nand, nor, xor_, xnor, not_, buf };
  struct Step {
    Op op;
    uint32_t out;
    std::vector<uint32_t> ins;
  };
  std::vector<std::string> names_;
  std::unordered_map<std::string, size_t> index_;
  std::vector<uint32_t> inputs_, outputs_;
  std::vector<Step> steps_;  // topological
};

std::string key_input_name(size_t bit);

/// Key bit b + i programs minterm i of the LUT at chain offset b.
BenchCircuit export_bench(const Netlist& netlist, const Partition& partition);

struct SatReport {
  std::string source;  // "tseitin" or "log"
  std::string attack;
  std::optional<double> obf_percent;
  size_t key_length = 0;
  uint64_t variables = 0;
  uint64_t clauses = 0;
  std::optional<uint64_t> iterations;
  double computed_ratio = 0;             // clauses / variables
  std::optional<double> reported_ratio;  // as printed in a log
  bool ideal_region = false;             // ratio within tolerance of 4.2

  double ratio() const { return reported_ratio.value_or(computed_ratio); }
  std::string to_json() const;
};

inline constexpr double kIdealSatRatio = 4.2;

/// Tseitin counts: one variable per wire; AND/OR/NAND/NOR with n inputs give
/// n + 1 clauses, NOT/BUF 2, XOR with n inputs 4(n - 1) clauses and n - 2 extra variables.
SatReport sat_ratio_report(const BenchCircuit& bench, double ideal_tolerance = 0.5);

/// "key: value" lines (attack, obf, key_length, variables, clauses, iterations, ratio);
/// '#' starts a comment. Unknown keys or bad numbers are syntax errors.
SatReport parse_solver_log(const std::string& text, double ideal_tolerance = 0.5);

}  // namespace easic
