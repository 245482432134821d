#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "easic/netlist.hpp"
#include "easic/obfuscator.hpp"
#include "easic/timing.hpp"
#include "easic/truth_table.hpp"

namespace easic {

/// Area in 0.01 um^2 and delay in ps, so sums and comparisons are exact.
struct FcCost {
  int64_t area = 0;
  int64_t delay = 0;

  double area_um2() const { return static_cast<double>(area) / 100.0; }
  double delay_ns() const { return static_cast<double>(delay) / 1000.0; }
  friend bool operator==(const FcCost&, const FcCost&) = default;
};

/// Per-width LUT area and average delay plus the delay weight of the scalar cost.
struct FcCostModel {
  std::array<int64_t, 6> area{};   // 0.01 um^2
  std::array<int64_t, 6> delay{};  // ps
  /// um^2 per ns. Large enough that a shallower tree wins over a slightly smaller, deeper one.
  double delay_weight = 2000.0;

  static FcCostModel from_models(const AreaModel& area, const DelayModel& delay, double delay_weight = 2000.0);
  static FcCostModel defaults() { return from_models(AreaModel::defaults(), DelayModel::defaults()); }

  /// area + w * delay, in units of 1e-5 um^2.
  int64_t scalar(const FcCost& c) const;
  /// Strict order: scalar, then area, then delay.
  bool better(const FcCost& a, const FcCost& b) const;
  /// Identifies the model in cache files.
  uint64_t hash() const;
};

struct FcNode;
using FcTree = std::shared_ptr<const FcNode>;

/// A node input: a positive leaf variable or a child node.
struct FcInput {
  int var = -1;
  FcTree node;

  bool is_leaf() const { return node == nullptr; }
};

/// LUT node of a fanout-free tree; bit i of `mask` is the output for input vector i.
struct FcNode {
  TruthTable mask;
  std::vector<FcInput> inputs;
};

/// Implementation of a single-output function: a constant, a positive literal
/// (both free) or a LUT tree.
struct LutImpl {
  enum class Kind : uint8_t { constant, literal, tree };
  Kind kind = Kind::constant;
  bool value = false;  // constant
  unsigned var = 0;    // literal
  FcTree root;         // tree
  FcCost cost;

  static LutImpl constant(bool value);
  static LutImpl literal(unsigned var);
  static LutImpl tree(FcTree root, const FcCostModel& model);

  /// Function over `width` variables (leaves index those variables).
  TruthTable evaluate(unsigned width) const;
  unsigned num_luts() const;
  /// Histogram: widths[m-1] = number of m-input nodes.
  std::array<unsigned, 6> node_widths() const;
  /// Nested text form, e.g. LUT2:8(x0,LUT2:6(x1,x2)).
  std::string to_string() const;
};

FcCost tree_cost(const FcTree& root, const FcCostModel& model);

/// Single LUT over the support of `f` (a free constant or positive literal when
/// the support is that small; a negative literal is a LUT1).
LutImpl naive_impl(const TruthTable& f, const FcCostModel& model);

/// Optimal fanout-free LUT trees for every function of up to `n` inputs, held
/// as one implementation per NPN class.
class AllImp {
 public:
  /// Exact search over trees of 2..n-1 input LUT nodes whose area stays below
  /// one n-input LUT; anything not strictly cheaper in both area and scalar
  /// cost than a single LUT over its support is implemented naively.
  static AllImp build(unsigned n, const FcCostModel& model);

  /// Reads `path` when it holds a table for the same n and model, otherwise
  /// builds one and writes it there (best effort). `force` always rebuilds.
  static AllImp load_or_build(const std::string& path, unsigned n, const FcCostModel& model, bool force = false);

  std::string serialize() const;
  static AllImp deserialize(std::string_view bytes, const FcCostModel& model);

  unsigned n() const { return n_; }
  const FcCostModel& model() const { return model_; }
  /// Class representative (n-input mask) -> implementation over n variables.
  const std::unordered_map<uint64_t, LutImpl>& classes() const { return classes_; }

  /// Implementation of `f` (any width up to 6) whose support has at most n variables.
  LutImpl lookup(const TruthTable& f) const;

  friend bool operator==(const AllImp& a, const AllImp& b);

 private:
  unsigned n_ = 0;
  FcCostModel model_;
  std::unordered_map<uint64_t, LutImpl> classes_;
};

/// Default cache file name for a table: fc<n>-<model hash>.bin.
std::string all_imp_cache_name(unsigned n, const FcCostModel& model);

struct FcHeurOptions {
  size_t association_cap = 50000;  // not-comparable pair attempts per function
};

/// Cofactor-driven decomposition for functions of up to 6 inputs, memoized across calls.
class FcHeuristic {
 public:
  FcHeuristic(const AllImp& table, FcHeurOptions options = {});

  /// Never costlier than the naive single LUT (area and scalar); table result when the support is <= n.
  LutImpl decompose(const TruthTable& f);

  size_t memo_size() const { return memo_.size(); }
  const FcCostModel& model() const { return model_; }

 private:
  const AllImp* table_;
  FcCostModel model_;
  FcHeurOptions options_;
  std::unordered_map<uint64_t, LutImpl> memo_;  // keyed by the 6-variable table

  LutImpl solve(uint64_t f);
};

struct DecomposedNetlist {
  Netlist netlist;
  Partition partition;  // static LUTs carried over, reconfigurable = new tree nodes and untouched LUTs
};

/// Replaces every reconfigurable LUT by its decomposition tree. The tree root
/// keeps the instance name and output net; inner nodes are named "<lut>/d<i>".
/// Constant or literal results leave the LUT in place.
DecomposedNetlist decompose_netlist(const Netlist& netlist, const Partition& partition, FcHeuristic& heuristic);

}  // namespace easic
