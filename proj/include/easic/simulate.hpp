#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "easic/netlist.hpp"

namespace easic {

/// 64-way bit-parallel combinational simulator. FFs are cut: Q is a pseudo
/// input and D a pseudo output, both named "ff:<instance>".
class Simulator {
 public:
  explicit Simulator(const Netlist& netlist);

  const std::vector<std::string>& input_names() const { return input_names_; }
  const std::vector<std::string>& output_names() const { return output_names_; }

  /// One 64-lane word per input (input_names order); returns one word per output.
  std::vector<uint64_t> run(std::span<const uint64_t> inputs) const;

 private:
  const Netlist* nl_;
  std::vector<std::string> input_names_, output_names_;
  std::vector<NetId> input_nets_, output_nets_;
};

/// Evaluates a LUT mask on bit-parallel input words.
uint64_t eval_lut_words(const TruthTable& mask, std::span<const uint64_t> inputs);

struct EquivalenceReport {
  bool equivalent = true;
  uint64_t vectors = 0;
  bool exhaustive = false;
  std::string mismatch_output;
  std::vector<std::pair<std::string, bool>> counterexample;  // input assignment
};

/// Compares two netlists on identical port/FF names: exhaustive when there are
/// at most `exhaustive_limit` inputs, otherwise `vectors` random stimuli
/// (fixed-seed mt19937_64) plus the all-zeros and all-ones vectors.
EquivalenceReport check_equivalence(const Netlist& a, const Netlist& b, uint64_t vectors = 10000,
                                    uint64_t seed = 0x5eed, unsigned exhaustive_limit = 12);

}  // namespace easic
