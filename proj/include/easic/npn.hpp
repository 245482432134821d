#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "easic/truth_table.hpp"

namespace easic {

/// Input permutation, input polarity and output polarity.
///
/// apply(t, f)(a) = output_flip ^ f(b), where bit perm[j] of b equals bit j of a xor input_flips bit j.
struct NpnTransform {
  std::array<uint8_t, 6> perm{0, 1, 2, 3, 4, 5};
  uint8_t input_flips = 0;
  bool output_flip = false;
  uint8_t width = 1;

  static NpnTransform identity(unsigned width);
  TruthTable apply(const TruthTable& tt) const;
  NpnTransform inverse() const;
  friend bool operator==(const NpnTransform&, const NpnTransform&) = default;
};

struct NpnResult {
  TruthTable canonical;
  /// Maps `canonical` back to the input: transform.apply(canonical) == tt.
  NpnTransform transform;
};

/// Representative = numerically smallest mask over all 2 * 2^k * k! transforms.
/// Enumeration walks permutations by adjacent transpositions and polarities by
/// Gray code, so every candidate costs O(1) word operations.
NpnResult npn_canonicalize(const TruthTable& tt);

/// Dense canonical-representative table for all 2^(2^k) functions of k <= 4 inputs.
/// Built by orbit enumeration; entry i is the representative mask of function i.
const std::vector<uint16_t>& npn_class_table(unsigned k);
/// Distinct representatives, ascending.
std::vector<uint16_t> npn_class_representatives(unsigned k);

}  // namespace easic
