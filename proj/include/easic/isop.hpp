#pragma once

#include <string>
#include <vector>

#include "easic/truth_table.hpp"

namespace easic {

/// Sum-of-products cover of a single-output function.
struct SopCover {
  unsigned width = 1;
  std::vector<Cube> cubes;  // empty = constant 0; one universal cube = constant 1

  uint64_t minterms() const;
  TruthTable evaluate() const;
  unsigned num_literals() const;
  std::string to_string() const;
};

/// Exact prime generation followed by essential + greedy selection and a
/// redundancy-removal pass. The result is irredundant.
SopCover isop_minimize(const TruthTable& tt);

/// Logic levels of the balanced INV / AND2 / OR2 realization of `cover`:
/// one inverter level if any literal is negative, then the AND and OR trees.
unsigned sop_depth(const SopCover& cover);

/// All prime implicants of `tt`, ordered by (care, value).
std::vector<Cube> prime_implicants(const TruthTable& tt);

}  // namespace easic
