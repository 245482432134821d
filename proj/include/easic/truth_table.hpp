#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace easic {

/// A k-input single-output Boolean function, 1 <= k <= 6, stored as a 2^k-bit mask.
///
/// Bit i of the mask is the output for the input vector whose binary value is i,
/// with pin I0 as the least-significant bit. This matches the INIT ordering of
/// FPGA LUT primitives and is used by every parser/emitter in the library.
class TruthTable {
 public:
  static constexpr unsigned max_width = 6;

  TruthTable() = default;
  TruthTable(unsigned width, uint64_t bits);

  static TruthTable constant(unsigned width, bool value);
  static TruthTable variable(unsigned width, unsigned var);

  unsigned width() const { return width_; }
  uint64_t bits() const { return bits_; }
  unsigned num_bits() const { return 1u << width_; }
  uint64_t full_mask() const { return mask_for(width_); }

  bool bit(uint64_t index) const { return (bits_ >> index) & 1u; }
  bool is_const0() const { return bits_ == 0; }
  bool is_const1() const { return bits_ == full_mask(); }
  bool is_constant() const { return is_const0() || is_const1(); }

  bool depends_on(unsigned var) const;
  /// Bitmask of variables the function depends on.
  unsigned support() const;
  unsigned support_size() const;

  /// `k'h<hex>` with k = 2^width, zero-padded to the full table.
  std::string to_hex() const;
  static TruthTable from_hex(unsigned width, const std::string& text);

  TruthTable operator~() const { return {width_, ~bits_ & full_mask()}; }
  friend TruthTable operator&(TruthTable a, TruthTable b);
  friend TruthTable operator|(TruthTable a, TruthTable b);
  friend TruthTable operator^(TruthTable a, TruthTable b);
  friend bool operator==(const TruthTable&, const TruthTable&) = default;
  friend auto operator<=>(const TruthTable& a, const TruthTable& b) {
    if (a.width_ != b.width_) return a.width_ <=> b.width_;
    return a.bits_ <=> b.bits_;
  }

  static uint64_t mask_for(unsigned width) {
    return width >= 6 ? ~uint64_t{0} : ((uint64_t{1} << (1u << width)) - 1);
  }

 private:
  uint8_t width_ = 1;
  uint64_t bits_ = 0;
};

/// Projection masks: bit i set iff variable v is 1 in minterm i (64-bit, width 6).
extern const std::array<uint64_t, 6> var_masks;

/// Evaluates `tt` on the assignment whose bit j is the value of input Ij.
bool eval(const TruthTable& tt, uint64_t assignment);
/// Same, with an explicit per-pin vector; its size must equal the width.
bool eval(const TruthTable& tt, std::span<const bool> assignment);

/// f with `var` pinned to `polarity`; the result keeps width k and is independent of `var`.
TruthTable cofactor(const TruthTable& tt, unsigned var, bool polarity);

/// Re-expresses the table over a different width (extra variables are don't-care).
TruthTable extend(const TruthTable& tt, unsigned new_width);
/// Drops non-support variables, packing the support into the low inputs.
/// `vars` receives the original index of each packed input.
TruthTable shrink_to_support(const TruthTable& tt, std::vector<unsigned>* vars = nullptr);

/// Literal state of a single variable inside a cube.
enum class Literal : uint8_t { absent, positive, negative };

/// A product term over up to 6 variables.
struct Cube {
  uint8_t care = 0;   // variables present
  uint8_t value = 0;  // polarity of present variables (1 = positive)

  static Cube from_literals(std::span<const Literal> literals);
  Literal literal(unsigned var) const;
  unsigned num_literals() const;
  bool is_universal() const { return care == 0; }
  /// Minterm mask of the cube over `width` variables.
  uint64_t minterms(unsigned width) const;
  friend bool operator==(const Cube&, const Cube&) = default;
  friend auto operator<=>(const Cube&, const Cube&) = default;
};

/// Result of pinning every literal of a cube. Constants are flagged so callers can skip them.
struct CubeCofactor {
  TruthTable function;
  bool constant = false;
};

CubeCofactor cube_cofactor(const TruthTable& tt, const Cube& cube);

/// result(a) == tt(b) where bit perm[j] of b equals bit j of a, xor flips bit j.
/// `perm` must be a bijection on {0..k-1}.
TruthTable permute_inputs(const TruthTable& tt, std::span<const unsigned> perm,
                          std::optional<uint8_t> flips = std::nullopt);

/// result(a) == op(operand_0(a), ..., operand_{m-1}(a)).
TruthTable apply_operator(const TruthTable& op, std::span<const TruthTable> operands);

/// Cheap in-place primitives used by exhaustive searches.
uint64_t swap_adjacent(uint64_t bits, unsigned var);
uint64_t flip_var(uint64_t bits, unsigned var);

}  // namespace easic
