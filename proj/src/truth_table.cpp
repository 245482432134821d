#include "easic/truth_table.hpp"

#include <bit>
#include <cctype>
#include <cstdio>

#include "easic/error.hpp"

namespace easic {

const std::array<uint64_t, 6> var_masks = {
    0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
    0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull,
};

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::contract: return "contract";
    case ErrorCode::syntax: return "syntax";
    case ErrorCode::multiple_drivers: return "multiple-drivers";
    case ErrorCode::width_mismatch: return "width-mismatch";
    case ErrorCode::combinational_cycle: return "combinational-cycle";
    case ErrorCode::undeclared_net: return "undeclared-net";
    case ErrorCode::dangling_input: return "dangling-input";
    case ErrorCode::unknown_cell: return "unknown-cell";
    case ErrorCode::unknown_instance: return "unknown-instance";
    case ErrorCode::hash_collision: return "hash-collision";
    case ErrorCode::empty_input: return "empty-input";
    case ErrorCode::io: return "io";
    case ErrorCode::verification_failed: return "verification-failed";
  }
  return "unknown";
}

TruthTable::TruthTable(unsigned width, uint64_t bits) : width_(static_cast<uint8_t>(width)), bits_(bits) {
  require(width >= 1 && width <= max_width, "truth table width must be in 1..6");
  require((bits & ~mask_for(width)) == 0, "truth table has bits above 2^k");
}

TruthTable TruthTable::constant(unsigned width, bool value) { return {width, value ? mask_for(width) : 0}; }

TruthTable TruthTable::variable(unsigned width, unsigned var) {
  require(var < width, "variable index out of range");
  return {width, var_masks[var] & mask_for(width)};
}

TruthTable operator&(TruthTable a, TruthTable b) {
  require(a.width_ == b.width_, "width mismatch in &");
  return {a.width_, a.bits_ & b.bits_};
}
TruthTable operator|(TruthTable a, TruthTable b) {
  require(a.width_ == b.width_, "width mismatch in |");
  return {a.width_, a.bits_ | b.bits_};
}
TruthTable operator^(TruthTable a, TruthTable b) {
  require(a.width_ == b.width_, "width mismatch in ^");
  return {a.width_, a.bits_ ^ b.bits_};
}

bool TruthTable::depends_on(unsigned var) const {
  if (var >= width_) return false;
  const unsigned shift = 1u << var;
  return (((bits_ >> shift) ^ bits_) & ~var_masks[var] & full_mask()) != 0;
}

unsigned TruthTable::support() const {
  unsigned s = 0;
  for (unsigned v = 0; v < width_; ++v)
    if (depends_on(v)) s |= 1u << v;
  return s;
}

unsigned TruthTable::support_size() const { return static_cast<unsigned>(std::popcount(support())); }

std::string TruthTable::to_hex() const {
  const unsigned nbits = num_bits();
  const unsigned digits = nbits < 4 ? 1 : nbits / 4;
  std::string out = std::to_string(nbits) + "'h";
  for (int d = static_cast<int>(digits) - 1; d >= 0; --d) {
    const unsigned nib = static_cast<unsigned>((bits_ >> (4 * d)) & 0xf);
    out.push_back("0123456789ABCDEF"[nib]);
  }
  return out;
}

TruthTable TruthTable::from_hex(unsigned width, const std::string& text) {
  require(width >= 1 && width <= max_width, "truth table width must be in 1..6");
  const auto tick = text.find('\'');
  if (tick == std::string::npos || tick + 1 >= text.size())
    fail(ErrorCode::syntax, "truth table literal must look like <bits>'h<hex>: " + text);
  const unsigned declared = static_cast<unsigned>(std::stoul(text.substr(0, tick)));
  if (declared != (1u << width))
    fail(ErrorCode::width_mismatch, "INIT width " + std::to_string(declared) + " does not match LUT" +
                                        std::to_string(width) + " (expected " + std::to_string(1u << width) + ")");
  const char base = static_cast<char>(std::tolower(static_cast<unsigned char>(text[tick + 1])));
  const std::string digits = text.substr(tick + 2);
  if (digits.empty()) fail(ErrorCode::syntax, "empty truth table literal: " + text);
  uint64_t value = 0;
  for (char c : digits) {
    if (c == '_') continue;
    unsigned d;
    if (base == 'h') {
      if (!std::isxdigit(static_cast<unsigned char>(c))) fail(ErrorCode::syntax, "bad hex digit in " + text);
      d = std::isdigit(static_cast<unsigned char>(c)) ? unsigned(c - '0') : unsigned(std::tolower(c) - 'a' + 10);
      if (value >> 60) fail(ErrorCode::width_mismatch, "INIT value overflows: " + text);
      value = (value << 4) | d;
    } else if (base == 'b') {
      if (c != '0' && c != '1') fail(ErrorCode::syntax, "bad binary digit in " + text);
      if (value >> 63) fail(ErrorCode::width_mismatch, "INIT value overflows: " + text);
      value = (value << 1) | unsigned(c - '0');
    } else {
      fail(ErrorCode::syntax, "unsupported literal base in " + text);
    }
  }
  if (value & ~mask_for(width)) fail(ErrorCode::width_mismatch, "INIT value exceeds table width: " + text);
  return {width, value};
}

bool eval(const TruthTable& tt, uint64_t assignment) {
  require(assignment < tt.num_bits(), "assignment wider than truth table");
  return tt.bit(assignment);
}

bool eval(const TruthTable& tt, std::span<const bool> assignment) {
  require(assignment.size() == tt.width(), "assignment width mismatch");
  uint64_t a = 0;
  for (size_t j = 0; j < assignment.size(); ++j)
    if (assignment[j]) a |= uint64_t{1} << j;
  return tt.bit(a);
}

TruthTable cofactor(const TruthTable& tt, unsigned var, bool polarity) {
  require(var < tt.width(), "cofactor variable out of range");
  const unsigned shift = 1u << var;
  const uint64_t m = var_masks[var] & tt.full_mask();
  uint64_t r;
  if (polarity) {
    const uint64_t hi = tt.bits() & m;
    r = hi | (hi >> shift);
  } else {
    const uint64_t lo = tt.bits() & ~m & tt.full_mask();
    r = lo | (lo << shift);
  }
  return {tt.width(), r & tt.full_mask()};
}

TruthTable extend(const TruthTable& tt, unsigned new_width) {
  require(new_width >= tt.width() && new_width <= 6, "extend must not shrink");
  uint64_t bits = tt.bits();
  for (unsigned w = tt.width(); w < new_width; ++w) bits |= bits << (1u << w);
  return {new_width, bits};
}

TruthTable shrink_to_support(const TruthTable& tt, std::vector<unsigned>* vars) {
  std::vector<unsigned> keep;
  const unsigned sup = tt.support();
  for (unsigned v = 0; v < tt.width(); ++v)
    if (sup & (1u << v)) keep.push_back(v);
  if (vars) *vars = keep;
  const unsigned w = keep.empty() ? 1 : static_cast<unsigned>(keep.size());
  uint64_t bits = 0;
  for (uint64_t a = 0; a < (uint64_t{1} << w); ++a) {
    uint64_t b = 0;
    for (size_t j = 0; j < keep.size(); ++j)
      if (a >> j & 1) b |= uint64_t{1} << keep[j];
    if (tt.bit(b)) bits |= uint64_t{1} << a;
  }
  return {w, bits};
}

Cube Cube::from_literals(std::span<const Literal> literals) {
  require(literals.size() <= 6, "cube wider than 6 variables");
  Cube c;
  for (size_t v = 0; v < literals.size(); ++v) {
    if (literals[v] == Literal::absent) continue;
    c.care |= uint8_t(1u << v);
    if (literals[v] == Literal::positive) c.value |= uint8_t(1u << v);
  }
  return c;
}

Literal Cube::literal(unsigned var) const {
  if (!(care >> var & 1)) return Literal::absent;
  return (value >> var & 1) ? Literal::positive : Literal::negative;
}

unsigned Cube::num_literals() const { return static_cast<unsigned>(std::popcount(unsigned(care))); }

uint64_t Cube::minterms(unsigned width) const {
  uint64_t m = TruthTable::mask_for(width);
  for (unsigned v = 0; v < 6; ++v) {
    if (!(care >> v & 1)) continue;
    m &= (value >> v & 1) ? var_masks[v] : ~var_masks[v];
  }
  return m;
}

CubeCofactor cube_cofactor(const TruthTable& tt, const Cube& cube) {
  require(!cube.is_universal(), "cube cofactor requires at least one literal");
  require((cube.care >> tt.width()) == 0, "cube literal outside the table width");
  TruthTable r = tt;
  for (unsigned v = 0; v < tt.width(); ++v) {
    if (cube.care >> v & 1) r = cofactor(r, v, cube.value >> v & 1);
  }
  return {r, r.is_constant()};
}

TruthTable permute_inputs(const TruthTable& tt, std::span<const unsigned> perm, std::optional<uint8_t> flips) {
  const unsigned k = tt.width();
  require(perm.size() == k, "permutation size must equal the table width");
  unsigned seen = 0;
  for (unsigned p : perm) {
    require(p < k && !(seen >> p & 1), "permutation is not a bijection");
    seen |= 1u << p;
  }
  const uint8_t fl = flips.value_or(0);
  uint64_t bits = 0;
  for (uint64_t a = 0; a < tt.num_bits(); ++a) {
    uint64_t b = 0;
    for (unsigned j = 0; j < k; ++j) {
      const bool v = ((a >> j) & 1) ^ ((fl >> j) & 1);
      if (v) b |= uint64_t{1} << perm[j];
    }
    if (tt.bit(b)) bits |= uint64_t{1} << a;
  }
  return {k, bits};
}

TruthTable apply_operator(const TruthTable& op, std::span<const TruthTable> operands) {
  if (operands.size() != op.width())
    fail(ErrorCode::contract, "operator arity " + std::to_string(op.width()) + " does not match " +
                                  std::to_string(operands.size()) + " operands");
  const unsigned w = operands[0].width();
  for (const auto& o : operands) require(o.width() == w, "operands must share one variable universe");
  const uint64_t full = TruthTable::mask_for(w);
  uint64_t r = 0;
  for (uint64_t m = 0; m < op.num_bits(); ++m) {
    if (!op.bit(m)) continue;
    uint64_t term = full;
    for (unsigned j = 0; j < op.width(); ++j) term &= ((m >> j) & 1) ? operands[j].bits() : ~operands[j].bits();
    r |= term;
  }
  return {w, r & full};
}

uint64_t swap_adjacent(uint64_t bits, unsigned var) {
  const uint64_t lo_hi = var_masks[var] & ~var_masks[var + 1];  // x_i = 1, x_{i+1} = 0
  const uint64_t hi_lo = ~var_masks[var] & var_masks[var + 1];  // x_i = 0, x_{i+1} = 1
  const unsigned s = 1u << var;
  return (bits & ~(lo_hi | hi_lo)) | ((bits & lo_hi) << s) | ((bits & hi_lo) >> s);
}

uint64_t flip_var(uint64_t bits, unsigned var) {
  const unsigned s = 1u << var;
  return ((bits & var_masks[var]) >> s) | ((bits & ~var_masks[var]) << s);
}

}  // namespace easic
