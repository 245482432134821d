#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "easic/error.hpp"
#include "easic/isop.hpp"
#include "easic/npn.hpp"
#include "easic/truth_table.hpp"

using namespace easic;

namespace {

TruthTable random_tt(std::mt19937_64& rng, unsigned k) { return {k, rng() & TruthTable::mask_for(k)}; }

std::vector<unsigned> random_perm(std::mt19937_64& rng, unsigned k) {
  std::vector<unsigned> p(k);
  std::iota(p.begin(), p.end(), 0u);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// Oracle: evaluate a permuted table by explicit rewiring of a bool vector.
bool rewired_eval(const TruthTable& tt, const std::vector<unsigned>& perm, uint8_t flips, uint64_t a) {
  std::vector<bool> b(tt.width());
  for (unsigned j = 0; j < tt.width(); ++j) b[perm[j]] = ((a >> j) & 1) != ((flips >> j) & 1);
  uint64_t idx = 0;
  for (unsigned i = 0; i < tt.width(); ++i)
    if (b[i]) idx |= uint64_t{1} << i;
  return tt.bit(idx);
}

}  // namespace

TEST_CASE("eval follows the I0-is-LSB convention") {
  const TruthTable and2(2, 0x8);
  CHECK(eval(and2, 3));
  for (uint64_t a : {0, 1, 2}) CHECK_FALSE(eval(and2, a));
  const bool v[] = {true, false};
  CHECK(eval(TruthTable(2, 0x6), std::span<const bool>(v)));
  for (uint64_t a = 0; a < 64; ++a) CHECK_FALSE(eval(TruthTable(6, 0), a));
  const bool w[] = {true};
  CHECK_THROWS_AS(eval(and2, std::span<const bool>(w)), Error);
}

TEST_CASE("hex serialization") {
  CHECK(TruthTable(2, 0x8).to_hex() == "4'h8");
  CHECK(TruthTable(6, 1).to_hex() == "64'h0000000000000001");
  CHECK(TruthTable(1, 2).to_hex() == "2'h2");
  CHECK(TruthTable::from_hex(3, "8'h10").bits() == 0x10);
  CHECK(TruthTable::from_hex(2, "4'b1000").bits() == 0x8);
  try {
    TruthTable::from_hex(6, "63'h0");
    FAIL("expected width mismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::width_mismatch);
  }
  CHECK_THROWS_AS(TruthTable(2, 0x10), Error);
  std::mt19937_64 rng(7);
  for (unsigned k = 1; k <= 6; ++k)
    for (int i = 0; i < 50; ++i) {
      const TruthTable t = random_tt(rng, k);
      CHECK(TruthTable::from_hex(k, t.to_hex()) == t);
    }
}

TEST_CASE("cofactor") {
  const TruthTable and2(2, 0x8);
  CHECK(cofactor(and2, 0, true) == TruthTable::variable(2, 1));
  CHECK(cofactor(and2, 0, false).is_const0());
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const TruthTable t = random_tt(rng, 4);
    for (unsigned v = 0; v < 4; ++v)
      for (bool pol : {false, true}) {
        const TruthTable c = cofactor(t, v, pol);
        CHECK_FALSE(c.depends_on(v));
        for (uint64_t a = 0; a < 16; ++a) {
          const uint64_t pinned = pol ? (a | (1u << v)) : (a & ~(uint64_t{1} << v));
          CHECK(c.bit(a) == t.bit(pinned));
        }
      }
  }
}

TEST_CASE("cube cofactor") {
  const Cube c12{0b0011, 0b0011};
  const auto r = cube_cofactor(TruthTable(4, 0x8000), c12);
  CHECK(r.function == (TruthTable::variable(4, 2) & TruthTable::variable(4, 3)));
  CHECK_FALSE(r.constant);
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const TruthTable t = random_tt(rng, 5);
    for (unsigned v = 0; v < 5; ++v) {
      const Cube single{uint8_t(1u << v), uint8_t((i & 1) << v)};
      CHECK(cube_cofactor(t, single).function == cofactor(t, v, i & 1));
    }
    const unsigned v1 = rng() % 5, v2 = (v1 + 1 + rng() % 4) % 5;
    const uint8_t care = uint8_t((1u << v1) | (1u << v2));
    const uint8_t value = uint8_t(rng() & care);
    const auto cc = cube_cofactor(t, Cube{care, value});
    for (uint64_t a = 0; a < 32; ++a) {
      const uint64_t pinned = (a & ~uint64_t{care}) | value;
      CHECK(cc.function.bit(a) == t.bit(pinned));
    }
    CHECK(cc.constant == cc.function.is_constant());
  }
  CHECK(cube_cofactor(TruthTable(2, 0x8), Cube{1, 0}).constant);
  CHECK_THROWS_AS(cube_cofactor(TruthTable(2, 0x8), Cube{}), Error);
}

TEST_CASE("permute_inputs") {
  const TruthTable x(3, 0xB4);
  const std::vector<unsigned> id{0, 1, 2};
  CHECK(permute_inputs(x, id) == x);
  const std::vector<unsigned> sw{1, 0};
  CHECK(permute_inputs(TruthTable(2, 0x6), sw) == TruthTable(2, 0x6));
  const std::vector<unsigned> bad{0, 0};
  CHECK_THROWS_AS(permute_inputs(TruthTable(2, 0x6), bad), Error);

  std::mt19937_64 rng(3);
  const std::vector<unsigned> p201{2, 0, 1};
  for (int i = 0; i < 50; ++i) {
    const TruthTable t = random_tt(rng, 3);
    const TruthTable r = permute_inputs(t, p201);
    for (uint64_t a = 0; a < 8; ++a) CHECK(r.bit(a) == rewired_eval(t, p201, 0, a));
  }
  // Round trip over 10,000 random (tt, perm).
  int failures = 0;
  for (int i = 0; i < 10000; ++i) {
    const unsigned k = 1 + rng() % 6;
    const TruthTable t = random_tt(rng, k);
    const auto p = random_perm(rng, k);
    std::vector<unsigned> inv(k);
    for (unsigned j = 0; j < k; ++j) inv[p[j]] = j;
    if (permute_inputs(permute_inputs(t, p), inv) != t) ++failures;
    const uint8_t fl = uint8_t(rng() & ((1u << k) - 1));
    const TruthTable r = permute_inputs(t, p, fl);
    for (uint64_t a = 0; a < t.num_bits(); a += 7)
      if (r.bit(a) != rewired_eval(t, p, fl, a)) ++failures;
  }
  CHECK(failures == 0);
}

TEST_CASE("Shannon identity") {
  std::mt19937_64 rng(4);
  const TruthTable mux(3, 0xCA);  // I2 ? I1 : I0
  for (int i = 0; i < 500; ++i) {
    const unsigned k = 1 + rng() % 6;
    const TruthTable t = random_tt(rng, k);
    for (unsigned v = 0; v < k; ++v) {
      const TruthTable ops[] = {cofactor(t, v, false), cofactor(t, v, true), TruthTable::variable(k, v)};
      CHECK(apply_operator(mux, ops) == t);
    }
  }
}

TEST_CASE("apply_operator") {
  const TruthTable x0 = TruthTable::variable(2, 0), x1 = TruthTable::variable(2, 1);
  const TruthTable ab[] = {x0, x1};
  CHECK(apply_operator(TruthTable(2, 0x8), ab) == TruthTable(2, 0x8));
  std::mt19937_64 rng(5);
  const TruthTable f = random_tt(rng, 4);
  const TruthTable ff[] = {f, f};
  CHECK(apply_operator(TruthTable(2, 0x6), ff).is_const0());
  CHECK_THROWS_AS(apply_operator(TruthTable(3, 0xCA), ff), Error);
  for (int i = 0; i < 50; ++i) {
    const TruthTable o[] = {random_tt(rng, 4), random_tt(rng, 4), random_tt(rng, 4)};
    const TruthTable r = apply_operator(TruthTable(3, 0xCA), o);
    for (uint64_t a = 0; a < 16; ++a) CHECK(r.bit(a) == (o[2].bit(a) ? o[1].bit(a) : o[0].bit(a)));
  }
}

TEST_CASE("support and shrink") {
  const TruthTable t = TruthTable::variable(6, 3) ^ TruthTable::variable(6, 5);
  CHECK(t.support() == 0b101000);
  std::vector<unsigned> vars;
  const TruthTable s = shrink_to_support(t, &vars);
  CHECK(s == TruthTable(2, 0x6));
  CHECK(vars == std::vector<unsigned>{3, 5});
  CHECK(extend(TruthTable(2, 0x8), 3) == TruthTable(3, 0x88));
}

TEST_CASE("NPN canonicalization") {
  const TruthTable and2(2, 0x8);
  const TruthTable nor_inv = permute_inputs(TruthTable(2, 0x1), std::vector<unsigned>{0, 1}, uint8_t(3));
  CHECK(nor_inv == and2);
  CHECK(npn_canonicalize(and2).canonical == npn_canonicalize(TruthTable(2, 0x1)).canonical);

  std::mt19937_64 rng(6);
  for (int i = 0; i < 300; ++i) {
    const unsigned k = 1 + rng() % 6;
    const TruthTable t = random_tt(rng, k);
    const NpnResult r = npn_canonicalize(t);
    CHECK(r.transform.apply(r.canonical) == t);
    CHECK(r.transform.inverse().apply(t) == r.canonical);
    CHECK(npn_canonicalize(r.canonical).canonical == r.canonical);
    NpnTransform rt;
    rt.width = uint8_t(k);
    const auto p = random_perm(rng, k);
    std::copy(p.begin(), p.end(), rt.perm.begin());
    rt.input_flips = uint8_t(rng() & ((1u << k) - 1));
    rt.output_flip = rng() & 1;
    CHECK(rt.inverse().apply(rt.apply(t)) == t);
    CHECK(npn_canonicalize(rt.apply(t)).canonical == r.canonical);
  }
}

TEST_CASE("NPN class counts by exhaustive sweep") {
  for (unsigned k = 1; k <= 3; ++k) {
    std::set<uint64_t> seen;
    for (uint64_t f = 0; f < (uint64_t{1} << (1u << k)); ++f) seen.insert(npn_canonicalize(TruthTable(k, f)).canonical.bits());
    const auto reps = npn_class_representatives(k);
    CHECK(seen == std::set<uint64_t>(reps.begin(), reps.end()));
  }
  CHECK(npn_class_representatives(2).size() == 4);
  CHECK(npn_class_representatives(3).size() == 14);
  const auto& table = npn_class_table(4);
  std::set<uint16_t> reps(table.begin(), table.end());
  CHECK(reps.size() == 222);
  // The dense table and the search agree on a sample of the 65,536 functions.
  for (uint32_t f = 0; f < 65536; f += 37) CHECK(npn_canonicalize(TruthTable(4, f)).canonical.bits() == table[f]);
}

TEST_CASE("isop_minimize") {
  const SopCover one = isop_minimize(TruthTable::constant(3, true));
  REQUIRE(one.cubes.size() == 1);
  CHECK(one.cubes[0].is_universal());
  CHECK(isop_minimize(TruthTable(3, 0)).cubes.empty());
  const SopCover x = isop_minimize(TruthTable(2, 0x6));
  CHECK(x.cubes.size() == 2);
  CHECK(x.num_literals() == 4);
  CHECK(x.evaluate() == TruthTable(2, 0x6));

  std::mt19937_64 rng(8);
  for (unsigned k = 1; k <= 6; ++k)
    for (int i = 0; i < (k == 6 ? 60 : 200); ++i) {
      const TruthTable t = random_tt(rng, k);
      const SopCover c = isop_minimize(t);
      CHECK(c.evaluate() == t);
      for (size_t drop = 0; drop < c.cubes.size(); ++drop) {
        SopCover less = c;
        less.cubes.erase(less.cubes.begin() + long(drop));
        CHECK(less.evaluate() != t);
      }
    }
}
