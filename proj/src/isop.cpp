#include "easic/isop.hpp"

#include <algorithm>
#include <bit>

namespace easic {

uint64_t SopCover::minterms() const {
  uint64_t m = 0;
  for (const auto& c : cubes) m |= c.minterms(width);
  return m;
}

TruthTable SopCover::evaluate() const { return {width, minterms()}; }

unsigned SopCover::num_literals() const {
  unsigned n = 0;
  for (const auto& c : cubes) n += c.num_literals();
  return n;
}

std::string SopCover::to_string() const {
  if (cubes.empty()) return "0";
  std::string s;
  for (size_t i = 0; i < cubes.size(); ++i) {
    if (i) s += " + ";
    if (cubes[i].is_universal()) {
      s += "1";
      continue;
    }
    for (unsigned v = 0; v < width; ++v) {
      const Literal l = cubes[i].literal(v);
      if (l == Literal::absent) continue;
      s += "I" + std::to_string(v);
      if (l == Literal::negative) s += "'";
    }
  }
  return s;
}

namespace {
unsigned ceil_log2(unsigned n) { return n <= 1 ? 0 : static_cast<unsigned>(std::bit_width(n - 1)); }
}  // namespace

unsigned sop_depth(const SopCover& cover) {
  if (cover.cubes.empty()) return 0;
  bool negative = false;
  unsigned widest = 0;
  for (const auto& c : cover.cubes) {
    if ((c.care & ~c.value) != 0) negative = true;
    widest = std::max(widest, c.num_literals());
  }
  return (negative ? 1 : 0) + ceil_log2(widest) + ceil_log2(static_cast<unsigned>(cover.cubes.size()));
}

std::vector<Cube> prime_implicants(const TruthTable& tt) {
  const unsigned k = tt.width();
  const uint64_t f = tt.bits();
  std::vector<Cube> primes;
  if (f == 0) return primes;
  std::vector<Cube> implicants;
  for (unsigned care = 0; care < (1u << k); ++care) {
    for (unsigned value = care;; value = (value - 1) & care) {
      const Cube c{uint8_t(care), uint8_t(value)};
      if ((c.minterms(k) & ~f) == 0) implicants.push_back(c);
      if (value == 0) break;
    }
  }
  for (const auto& c : implicants) {
    bool prime = true;
    for (unsigned v = 0; v < k && prime; ++v) {
      if (!(c.care >> v & 1)) continue;
      const Cube larger{uint8_t(c.care & ~(1u << v)), uint8_t(c.value & ~(1u << v))};
      if ((larger.minterms(k) & ~f) == 0) prime = false;
    }
    if (prime) primes.push_back(c);
  }
  std::sort(primes.begin(), primes.end());
  return primes;
}

SopCover isop_minimize(const TruthTable& tt) {
  SopCover cover;
  cover.width = tt.width();
  const unsigned k = tt.width();
  const uint64_t f = tt.bits();
  if (f == 0) return cover;
  const std::vector<Cube> primes = prime_implicants(tt);
  std::vector<uint64_t> pm(primes.size());
  for (size_t i = 0; i < primes.size(); ++i) pm[i] = primes[i].minterms(k);

  std::vector<bool> chosen(primes.size(), false);
  uint64_t covered = 0;
  // Essential primes: sole cover of some minterm.
  for (uint64_t rest = f; rest; rest &= rest - 1) {
    const uint64_t bit = rest & (~rest + 1);
    int only = -1, count = 0;
    for (size_t i = 0; i < primes.size(); ++i)
      if (pm[i] & bit) {
        only = static_cast<int>(i);
        ++count;
      }
    if (count == 1 && !chosen[only]) {
      chosen[only] = true;
      covered |= pm[only];
    }
  }
  // Greedy: most new minterms, then fewer literals, then first in order.
  while (covered != f) {
    int best = -1;
    int best_gain = -1;
    unsigned best_lits = 0;
    for (size_t i = 0; i < primes.size(); ++i) {
      if (chosen[i]) continue;
      const int gain = std::popcount(pm[i] & ~covered);
      const unsigned lits = primes[i].num_literals();
      if (gain > best_gain || (gain == best_gain && gain > 0 && lits < best_lits)) {
        best = static_cast<int>(i);
        best_gain = gain;
        best_lits = lits;
      }
    }
    chosen[best] = true;
    covered |= pm[best];
  }
  std::vector<size_t> sel;
  for (size_t i = 0; i < primes.size(); ++i)
    if (chosen[i]) sel.push_back(i);
  // Redundancy removal: drop cubes (largest literal count first) covered by the rest.
  std::stable_sort(sel.begin(), sel.end(),
                   [&](size_t a, size_t b) { return primes[a].num_literals() > primes[b].num_literals(); });
  for (size_t i = 0; i < sel.size();) {
    uint64_t others = 0;
    for (size_t j = 0; j < sel.size(); ++j)
      if (j != i) others |= pm[sel[j]];
    if ((pm[sel[i]] & ~others) == 0)
      sel.erase(sel.begin() + static_cast<long>(i));
    else
      ++i;
  }
  std::sort(sel.begin(), sel.end());
  for (size_t i : sel) cover.cubes.push_back(primes[i]);
  return cover;
}

}  // namespace easic
