#include "easic/npn.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <numeric>

#include "easic/error.hpp"

namespace easic {

NpnTransform NpnTransform::identity(unsigned width) {
  NpnTransform t;
  t.width = static_cast<uint8_t>(width);
  return t;
}

TruthTable NpnTransform::apply(const TruthTable& tt) const {
  require(tt.width() == width, "transform width mismatch");
  std::vector<unsigned> p(perm.begin(), perm.begin() + width);
  TruthTable r = permute_inputs(tt, p, input_flips);
  return output_flip ? ~r : r;
}

NpnTransform NpnTransform::inverse() const {
  NpnTransform inv;
  inv.width = width;
  inv.output_flip = output_flip;
  inv.input_flips = 0;
  for (unsigned j = 0; j < width; ++j) {
    const unsigned i = perm[j];
    inv.perm[i] = static_cast<uint8_t>(j);
    if (input_flips >> j & 1) inv.input_flips |= uint8_t(1u << i);
  }
  return inv;
}

namespace {

// Steinhaus-Johnson-Trotter: sequence of adjacent swap positions visiting all k! orders.
std::vector<unsigned> sjt_swaps(unsigned k) {
  std::vector<unsigned> swaps;
  if (k < 2) return swaps;
  std::vector<int> p(k), dir(k, -1);
  std::iota(p.begin(), p.end(), 0);
  while (true) {
    int mobile = -1;
    for (unsigned i = 0; i < k; ++i) {
      const int j = static_cast<int>(i) + dir[i];
      if (j < 0 || j >= static_cast<int>(k)) continue;
      if (p[j] < p[i] && (mobile < 0 || p[i] > p[mobile])) mobile = static_cast<int>(i);
    }
    if (mobile < 0) break;
    const int j = mobile + dir[mobile];
    const unsigned pos = static_cast<unsigned>(std::min(mobile, j));
    swaps.push_back(pos);
    const int moved = p[mobile];
    std::swap(p[mobile], p[j]);
    std::swap(dir[mobile], dir[j]);
    for (unsigned i = 0; i < k; ++i)
      if (p[i] > moved) dir[i] = -dir[i];
  }
  return swaps;
}

const std::vector<unsigned>& cached_swaps(unsigned k) {
  static std::array<std::vector<unsigned>, 7> table = [] {
    std::array<std::vector<unsigned>, 7> t;
    for (unsigned i = 0; i <= 6; ++i) t[i] = sjt_swaps(i);
    return t;
  }();
  return table[k];
}

}  // namespace

NpnResult npn_canonicalize(const TruthTable& tt) {
  const unsigned k = tt.width();
  const uint64_t full = tt.full_mask();
  const auto& swaps = cached_swaps(k);

  // State: cur == forward.apply(tt) where forward has output_flip = false.
  NpnTransform fwd = NpnTransform::identity(k);
  uint64_t cur = tt.bits();
  uint64_t best = ~uint64_t{0};
  NpnTransform best_fwd = fwd;

  auto consider = [&](uint64_t bits) {
    const uint64_t neg = ~bits & full;
    if (bits < best) {
      best = bits;
      best_fwd = fwd;
      best_fwd.output_flip = false;
    }
    if (neg < best) {
      best = neg;
      best_fwd = fwd;
      best_fwd.output_flip = true;
    }
  };

  const unsigned nflips = 1u << k;
  size_t swap_index = 0;
  while (true) {
    // Gray-code walk over input polarities; ends back at the starting polarity.
    consider(cur);
    for (unsigned g = 1; g < nflips; ++g) {
      const unsigned var = static_cast<unsigned>(std::countr_zero(g));
      cur = flip_var(cur, var) & full;
      fwd.input_flips ^= uint8_t(1u << var);
      consider(cur);
    }
    // After a full Gray cycle, flips equal the top bit only; undo it.
    cur = flip_var(cur, k - 1) & full;
    fwd.input_flips ^= uint8_t(1u << (k - 1));
    if (swap_index == swaps.size()) break;
    const unsigned i = swaps[swap_index++];
    cur = swap_adjacent(cur, i) & full;
    std::swap(fwd.perm[i], fwd.perm[i + 1]);
    const bool fi = fwd.input_flips >> i & 1, fj = fwd.input_flips >> (i + 1) & 1;
    if (fi != fj) fwd.input_flips ^= uint8_t((1u << i) | (1u << (i + 1)));
  }
  NpnResult r{TruthTable(k, best), best_fwd.inverse()};
  return r;
}

const std::vector<uint16_t>& npn_class_table(unsigned k) {
  require(k >= 1 && k <= 4, "dense NPN class table is available for k <= 4");
  static std::array<std::vector<uint16_t>, 5> tables;
  static std::once_flag flags[5];
  std::call_once(flags[k], [k] {
    const uint32_t count = 1u << (1u << k);
    std::vector<uint16_t> rep(count, 0);
    std::vector<bool> seen(count, false);
    std::vector<unsigned> perm(k);
    std::iota(perm.begin(), perm.end(), 0u);
    std::vector<std::vector<unsigned>> perms;
    do perms.push_back(perm);
    while (std::next_permutation(perm.begin(), perm.end()));
    for (uint32_t f = 0; f < count; ++f) {
      if (seen[f]) continue;
      std::vector<uint32_t> orbit;
      const TruthTable tt(k, f);
      for (const auto& p : perms)
        for (unsigned fl = 0; fl < (1u << k); ++fl) {
          const TruthTable g = permute_inputs(tt, p, static_cast<uint8_t>(fl));
          orbit.push_back(static_cast<uint32_t>(g.bits()));
          orbit.push_back(static_cast<uint32_t>((~g).bits()));
        }
      const uint32_t r = *std::min_element(orbit.begin(), orbit.end());
      for (uint32_t g : orbit) {
        seen[g] = true;
        rep[g] = static_cast<uint16_t>(r);
      }
    }
    tables[k] = std::move(rep);
  });
  return tables[k];
}

std::vector<uint16_t> npn_class_representatives(unsigned k) {
  std::vector<uint16_t> reps = npn_class_table(k);
  std::sort(reps.begin(), reps.end());
  reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
  return reps;
}

}  // namespace easic
