#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>

namespace easic::testing {

std::map<uint64_t, std::vector<FcCost>> brute_force_trees(unsigned n, const FcCostModel& model) {
  const uint64_t full = TruthTable::mask_for(n);
  const int64_t budget = model.area[n - 1];
  std::set<std::tuple<uint64_t, int64_t, int64_t>> found;
  for (unsigned v = 0; v < n; ++v) found.insert({var_masks[v] & full, 0, 0});
  for (bool grew = true; grew;) {
    grew = false;
    const std::vector<std::tuple<uint64_t, int64_t, int64_t>> items(found.begin(), found.end());
    for (unsigned m = 2; m < n; ++m) {
      const int64_t a0 = model.area[m - 1];
      std::vector<size_t> idx(m, 0);
      for (;;) {
        int64_t area = a0, delay = 0;
        std::vector<TruthTable> ops;
        for (size_t i : idx) {
          area += std::get<1>(items[i]);
          delay = std::max(delay, std::get<2>(items[i]));
          ops.emplace_back(n, std::get<0>(items[i]));
        }
        if (area < budget)
          for (unsigned op = 0; op < (1u << (1u << m)); ++op) {
            const TruthTable mask(m, op);
            if (mask.support_size() != m) continue;
            const uint64_t tt = apply_operator(mask, ops).bits();
            if (found.insert({tt, area, delay + model.delay[m - 1]}).second) grew = true;
          }
        int k = static_cast<int>(m) - 1;
        while (k >= 0 && idx[k] + 1 == items.size()) --k;
        if (k < 0) break;
        ++idx[k];
        for (size_t j = k + 1; j < m; ++j) idx[j] = 0;
      }
    }
  }
  std::map<uint64_t, std::vector<FcCost>> out;
  for (const auto& [tt, a, d] : found) out[tt].push_back({a, d});
  return out;
}

FcCost expected_fc_cost(const TruthTable& f, const std::map<uint64_t, std::vector<FcCost>>& trees,
                        const FcCostModel& model) {
  const FcCost naive = naive_impl(f, model).cost;
  if (f.support_size() <= 1) return naive;
  FcCost best = naive;
  bool have = false;
  if (auto it = trees.find(f.bits()); it != trees.end())
    for (const FcCost& c : it->second)
      if (c.area > 0 && (!have || model.better(c, best))) {
        best = c;
        have = true;
      }
  if (have && best.area < naive.area && model.scalar(best) < model.scalar(naive)) return best;
  return naive;
}

SwapResult brute_force_swap(const PinTimingContext& ctx) {
  std::vector<unsigned> order(ctx.tt.width());
  std::iota(order.begin(), order.end(), 0u);
  SwapResult best;
  bool have = false;
  do {
    const auto [w, t] = evaluate_order(ctx, order);
    if (!have || w > best.wns || (w == best.wns && t > best.tns)) {
      best.net_order = order;
      best.wns = w;
      best.tns = t;
      have = true;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  best.new_tt = permute_inputs(ctx.tt, best.net_order);
  return best;
}

PinTimingContext random_swap_context(std::mt19937_64& rng, unsigned k, bool coarse) {
  std::uniform_real_distribution<double> at(0.0, 1.0), dly(0.02, 0.4);
  PinTimingContext ctx;
  ctx.tt = TruthTable(k, rng() & TruthTable::mask_for(k));
  for (unsigned j = 0; j < k; ++j) {
    ctx.at.push_back(coarse ? std::round(at(rng) * 4) / 4 : at(rng));
    ctx.dly.push_back(coarse ? std::round(dly(rng) * 10) / 10 : dly(rng));
  }
  std::sort(ctx.dly.rbegin(), ctx.dly.rend());
  ctx.rt = 0.6 + 0.6 * at(rng);
  return ctx;
}

bool eval_swapped(const SwapResult& r, uint64_t nets) {
  uint64_t a = 0;
  for (unsigned p = 0; p < r.net_order.size(); ++p)
    if ((nets >> r.net_order[p]) & 1) a |= uint64_t{1} << p;
  return eval(r.new_tt, a);
}

std::vector<uint64_t> bench_input_words(const BenchCircuit& bench, const Simulator& sim,
                                        const std::vector<uint64_t>& stim, const std::vector<bool>& key) {
  std::vector<uint64_t> w;
  const auto& names = sim.input_names();
  for (const std::string& origin : bench.input_origin) {
    if (origin.rfind("keyinput", 0) == 0) {
      w.push_back(key.at(std::stoul(origin.substr(8))) ? ~uint64_t{0} : 0);
      continue;
    }
    const auto it = std::find(names.begin(), names.end(), origin);
    if (it == names.end()) throw std::runtime_error("bench input '" + origin + "' unknown to the simulator");
    w.push_back(stim[it - names.begin()]);
  }
  return w;
}

std::vector<size_t> bench_output_index(const BenchCircuit& bench, const Simulator& sim) {
  std::vector<size_t> out;
  const auto& names = sim.output_names();
  for (const std::string& origin : bench.output_origin) {
    const auto it = std::find(names.begin(), names.end(), origin);
    if (it == names.end()) throw std::runtime_error("bench output '" + origin + "' unknown to the simulator");
    out.push_back(it - names.begin());
  }
  return out;
}

}  // namespace easic::testing
