#include <algorithm>
#include <bit>

#include "easic/error.hpp"
#include "easic/fc.hpp"

namespace easic {

namespace {

constexpr uint64_t kAll = ~uint64_t{0};

unsigned support6(uint64_t f) {
  unsigned s = 0;
  for (unsigned v = 0; v < 6; ++v)
    if (flip_var(f, v) != f) s |= 1u << v;
  return s;
}

uint64_t cof(uint64_t f, unsigned v, bool pol) {
  const uint64_t m = var_masks[v];
  const unsigned s = 1u << v;
  const uint64_t half = pol ? (f & m) : (f & ~m);
  return pol ? (half | (half >> s)) : (half | (half << s));
}

uint64_t apply2(unsigned op, uint64_t g, uint64_t h) {
  uint64_t r = 0;
  if (op & 1) r |= ~g & ~h;
  if (op & 2) r |= g & ~h;
  if (op & 4) r |= ~g & h;
  if (op & 8) r |= g & h;
  return r;
}

// Builds a node over child implementations, folding negated leaves (LUT1 inverters)
// into the mask, merging repeated leaves and dropping inputs the mask ignores.
FcTree make_node(uint64_t op, unsigned m, const std::vector<LutImpl>& kids) {
  std::vector<FcInput> ins;
  uint64_t mask = op;
  for (unsigned i = 0; i < m; ++i) {
    const LutImpl& k = kids[i];
    require(k.kind != LutImpl::Kind::constant, "constant operand in FC node");
    if (k.kind == LutImpl::Kind::literal) {
      ins.push_back({static_cast<int>(k.var), nullptr});
    } else if (k.root->inputs.size() == 1 && k.root->mask.bits() == 0b01) {
      ins.push_back(k.root->inputs[0]);
      mask = flip_var(mask, i) & TruthTable::mask_for(m);
    } else {
      ins.push_back({-1, k.root});
    }
  }
  // Collapse duplicate leaves.
  std::vector<FcInput> uniq;
  std::vector<unsigned> where(m);
  for (unsigned i = 0; i < m; ++i) {
    unsigned j = 0;
    for (; j < uniq.size(); ++j)
      if (ins[i].is_leaf() && uniq[j].is_leaf() && uniq[j].var == ins[i].var) break;
    if (j == uniq.size()) uniq.push_back(ins[i]);
    where[i] = j;
  }
  const unsigned k = static_cast<unsigned>(uniq.size());
  uint64_t merged = 0;
  for (uint64_t a = 0; a < (uint64_t{1} << k); ++a) {
    uint64_t idx = 0;
    for (unsigned i = 0; i < m; ++i) idx |= (a >> where[i] & 1) << i;
    if (mask >> idx & 1) merged |= uint64_t{1} << a;
  }
  TruthTable t(k, merged);
  std::vector<FcInput> used;
  for (unsigned i = 0; i < k; ++i)
    if (t.depends_on(i)) used.push_back(uniq[i]);
  auto node = std::make_shared<FcNode>();
  node->mask = shrink_to_support(t);
  node->inputs = std::move(used);
  require(!node->inputs.empty(), "FC node reduced to a constant");
  return node;
}

// Folds child `c` of `root` into a single node when the result fits one LUT.
FcTree merge_child(const FcNode& root, unsigned c) {
  const FcNode& child = *root.inputs[c].node;
  std::vector<FcInput> ins;
  std::vector<unsigned> root_pos(root.inputs.size()), child_pos(child.inputs.size());
  auto place = [&](const FcInput& in) {
    for (unsigned j = 0; j < ins.size(); ++j)
      if (in.is_leaf() && ins[j].is_leaf() && ins[j].var == in.var) return j;
    ins.push_back(in);
    return static_cast<unsigned>(ins.size() - 1);
  };
  for (unsigned i = 0; i < root.inputs.size(); ++i) {
    if (i == c) {
      for (unsigned j = 0; j < child.inputs.size(); ++j) child_pos[j] = place(child.inputs[j]);
    } else {
      root_pos[i] = place(root.inputs[i]);
    }
  }
  if (ins.size() > 6) return nullptr;
  const unsigned k = static_cast<unsigned>(ins.size());
  uint64_t mask = 0;
  for (uint64_t a = 0; a < (uint64_t{1} << k); ++a) {
    uint64_t ci = 0;
    for (unsigned j = 0; j < child.inputs.size(); ++j) ci |= (a >> child_pos[j] & 1) << j;
    const uint64_t cv = child.mask.bit(ci);
    uint64_t ri = 0;
    for (unsigned i = 0; i < root.inputs.size(); ++i) ri |= (i == c ? cv : (a >> root_pos[i] & 1)) << i;
    if (root.mask.bit(ri)) mask |= uint64_t{1} << a;
  }
  auto node = std::make_shared<FcNode>();
  node->mask = TruthTable(k, mask);
  node->inputs = std::move(ins);
  if (node->mask.support_size() != k) return nullptr;
  return node;
}

FcTree compose(FcTree root, const FcCostModel& model) {
  for (bool improved = true; improved;) {
    improved = false;
    const FcCost now = tree_cost(root, model);
    for (unsigned i = 0; i < root->inputs.size(); ++i) {
      if (root->inputs[i].is_leaf()) continue;
      FcTree cand = merge_child(*root, i);
      if (cand && model.better(tree_cost(cand, model), now)) {
        root = std::move(cand);
        improved = true;
        break;
      }
    }
  }
  return root;
}

// The ten two-input operators with full support.
constexpr std::array<unsigned, 10> kOps2{0x1, 0x2, 0x4, 0x6, 0x7, 0x8, 0x9, 0xB, 0xD, 0xE};

}  // namespace

FcHeuristic::FcHeuristic(const AllImp& table, FcHeurOptions options)
    : table_(&table), model_(table.model()), options_(options) {}

LutImpl FcHeuristic::decompose(const TruthTable& f) { return solve(extend(f, 6).bits()); }

LutImpl FcHeuristic::solve(uint64_t f) {
  if (auto it = memo_.find(f); it != memo_.end()) return it->second;
  const unsigned supp = support6(f);
  const unsigned s = static_cast<unsigned>(std::popcount(supp));
  if (s <= table_->n()) return memo_[f] = table_->lookup(TruthTable(6, f));

  const LutImpl naive = naive_impl(TruthTable(6, f), model_);
  LutImpl best = naive;
  auto consider = [&](uint64_t op, unsigned m, std::vector<LutImpl> kids) {
    FcTree node = compose(make_node(op, m, kids), model_);
    const FcCost c = tree_cost(node, model_);
    if (c.area <= naive.cost.area && model_.better(c, best.cost)) best = LutImpl::tree(std::move(node), model_);
  };
  auto lit = [](unsigned v) { return LutImpl::literal(v); };

  std::vector<uint64_t> pool;
  auto offer = [&](uint64_t g) {
    if (g != 0 && g != kAll && std::popcount(support6(g)) < static_cast<int>(s)) pool.push_back(g);
  };

  std::vector<unsigned> vars;
  for (unsigned v = 0; v < 6; ++v)
    if (supp >> v & 1) vars.push_back(v);

  for (unsigned x : vars) {
    const uint64_t f1 = cof(f, x, true), f0 = cof(f, x, false);
    // Literal shortcuts: F = x op G with G independent of x.
    if (f0 == 0) consider(0x8, 2, {lit(x), solve(f1)});
    if (f1 == 0) consider(0x4, 2, {lit(x), solve(f0)});
    if (f1 == kAll) consider(0xE, 2, {lit(x), solve(f0)});
    if (f0 == kAll) consider(0xD, 2, {lit(x), solve(f1)});
    if (f1 == ~f0) consider(0x6, 2, {lit(x), solve(f0)});
    // Shannon expansion as a 3-input selector (x ? F1 : F0).
    if (f0 != 0 && f1 != 0 && f0 != kAll && f1 != kAll && f1 != ~f0)
      consider(0xD8, 3, {lit(x), solve(f1), solve(f0)});
    offer(f0);
    offer(f1);
    const uint64_t xm = var_masks[x];
    offer(xm & f1);
    offer(~xm & f0);
    offer(~xm | f1);
    offer(xm | f0);
  }
  for (size_t i = 0; i < vars.size(); ++i)
    for (size_t j = i + 1; j < vars.size(); ++j)
      for (unsigned pol = 0; pol < 4; ++pol) {
        const unsigned x = vars[i], y = vars[j];
        const uint64_t cube = ((pol & 1) ? var_masks[x] : ~var_masks[x]) & ((pol & 2) ? var_masks[y] : ~var_masks[y]);
        const uint64_t fc = cof(cof(f, x, pol & 1), y, pol & 2);
        // Cube shortcuts: F vanishes (or saturates) outside the cube.
        if ((f & ~cube) == 0) consider(0x8, 2, {solve(cube), solve(fc)});
        if ((f | cube) == kAll) consider(0xD, 2, {solve(cube), solve(fc)});
        offer(fc);
        offer(cube & fc);
        offer(~cube | fc);
      }

  // Pair search over not-comparable operands.
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  size_t attempts = 0;
  for (size_t i = 0; i < pool.size() && attempts < options_.association_cap; ++i)
    for (size_t j = i + 1; j < pool.size() && attempts < options_.association_cap; ++j) {
      const uint64_t g = pool[i], h = pool[j];
      if ((g & ~h) == 0 || (h & ~g) == 0) continue;
      ++attempts;
      for (unsigned op : kOps2)
        if (apply2(op, g, h) == f) consider(op, 2, {solve(g), solve(h)});
    }

  if (!(best.cost.area <= naive.cost.area && model_.scalar(best.cost) <= model_.scalar(naive.cost))) best = naive;
  return memo_[f] = best;
}

DecomposedNetlist decompose_netlist(const Netlist& netlist, const Partition& partition, FcHeuristic& heuristic) {
  Netlist out = netlist;
  for (InstId l : partition.static_luts) out.instances[l].state = LutState::static_logic;
  for (InstId l : partition.reconfigurable) {
    const Instance original = out.instances[l];
    const LutImpl impl = heuristic.decompose(original.mask);
    if (impl.kind != LutImpl::Kind::tree) continue;
    // Only replace when strictly cheaper than the LUT as written.
    const unsigned k = original.lut_width();
    const FcCost as_is{heuristic.model().area[k - 1], heuristic.model().delay[k - 1]};
    if (!heuristic.model().better(impl.cost, as_is)) continue;
    const FcNode& root = *impl.root;
    unsigned counter = 0;
    auto wire = [&](auto&& self, const FcNode& node) -> std::vector<NetId> {
      std::vector<NetId> nets;
      for (const auto& in : node.inputs) {
        if (in.is_leaf()) {
          nets.push_back(original.inputs[in.var]);
          continue;
        }
        const std::string id = std::to_string(counter++);
        Instance inner;
        inner.name = original.name + "/d" + id;
        inner.kind = CellKind::lut;
        inner.state = LutState::reconfigurable;
        inner.mask = in.node->mask;
        inner.inputs = self(self, *in.node);
        inner.output = out.add_net(original.name + "/dn" + id);
        nets.push_back(inner.output);
        out.add_instance(std::move(inner));
      }
      return nets;
    };
    std::vector<NetId> root_inputs = wire(wire, root);
    Instance& target = out.instances[l];
    target.mask = root.mask;
    target.inputs = std::move(root_inputs);
  }
  std::vector<std::string> static_names;
  for (InstId l : partition.static_luts) static_names.push_back(netlist.inst(l).name);
  out.finalize();
  DecomposedNetlist r;
  std::vector<char> is_static(out.instances.size(), 0);
  for (const auto& name : static_names) {
    const InstId id = *out.find_instance(name);
    r.partition.static_luts.push_back(id);
    is_static[id] = 1;
  }
  for (InstId l : out.luts())
    if (!is_static[l]) r.partition.reconfigurable.push_back(l);
  std::sort(r.partition.reconfigurable.begin(), r.partition.reconfigurable.end(),
            [&](InstId a, InstId b) { return out.inst(a).hash < out.inst(b).hash; });
  r.partition.warnings = partition.warnings;
  r.netlist = std::move(out);
  return r;
}

}  // namespace easic
