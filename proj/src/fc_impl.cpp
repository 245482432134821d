#include <algorithm>
#include <cmath>

#include "easic/error.hpp"
#include "easic/fc.hpp"

namespace easic {

FcCostModel FcCostModel::from_models(const AreaModel& area, const DelayModel& delay, double delay_weight) {
  FcCostModel m;
  for (unsigned k = 0; k < 6; ++k) {
    m.area[k] = std::llround(area.lut_area[k] * 100.0);
    m.delay[k] = std::llround(delay.lut_avg[k] * 1000.0);
  }
  require(delay_weight >= 0, "delay weight must be non-negative");
  m.delay_weight = delay_weight;
  return m;
}

int64_t FcCostModel::scalar(const FcCost& c) const {
  return c.area * 1000 + std::llround(delay_weight * 100.0) * c.delay;
}

bool FcCostModel::better(const FcCost& a, const FcCost& b) const {
  const int64_t sa = scalar(a), sb = scalar(b);
  if (sa != sb) return sa < sb;
  if (a.area != b.area) return a.area < b.area;
  return a.delay < b.delay;
}

uint64_t FcCostModel::hash() const {
  std::string key = "fc-cost-v1";
  for (unsigned k = 0; k < 6; ++k) key += ";" + std::to_string(area[k]) + "," + std::to_string(delay[k]);
  key += ";w=" + std::to_string(std::llround(delay_weight * 100.0));
  return stable_hash(key);
}

FcCost tree_cost(const FcTree& root, const FcCostModel& model) {
  const unsigned m = static_cast<unsigned>(root->inputs.size());
  FcCost c{model.area[m - 1], 0};
  int64_t worst = 0;
  for (const auto& in : root->inputs)
    if (!in.is_leaf()) {
      const FcCost sub = tree_cost(in.node, model);
      c.area += sub.area;
      worst = std::max(worst, sub.delay);
    }
  c.delay = model.delay[m - 1] + worst;
  return c;
}

LutImpl LutImpl::constant(bool value) {
  LutImpl r;
  r.kind = Kind::constant;
  r.value = value;
  return r;
}

LutImpl LutImpl::literal(unsigned var) {
  LutImpl r;
  r.kind = Kind::literal;
  r.var = var;
  return r;
}

LutImpl LutImpl::tree(FcTree root, const FcCostModel& model) {
  LutImpl r;
  r.kind = Kind::tree;
  r.cost = tree_cost(root, model);
  r.root = std::move(root);
  return r;
}

namespace {

TruthTable eval_node(const FcNode& node, unsigned width) {
  std::vector<TruthTable> operands;
  for (const auto& in : node.inputs)
    operands.push_back(in.is_leaf() ? TruthTable::variable(width, static_cast<unsigned>(in.var))
                                    : eval_node(*in.node, width));
  return apply_operator(node.mask, operands);
}

unsigned count_nodes(const FcNode& node, std::array<unsigned, 6>* widths) {
  unsigned n = 1;
  if (widths) ++(*widths)[node.inputs.size() - 1];
  for (const auto& in : node.inputs)
    if (!in.is_leaf()) n += count_nodes(*in.node, widths);
  return n;
}

std::string node_text(const FcNode& node) {
  std::string hex = node.mask.to_hex();
  std::string s = "LUT" + std::to_string(node.inputs.size()) + ":" + hex.substr(hex.find('h') + 1) + "(";
  for (size_t i = 0; i < node.inputs.size(); ++i) {
    if (i) s += ",";
    s += node.inputs[i].is_leaf() ? "x" + std::to_string(node.inputs[i].var) : node_text(*node.inputs[i].node);
  }
  return s + ")";
}

}  // namespace

TruthTable LutImpl::evaluate(unsigned width) const {
  switch (kind) {
    case Kind::constant: return TruthTable::constant(width, value);
    case Kind::literal: return TruthTable::variable(width, var);
    case Kind::tree: break;
  }
  return eval_node(*root, width);
}

unsigned LutImpl::num_luts() const { return kind == Kind::tree ? count_nodes(*root, nullptr) : 0; }

std::array<unsigned, 6> LutImpl::node_widths() const {
  std::array<unsigned, 6> w{};
  if (kind == Kind::tree) count_nodes(*root, &w);
  return w;
}

std::string LutImpl::to_string() const {
  switch (kind) {
    case Kind::constant: return value ? "1" : "0";
    case Kind::literal: return "x" + std::to_string(var);
    case Kind::tree: break;
  }
  return node_text(*root);
}

LutImpl naive_impl(const TruthTable& f, const FcCostModel& model) {
  std::vector<unsigned> vars;
  const TruthTable g = shrink_to_support(f, &vars);
  if (vars.empty()) return LutImpl::constant(f.bit(0));
  if (vars.size() == 1 && g.bits() == 0b10) return LutImpl::literal(vars[0]);
  auto node = std::make_shared<FcNode>();
  node->mask = g;
  for (unsigned v : vars) node->inputs.push_back({static_cast<int>(v), nullptr});
  return LutImpl::tree(std::move(node), model);
}

}  // namespace easic
