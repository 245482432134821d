#include <algorithm>
#include <bit>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "easic/error.hpp"
#include "easic/fc.hpp"
#include "easic/npn.hpp"

namespace easic {

namespace {

struct Entry {
  uint64_t tt;
  int64_t area;
  int64_t delay;
  uint8_t width;  // 0 for a leaf
  uint8_t op;     // node mask (2^width bits)
  uint8_t leaves;
  std::array<uint32_t, 3> child;  // entry ids; child[0] is the variable for leaves
};

// All masks of m inputs that depend on every input.
std::vector<uint8_t> full_support_ops(unsigned m) {
  std::vector<uint8_t> ops;
  for (unsigned op = 0; op < (1u << (1u << m)); ++op)
    if (TruthTable(m, op).support_size() == m) ops.push_back(static_cast<uint8_t>(op));
  return ops;
}

class Search {
 public:
  Search(unsigned n, const FcCostModel& model) : n_(n), model_(model), full_(TruthTable::mask_for(n)) {}

  void run() {
    for (unsigned v = 0; v < n_; ++v) {
      Entry e{var_masks[v] & full_, 0, 0, 0, 0, static_cast<uint8_t>(1u << v), {v, 0, 0}};
      front_[e.tt].push_back(static_cast<uint32_t>(entries_.size()));
      buckets_[0].push_back(static_cast<uint32_t>(entries_.size()));
      entries_.push_back(e);
    }
    for (unsigned m = 2; m < n_; ++m) ops_[m] = full_support_ops(m);
    const int64_t budget = model_.area[n_ - 1];
    std::set<int64_t> done{0};
    int64_t last = 0;
    for (;;) {
      // Smallest area reachable from finished levels that is not finished itself.
      int64_t next = budget;
      for (unsigned m = 2; m < n_; ++m)
        for_each_multiset(done, m, [&](const std::vector<int64_t>& parts) {
          int64_t a = model_.area[m - 1];
          for (int64_t p : parts) a += p;
          if (a > last && a < next) next = a;
        });
      if (next >= budget) break;
      for (unsigned m = 2; m < n_; ++m)
        for_each_multiset(done, m, [&](const std::vector<int64_t>& parts) {
          int64_t a = model_.area[m - 1];
          for (int64_t p : parts) a += p;
          if (a == next) combine(m, parts, next);
        });
      done.insert(next);
      last = next;
    }
  }

  /// Cheapest recorded tree of `tt` (any polarity) using only variables in `allowed`.
  std::optional<std::pair<uint32_t, bool>> best(uint64_t tt, unsigned allowed) const {
    const bool flip = tt & 1;
    const uint64_t key = flip ? ~tt & full_ : tt;
    auto it = front_.find(key);
    if (it == front_.end()) return std::nullopt;
    std::optional<uint32_t> pick;
    for (uint32_t id : it->second) {
      const Entry& e = entries_[id];
      if (e.width == 0 || (e.leaves & ~allowed)) continue;
      if (!pick || model_.better({e.area, e.delay}, {entries_[*pick].area, entries_[*pick].delay})) pick = id;
    }
    if (!pick) return std::nullopt;
    return std::make_pair(*pick, flip);
  }

  FcTree to_tree(uint32_t id, bool complement) const {
    const Entry& e = entries_[id];
    auto node = std::make_shared<FcNode>();
    uint64_t op = e.op;
    if (complement) op = ~op & TruthTable::mask_for(e.width);
    node->mask = TruthTable(e.width, op);
    for (unsigned i = 0; i < e.width; ++i) {
      const Entry& c = entries_[e.child[i]];
      if (c.width == 0) node->inputs.push_back({static_cast<int>(c.child[0]), nullptr});
      else node->inputs.push_back({-1, to_tree(e.child[i], false)});
    }
    return node;
  }

  const Entry& entry(uint32_t id) const { return entries_[id]; }

 private:
  unsigned n_;
  const FcCostModel& model_;
  uint64_t full_;
  std::vector<Entry> entries_;
  std::unordered_map<uint64_t, std::vector<uint32_t>> front_;  // increasing area, decreasing delay
  std::map<int64_t, std::vector<uint32_t>> buckets_;           // child-eligible entries per area
  std::array<std::vector<uint8_t>, 4> ops_;

  template <class F>
  static void for_each_multiset(const std::set<int64_t>& values, unsigned m, F&& fn) {
    std::vector<int64_t> v(values.begin(), values.end());
    std::vector<size_t> idx(m, 0);
    for (;;) {
      std::vector<int64_t> parts;
      for (size_t i : idx) parts.push_back(v[i]);
      fn(parts);
      int k = static_cast<int>(m) - 1;
      while (k >= 0 && idx[k] + 1 == v.size()) --k;
      if (k < 0) return;
      ++idx[k];
      for (size_t j = k + 1; j < m; ++j) idx[j] = idx[k];
    }
  }

  void combine(unsigned m, const std::vector<int64_t>& parts, int64_t area) {
    std::vector<const std::vector<uint32_t>*> lists;
    for (int64_t p : parts) {
      auto it = buckets_.find(p);
      if (it == buckets_.end() || it->second.empty()) return;
      lists.push_back(&it->second);
    }
    // Snapshot sizes: entries added at this level never feed each other.
    std::vector<size_t> sizes;
    for (auto* l : lists) sizes.push_back(l->size());
    std::array<uint32_t, 3> pick{};
    std::array<size_t, 3> pos{};
    auto rec = [&](auto&& self, unsigned slot) -> void {
      if (slot == m) {
        emit(m, pick, area);
        return;
      }
      // Equal areas in consecutive slots: strictly increasing positions (unordered children).
      const size_t start = slot > 0 && parts[slot] == parts[slot - 1] ? pos[slot - 1] + 1 : 0;
      for (size_t i = start; i < sizes[slot]; ++i) {
        pos[slot] = i;
        pick[slot] = (*lists[slot])[i];
        self(self, slot + 1);
      }
    };
    rec(rec, 0);
  }

  void emit(unsigned m, const std::array<uint32_t, 3>& kids, int64_t area) {
    int64_t delay = 0;
    uint8_t leaves = 0;
    std::array<uint64_t, 3> t{};
    for (unsigned j = 0; j < m; ++j) {
      const Entry& c = entries_[kids[j]];
      t[j] = c.tt;
      delay = std::max(delay, c.delay);
      leaves |= c.leaves;
      for (unsigned i = 0; i < j; ++i)
        if (t[i] == t[j]) return;
    }
    delay += model_.delay[m - 1];
    // Minterm products of the children, then every operator as a union of them.
    const unsigned rows = 1u << m;
    std::array<uint64_t, 8> prod{};
    for (unsigned r = 0; r < rows; ++r) {
      uint64_t p = full_;
      for (unsigned j = 0; j < m; ++j) p &= (r >> j & 1) ? t[j] : ~t[j];
      prod[r] = p & full_;
    }
    std::array<uint64_t, 256> val{};
    const unsigned nops = 1u << rows;
    for (unsigned op = 1; op < nops; ++op) val[op] = val[op & (op - 1)] | prod[std::countr_zero(op)];
    for (uint8_t op : ops_[m]) {
      uint64_t tt = val[op];
      uint8_t o = op;
      if (tt & 1) {
        tt = ~tt & full_;
        o = static_cast<uint8_t>(~op & TruthTable::mask_for(m));
      }
      if (tt == 0) continue;
      insert(Entry{tt, area, delay, static_cast<uint8_t>(m), o, leaves, kids});
    }
  }

  void insert(const Entry& e) {
    auto& fr = front_[e.tt];
    if (!fr.empty()) {
      Entry& last = entries_[fr.back()];
      if (last.delay <= e.delay) return;
      if (last.area == e.area) {
        last = e;
        return;
      }
    }
    const auto id = static_cast<uint32_t>(entries_.size());
    entries_.push_back(e);
    fr.push_back(id);
    buckets_[e.area].push_back(id);
  }
};

void put_u8(std::string& out, uint8_t v) { out.push_back(static_cast<char>(v)); }
void put_u32(std::string& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}
void put_u64(std::string& out, uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(v >> (8 * i)));
}

class Reader {
 public:
  explicit Reader(std::string_view b) : b_(b) {}
  uint64_t get(unsigned bytes) {
    if (pos_ + bytes > b_.size()) fail(ErrorCode::syntax, "truncated FC table");
    uint64_t v = 0;
    for (unsigned i = 0; i < bytes; ++i) v |= uint64_t(static_cast<uint8_t>(b_[pos_ + i])) << (8 * i);
    pos_ += bytes;
    return v;
  }
  std::string_view take(size_t n) {
    if (pos_ + n > b_.size()) fail(ErrorCode::syntax, "truncated FC table");
    auto s = b_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == b_.size(); }

 private:
  std::string_view b_;
  size_t pos_ = 0;
};

void write_node(std::string& out, const FcNode& node) {
  put_u8(out, static_cast<uint8_t>(node.inputs.size()));
  put_u64(out, node.mask.bits());
  for (const auto& in : node.inputs) {
    put_u8(out, in.is_leaf() ? 0 : 1);
    if (in.is_leaf()) put_u8(out, static_cast<uint8_t>(in.var));
    else write_node(out, *in.node);
  }
}

FcTree read_node(Reader& r, unsigned n, unsigned depth) {
  if (depth > 64) fail(ErrorCode::syntax, "FC table tree too deep");
  const unsigned m = static_cast<unsigned>(r.get(1));
  if (m < 1 || m > 6) fail(ErrorCode::syntax, "bad node width in FC table");
  auto node = std::make_shared<FcNode>();
  node->mask = TruthTable(m, r.get(8) & TruthTable::mask_for(m));
  for (unsigned i = 0; i < m; ++i) {
    if (r.get(1) == 0) {
      const unsigned v = static_cast<unsigned>(r.get(1));
      if (v >= n) fail(ErrorCode::syntax, "leaf variable out of range in FC table");
      node->inputs.push_back({static_cast<int>(v), nullptr});
    } else {
      node->inputs.push_back({-1, read_node(r, n, depth + 1)});
    }
  }
  return node;
}

// Leaves v -> map[v], negating leaves in `flips` (indexed by the old variable).
FcTree remap_tree(const FcNode& node, const std::array<unsigned, 6>& map, uint8_t flips) {
  auto out = std::make_shared<FcNode>();
  const unsigned m = static_cast<unsigned>(node.inputs.size());
  uint64_t mask = node.mask.bits();
  for (unsigned i = 0; i < m; ++i) {
    const FcInput& in = node.inputs[i];
    if (in.is_leaf()) {
      if (flips >> in.var & 1) mask = flip_var(mask, i) & TruthTable::mask_for(m);
      out->inputs.push_back({static_cast<int>(map[in.var]), nullptr});
    } else {
      out->inputs.push_back({-1, remap_tree(*in.node, map, flips)});
    }
  }
  out->mask = TruthTable(m, mask);
  return out;
}

}  // namespace

AllImp AllImp::build(unsigned n, const FcCostModel& model) {
  if (n < 2 || n > 4) fail(ErrorCode::contract, "FC-OPT table size must be 2..4 inputs");
  Search search(n, model);
  search.run();
  AllImp table;
  table.n_ = n;
  table.model_ = model;
  for (uint16_t rep : npn_class_representatives(n)) {
    const TruthTable f(n, rep);
    LutImpl impl = naive_impl(f, model);
    if (impl.kind == LutImpl::Kind::tree) {
      if (auto b = search.best(rep, f.support())) {
        const Entry& e = search.entry(b->first);
        const FcCost c{e.area, e.delay};
        if (c.area < impl.cost.area && model.scalar(c) < model.scalar(impl.cost))
          impl = LutImpl::tree(search.to_tree(b->first, b->second), model);
      }
    }
    table.classes_.emplace(rep, std::move(impl));
  }
  return table;
}

LutImpl AllImp::lookup(const TruthTable& f) const {
  std::vector<unsigned> vars;
  const TruthTable g = shrink_to_support(f, &vars);
  if (vars.size() > n_) fail(ErrorCode::contract, "function support exceeds the FC table size");
  if (vars.size() <= 1) return naive_impl(f, model_);
  const NpnResult r = npn_canonicalize(extend(g, n_));
  const LutImpl& rep = classes_.at(r.canonical.bits());
  // apply(rep)(a) = out ^ rep(b) with b[perm[j]] = a[j] ^ flip[j]: rep leaf perm[j] becomes a[j].
  std::array<unsigned, 6> map{};
  uint8_t flips = 0;
  for (unsigned j = 0; j < n_; ++j) {
    const unsigned v = r.transform.perm[j];
    map[v] = j < vars.size() ? vars[j] : 0;
    if (r.transform.input_flips >> j & 1) flips |= static_cast<uint8_t>(1u << v);
  }
  FcTree t = remap_tree(*rep.root, map, flips);
  if (r.transform.output_flip) {
    auto root = std::make_shared<FcNode>(*t);
    root->mask = ~root->mask;
    t = root;
  }
  LutImpl out = LutImpl::tree(std::move(t), model_);
  return out;
}

std::string AllImp::serialize() const {
  std::string out = "EASICFC1";
  put_u32(out, 1);
  put_u32(out, n_);
  put_u64(out, model_.hash());
  std::vector<uint64_t> reps;
  for (const auto& [rep, impl] : classes_) reps.push_back(rep);
  std::sort(reps.begin(), reps.end());
  put_u32(out, static_cast<uint32_t>(reps.size()));
  for (uint64_t rep : reps) {
    const LutImpl& impl = classes_.at(rep);
    put_u64(out, rep);
    put_u8(out, static_cast<uint8_t>(impl.kind));
    switch (impl.kind) {
      case LutImpl::Kind::constant: put_u8(out, impl.value); break;
      case LutImpl::Kind::literal: put_u8(out, static_cast<uint8_t>(impl.var)); break;
      case LutImpl::Kind::tree: write_node(out, *impl.root); break;
    }
  }
  return out;
}

AllImp AllImp::deserialize(std::string_view bytes, const FcCostModel& model) {
  Reader r(bytes);
  if (r.take(8) != "EASICFC1") fail(ErrorCode::syntax, "not an FC table file");
  if (r.get(4) != 1) fail(ErrorCode::syntax, "unsupported FC table version");
  AllImp table;
  table.n_ = static_cast<unsigned>(r.get(4));
  if (table.n_ < 2 || table.n_ > 4) fail(ErrorCode::syntax, "bad FC table size");
  if (r.get(8) != model.hash()) fail(ErrorCode::syntax, "FC table was built for a different cost model");
  table.model_ = model;
  const uint64_t count = r.get(4);
  for (uint64_t i = 0; i < count; ++i) {
    const uint64_t rep = r.get(8);
    LutImpl impl;
    switch (r.get(1)) {
      case 0: impl = LutImpl::constant(r.get(1) != 0); break;
      case 1: impl = LutImpl::literal(static_cast<unsigned>(r.get(1))); break;
      case 2: impl = LutImpl::tree(read_node(r, table.n_, 0), model); break;
      default: fail(ErrorCode::syntax, "bad record kind in FC table");
    }
    if (impl.evaluate(table.n_).bits() != rep) fail(ErrorCode::syntax, "FC table record does not match its class");
    table.classes_.emplace(rep, std::move(impl));
  }
  if (!r.done()) fail(ErrorCode::syntax, "trailing bytes in FC table");
  if (table.classes_.size() != npn_class_representatives(table.n_).size())
    fail(ErrorCode::syntax, "FC table is missing classes");
  return table;
}

AllImp AllImp::load_or_build(const std::string& path, unsigned n, const FcCostModel& model, bool force) {
  if (!force && std::filesystem::exists(path)) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      AllImp t = deserialize(buf.str(), model);
      if (t.n() == n) return t;
    } catch (const Error&) {
      // Stale or foreign file: rebuild below.
    }
  }
  AllImp t = build(n, model);
  std::error_code ec;
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent, ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (out) out << t.serialize();
  return t;
}

bool operator==(const AllImp& a, const AllImp& b) { return a.n_ == b.n_ && a.serialize() == b.serialize(); }

std::string all_imp_cache_name(unsigned n, const FcCostModel& model) {
  static const char* digits = "0123456789abcdef";
  std::string hex;
  const uint64_t h = model.hash();
  for (int i = 15; i >= 0; --i) hex += digits[(h >> (4 * i)) & 15];
  return "fc" + std::to_string(n) + "-" + hex + ".bin";
}

}  // namespace easic
