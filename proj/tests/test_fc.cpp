#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <random>

#include "easic/error.hpp"
#include "easic/fc.hpp"
#include "easic/npn.hpp"
#include "easic/obfuscator.hpp"
#include "easic/simulate.hpp"
#include "easic/verilog.hpp"
#include "support/generator.hpp"
#include "support/oracles.hpp"

using namespace easic;

namespace {

const FcCostModel& model() {
  static const FcCostModel m = FcCostModel::defaults();
  return m;
}

const AllImp& table4() {
  static const AllImp t = AllImp::build(4, model());
  return t;
}

FcCost naive_cost(const TruthTable& f) { return naive_impl(f, model()).cost; }

FcTree random_tree(std::mt19937_64& rng, unsigned n, int depth) {
  auto node = std::make_shared<FcNode>();
  const unsigned m = 2 + rng() % (n - 2);
  std::vector<TruthTable> ops;
  for (unsigned i = 0; i < m; ++i) {
    if (depth > 0 && rng() % 3 == 0) node->inputs.push_back({-1, random_tree(rng, n, depth - 1)});
    else node->inputs.push_back({static_cast<int>(rng() % n), nullptr});
  }
  uint64_t op;
  do op = rng() & TruthTable::mask_for(m);
  while (TruthTable(m, op).support_size() != m);
  node->mask = TruthTable(m, op);
  return node;
}

}  // namespace

TEST_CASE("cost model") {
  const FcCostModel& m = model();
  CHECK(m.area[5] == 95760);
  CHECK(m.delay[1] == 52);
  CHECK(m.better({32400, 156}, {29880, 171}));  // shallower AND6 tree wins at the default weight
  CHECK(FcCostModel::from_models(AreaModel::defaults(), DelayModel::defaults(), 10).hash() != m.hash());
}

TEST_CASE("table covers small sizes") {
  CHECK_THROWS_AS(AllImp::build(1, model()), Error);
  CHECK_THROWS_AS(AllImp::build(5, model()), Error);
  const AllImp t2 = AllImp::build(2, model());
  for (unsigned f = 0; f < 16; ++f) {
    const TruthTable tt(2, f);
    const LutImpl impl = t2.lookup(tt);
    CHECK(impl.evaluate(2) == tt);
    if (tt.support_size() == 2) {
      CHECK(impl.num_luts() == 1);
      CHECK(impl.cost.area_um2() == doctest::Approx(64.80));
    }
  }
}

TEST_CASE("three-input table matches brute force") {
  const AllImp t3 = AllImp::build(3, model());
  const auto trees = easic::testing::brute_force_trees(3, model());
  for (unsigned f = 0; f < 256; ++f) {
    const TruthTable tt(3, f);
    const LutImpl impl = t3.lookup(tt);
    CHECK(impl.evaluate(3) == tt);
    const FcCost want = easic::testing::expected_fc_cost(tt, trees, model());
    CHECK(impl.cost == want);
  }
}

TEST_CASE("four-input table: all functions") {
  const auto start = std::chrono::steady_clock::now();
  const AllImp& t = table4();
  MESSAGE("FC-OPT N=4 build: "
          << std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() << " s");
  CHECK(t.classes().size() == 222);
  size_t decomposed = 0;
  for (uint64_t f = 0; f < 65536; ++f) {
    const TruthTable tt(4, f);
    const LutImpl impl = t.lookup(tt);
    if (impl.evaluate(4) != tt) {
      FAIL_CHECK("wrong implementation for " << tt.to_hex());
      continue;
    }
    const FcCost naive = naive_cost(tt);
    CHECK(impl.cost.area <= 25920);
    CHECK(impl.cost.area <= naive.area);
    if (impl.cost.area < naive.area) ++decomposed;
    else CHECK(impl.cost == naive);
  }
  MESSAGE(decomposed << " of 65536 functions decompose");
  const LutImpl and4 = t.lookup(TruthTable(4, 0x8000));
  CHECK(and4.num_luts() == 3);
  CHECK(and4.node_widths()[1] == 3);
  CHECK(and4.cost.area_um2() == doctest::Approx(194.40));
  CHECK(and4.cost.delay_ns() == doctest::Approx(0.104));
}

TEST_CASE("four-input table is never beaten by a random tree") {
  const AllImp& t = table4();
  std::mt19937_64 rng(44);
  int checked = 0;
  for (int i = 0; i < 20000; ++i) {
    const FcTree tree = random_tree(rng, 4, 3);
    const FcCost c = tree_cost(tree, model());
    const LutImpl probe = LutImpl::tree(tree, model());
    const TruthTable f = probe.evaluate(4);
    const FcCost naive = naive_cost(f);
    if (f.support_size() <= 1 || !(c.area < naive.area && model().scalar(c) < model().scalar(naive))) continue;
    ++checked;
    const LutImpl got = t.lookup(f);
    CHECK_FALSE(model().better(c, got.cost));
  }
  CHECK(checked > 100);
}

TEST_CASE("table cache round trip") {
  const AllImp& t = table4();
  const AllImp back = AllImp::deserialize(t.serialize(), model());
  CHECK(back == t);
  const FcCostModel other = FcCostModel::from_models(AreaModel::defaults(), DelayModel::defaults(), 5);
  CHECK_THROWS_AS(AllImp::deserialize(t.serialize(), other), Error);
  std::string broken = t.serialize();
  broken[0] = 'X';
  CHECK_THROWS_AS(AllImp::deserialize(broken, model()), Error);

  const auto dir = std::filesystem::temp_directory_path() / "easic-fc-test";
  std::filesystem::remove_all(dir);
  const std::string path = (dir / all_imp_cache_name(3, model())).string();
  const AllImp built = AllImp::load_or_build(path, 3, model());
  CHECK(std::filesystem::exists(path));
  CHECK(AllImp::load_or_build(path, 3, model()) == built);
  std::filesystem::remove_all(dir);
}

TEST_CASE("heuristic decomposition") {
  FcHeuristic heur(table4());
  const LutImpl and6 = heur.decompose(TruthTable(6, 0x8000000000000000ull));
  CHECK(and6.num_luts() == 5);
  CHECK(and6.node_widths()[1] == 5);
  CHECK(and6.cost.area_um2() == doctest::Approx(324.00));
  CHECK(and6.cost.delay_ns() == doctest::Approx(0.156));
  CHECK(and6.evaluate(6) == TruthTable(6, 0x8000000000000000ull));

  const LutImpl lit = heur.decompose(TruthTable::variable(6, 3));
  CHECK(lit.kind == LutImpl::Kind::literal);
  CHECK(lit.var == 3);
  CHECK(lit.num_luts() == 0);

  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    const TruthTable f(6, rng());
    const LutImpl impl = heur.decompose(f);
    CHECK(impl.evaluate(6) == f);
    const FcCost naive = naive_cost(f);
    CHECK(impl.cost.area <= naive.area);
    CHECK(model().scalar(impl.cost) <= model().scalar(naive));
  }
  // Structured 5- and 6-input functions usually decompose.
  const std::vector<uint64_t> structured{0x6996966996696996ull, 0xFFFFFFFFFFFFFFFEull, 0x8000800080008000ull,
                                         0xF888F888F888F888ull, 0xCACACACAF0F0FF00ull};
  for (uint64_t bits : structured) {
    const TruthTable f(6, bits);
    const LutImpl impl = heur.decompose(f);
    CHECK(impl.evaluate(6) == f);
    MESSAGE(f.to_hex() << " -> " << impl.to_string() << " area " << impl.cost.area_um2());
  }
  for (int i = 0; i < 200; ++i) {
    // Small supports come straight from the table.
    const TruthTable g(4, rng() & 0xffff);
    const TruthTable f = extend(g, 6);
    CHECK(heur.decompose(f).to_string() == table4().lookup(f).to_string());
  }
}

TEST_CASE("netlist decomposition") {
  FcHeuristic heur(table4());
  const DelayModel dm = DelayModel::defaults();
  {
    const Netlist nl = read_verilog_file(easic::testing::fixture_path("and6x10"));
    Partition p;
    p.reconfigurable = nl.luts();
    const auto d = decompose_netlist(nl, p, heur);
    CHECK(d.netlist.count(CellKind::lut) == 50);
    for (InstId l : d.netlist.luts()) CHECK(d.netlist.inst(l).lut_width() == 2);
    CHECK(gen_bitstream(p, nl).length() == 640);
    CHECK(gen_bitstream(d.partition, d.netlist).length() == 200);
    CHECK(check_equivalence(nl, d.netlist).equivalent);
  }
  {
    const Netlist nl = read_verilog_file(easic::testing::fixture_path("lut2only"));
    Partition p;
    p.reconfigurable = nl.luts();
    const auto d = decompose_netlist(nl, p, heur);
    std::string why;
    CHECK_MESSAGE(isomorphic(nl, d.netlist, &why), why);
  }
  for (const auto& path : easic::testing::handcrafted_fixture_paths()) {
    const Netlist nl = read_verilog_file(path);
    const auto r = obfuscate(nl, enumerate_paths(nl, dm), static_target_from_percent(50, nl.luts().size()), dm);
    const auto d = decompose_netlist(r.netlist, r.partition, heur);
    CHECK(d.partition.static_luts.size() == r.partition.static_luts.size());
    CHECK_MESSAGE(check_equivalence(nl, d.netlist).equivalent, path);
    const Netlist hybrid = make_hybrid(d.netlist, d.partition);
    CHECK(verify_equivalence(nl, hybrid, gen_bitstream(d.partition, d.netlist)).equivalent);
  }
}
