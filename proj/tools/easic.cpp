// easic: command-line driver for the LUT obfuscation flow.
//
// Exit codes: 0 ok, 1 usage or contract error, 2 input error (syntax, I/O,
// structure), 3 verification failed, 4 report invariant violated.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "easic/attacks.hpp"
#include "easic/error.hpp"
#include "easic/fc.hpp"
#include "easic/flow.hpp"
#include "easic/json_io.hpp"
#include "easic/verilog.hpp"

namespace fs = std::filesystem;
using namespace easic;

namespace {

constexpr int kExitUsage = 1, kExitInput = 2, kExitVerify = 3, kExitInvariant = 4;

int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::contract: return kExitUsage;
    case ErrorCode::verification_failed: return kExitVerify;
    default: return kExitInput;
  }
}

void note(const std::string& msg) { std::cerr << "easic: note: " << msg << "\n"; }

struct Invariant : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Flow options shared by obfuscate, sweep and attack subcommands. Flags given on
// the command line override values from --config.
struct FlowFlags {
  RunConfig cfg;
  std::string config_file, save_config;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;
  RunConfig cli;

  void add(CLI::App* app, bool levels = true) {
    app->add_option("--config", config_file, "Run configuration (JSON)")->check(CLI::ExistingFile);
    app->add_option("--save-config", save_config, "Write the effective configuration here");
    bind(app->add_option("-n,--netlist", cli.netlist, "Input netlist (.v or .json)"),
         [this](RunConfig& c) { c.netlist = cli.netlist; });
    bind(app->add_option("--timing", cli.timing, "Timed paths (JSON); enumerated when absent"),
         [this](RunConfig& c) { c.timing = cli.timing; });
    if (levels)
      bind(app->add_option("--obf", cli.obf, "Obfuscation level(s) in percent")->delimiter(','),
           [this](RunConfig& c) { c.obf = cli.obf; });
    bind(app->add_option("--delay-model", cli.delay_model, "Delay model (JSON)"),
         [this](RunConfig& c) { c.delay_model = cli.delay_model; });
    bind(app->add_option("--area-model", cli.area_model, "Area model (JSON)"),
         [this](RunConfig& c) { c.area_model = cli.area_model; });
    bind(app->add_flag("--decompose", cli.decompose, "Decompose reconfigurable LUTs"),
         [this](RunConfig& c) { c.decompose = cli.decompose; });
    bind(app->add_option("--pinswap-freq", cli.pinswap_freq, "Pin-swap target frequency in MHz (0 = off)"),
         [this](RunConfig& c) { c.pinswap_freq = cli.pinswap_freq; });
    bind(app->add_option("--swap-cap", cli.swap_cap, "Maximum pin-swap attempts"),
         [this](RunConfig& c) { c.swap_cap = cli.swap_cap; });
    bind(app->add_option("-o,--output", cli.output_dir, "Output directory"),
         [this](RunConfig& c) { c.output_dir = cli.output_dir; });
    bind(app->add_option("--fc-cache", cli.fc_cache, "Decomposition table cache file"),
         [this](RunConfig& c) { c.fc_cache = cli.fc_cache; });
    bind(app->add_option("--delay-weight", cli.delay_weight, "Decomposition delay weight (um2 per ns)"),
         [this](RunConfig& c) { c.delay_weight = cli.delay_weight; });
    bind(app->add_option("--vectors", cli.verify_vectors, "Random verification vectors"),
         [this](RunConfig& c) { c.verify_vectors = cli.verify_vectors; });
  }

  void bind(CLI::Option* o, std::function<void(RunConfig&)> f) { overrides.emplace_back(o, std::move(f)); }

  RunConfig resolve(std::vector<double> default_levels = {}) {
    cfg = config_file.empty() ? RunConfig{} : RunConfig::from_json(read_text_file(config_file));
    if (!default_levels.empty() && config_file.empty()) cfg.obf = default_levels;
    for (auto& [opt, apply] : overrides)
      if (opt->count() > 0) apply(cfg);
    cfg.validate();
    if (!save_config.empty()) write_text_file(save_config, cfg.to_json());
    return cfg;
  }
};

struct Session {
  RunConfig cfg;
  Netlist original;
  Preprocessed pre;
  FlowOptions options;
  std::unique_ptr<AllImp> table;
  std::unique_ptr<FcHeuristic> heuristic;
  std::string notice;

  explicit Session(RunConfig c) : cfg(std::move(c)) {
    original = load_netlist(cfg.netlist);
    if (!cfg.delay_model.empty()) options.delay = delay_model_from_json(read_text_file(cfg.delay_model));
    if (!cfg.area_model.empty()) options.area = area_model_from_json(read_text_file(cfg.area_model));
    std::vector<RawPath> raw;
    if (cfg.timing.empty()) {
      notice = "no timing report given; paths enumerated from the netlist";
      note(notice);
    } else {
      raw = parse_paths_json(read_text_file(cfg.timing));
    }
    pre = preprocess(original, raw, options.delay);
    options.decompose = cfg.decompose;
    options.pinswap_freq = cfg.pinswap_freq;
    options.swap_cap = cfg.swap_cap;
    options.verify_vectors = cfg.verify_vectors;
    if (cfg.decompose) {
      const FcCostModel m = FcCostModel::from_models(options.area, options.delay, cfg.delay_weight);
      table = std::make_unique<AllImp>(cfg.fc_cache.empty() ? AllImp::build(4, m)
                                                           : AllImp::load_or_build(cfg.fc_cache, 4, m));
      heuristic = std::make_unique<FcHeuristic>(*table);
    }
  }

  FlowResult run(double obf) {
    FlowResult r = run_flow(original, pre, obf, options, heuristic.get());
    if (!notice.empty()) r.notices.insert(r.notices.begin(), notice);
    return r;
  }
};

std::string level_name(double pct) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "obf%g", pct);
  return buf;
}

void write_files(const fs::path& dir, const std::map<std::string, std::string>& files) {
  fs::create_directories(dir);
  for (const auto& [name, text] : files) write_text_file((dir / name).string(), text);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---------------------------------------------------------------- subcommands

int cmd_obfuscate(FlowFlags& flags) {
  Session s(flags.resolve());
  bool all_ok = true;
  for (double pct : s.cfg.obf) {
    const FlowResult r = s.run(pct);
    const fs::path dir = s.cfg.obf.size() == 1 ? fs::path(s.cfg.output_dir) : fs::path(s.cfg.output_dir) / level_name(pct);
    write_files(dir, flow_artifacts(r, s.options));
    std::cout << r.design << " obf " << fixed(pct, 2) << "%: " << r.row.luts_re << " reconfigurable, "
              << r.row.luts_st << " static, key " << r.bitstream.length() << " bits, CP " << fixed(r.row.cp, 3)
              << " ns, A " << fixed(r.row.area.total, 2) << " um2, "
              << (r.verification.equivalent ? "equivalent" : "MISMATCH") << " -> " << dir.string() << "\n";
    if (!r.verification.equivalent) {
      std::cerr << "easic: error[verification_failed]: " << r.design << " at " << fixed(pct, 2)
                << "%: output " << r.verification.mismatch_output << " differs\n";
      all_ok = false;
    }
  }
  return all_ok ? 0 : kExitVerify;
}

int cmd_sweep(FlowFlags& flags) {
  Session s(flags.resolve({100, 98, 95, 92, 89, 86}));
  std::vector<ReportRow> rows;
  for (double pct : s.cfg.obf) {
    const FlowResult r = s.run(pct);
    if (!r.verification.equivalent)
      fail(ErrorCode::verification_failed, r.design + " at " + fixed(pct, 2) + "%: hybrid differs from the original");
    rows.push_back(r.row);
  }
  const std::string csv = sweep_csv(rows);
  fs::create_directories(s.cfg.output_dir);
  write_text_file((fs::path(s.cfg.output_dir) / "sweep.csv").string(), csv);
  std::printf("%8s %9s %11s %12s %12s %12s %7s %7s\n", "obf%", "CP(ns)", "sumCP(ns)", "A_re(um2)", "A_st(um2)",
              "A(um2)", "#LUTre", "#LUTst");
  for (const auto& r : rows)
    std::printf("%8.2f %9.3f %11.3f %12.2f %12.2f %12.2f %7zu %7zu\n", r.obf_percent, r.cp, r.sumcp,
                r.area.reconfigurable, r.area.static_logic, r.area.total, r.luts_re, r.luts_st);
  if (const std::string bad = check_sweep_monotone(rows); !bad.empty()) throw Invariant(bad);
  return 0;
}

struct AttackFlags {
  std::string scope = "static";
  unsigned degree = 3;
  double threshold = 0;
  std::string db;
  std::vector<std::string> db_inputs;
  std::string solver_log;
};

// Partition and tagged netlist the attacker-side analyses run on.
FlowResult attacked_design(FlowFlags& flags) {
  RunConfig cfg = flags.resolve();
  require(cfg.obf.size() == 1, "attacks take a single obfuscation level");
  Session s(cfg);
  return s.run(cfg.obf.front());
}

int cmd_attack_struct(FlowFlags& flags, const AttackFlags& a) {
  require(a.scope == "static" || a.scope == "all", "scope must be 'static' or 'all'");
  const FlowResult r = attacked_design(flags);
  const PatternHistogram h =
      pattern_histogram(r.netlist, a.scope == "static" ? PatternScope::static_only : PatternScope::all);
  std::cout << h.total() << " patterns exposed (" << h.unique() << " unique)\n";
  if (h.unique() == 0) return 0;
  std::cout << "search space: 2^" << fixed(search_space_bits(h), 2) << "\n";
  std::string csv = "rank,width,mask,count,fitted\n";
  if (h.unique() >= a.degree + 1) {
    const DistributionFit fit = predict_distribution(h, a.degree, a.threshold);
    std::cout << "trendline degree " << a.degree << ", RMS residual " << fixed(fit.residual, 4) << ", "
              << fit.outliers.size() << " predicted outliers above " << fixed(fit.threshold, 2) << "\n";
    for (size_t i = 0; i < fit.ranked.size(); ++i) {
      const PatternKey& k = fit.ranked[i];
      csv += std::to_string(i + 1) + "," + std::to_string(k.width) + "," + TruthTable(k.width, k.mask).to_hex() + "," +
             std::to_string(h.entries.at(k)) + "," + fixed(fit.profile[i], 3) + "\n";
    }
  } else {
    note("too few unique patterns for a degree-" + std::to_string(a.degree) + " trendline");
  }
  fs::create_directories(flags.cfg.output_dir);
  write_text_file((fs::path(flags.cfg.output_dir) / "struct.csv").string(), csv);
  return 0;
}

int cmd_attack_db(const AttackFlags& a) {
  require(!a.db.empty(), "--db names the database file to write");
  require(!a.db_inputs.empty(), "no netlists to add");
  PatternDatabase db;
  for (const auto& path : a.db_inputs)
    db.add(fs::path(path).stem().string(), pattern_histogram(load_netlist(path), PatternScope::all));
  write_text_file(a.db, db.to_json());
  std::cout << db.designs().size() << " designs, M = " << db.m() << " unique patterns (2^"
            << fixed(search_space_bits(std::max<size_t>(db.m(), 1)), 2) << ")\n";
  return 0;
}

int cmd_attack_compose(FlowFlags& flags, const AttackFlags& a) {
  require(!a.db.empty(), "--db is required");
  const PatternDatabase db = PatternDatabase::from_json(read_text_file(a.db));
  const FlowResult r = attacked_design(flags);
  const PatternHistogram exposed = pattern_histogram(r.netlist, PatternScope::static_only);
  const CompositionReport rep = composition_attack(exposed, db);
  std::string csv = "rank,design,r,regime\n";
  for (size_t i = 0; i < rep.ranking.size(); ++i) {
    const auto& m = rep.ranking[i];
    csv += std::to_string(i + 1) + "," + m.design + "," + fixed(m.r, 6) + "," + m.regime + "\n";
  }
  fs::create_directories(flags.cfg.output_dir);
  write_text_file((fs::path(flags.cfg.output_dir) / "compose.csv").string(), csv);
  std::cout << csv;
  for (const auto& sk : rep.skipped) note("skipped " + sk);
  return 0;
}

int cmd_attack_bench(FlowFlags& flags, const AttackFlags& a) {
  const FlowResult r = attacked_design(flags);
  const BenchCircuit b = export_bench(r.netlist, r.partition);
  const fs::path dir(flags.cfg.output_dir);
  fs::create_directories(dir);
  write_text_file((dir / (r.design + ".bench")).string(), b.to_text());
  write_text_file((dir / "key.json").string(), r.bitstream.manifest_json());
  const SatReport sat = sat_ratio_report(b);
  write_text_file((dir / "sat.json").string(), sat.to_json());
  std::cout << "key length " << b.key_length << " bits, bitstream " << r.bitstream.length() << " bits; CNF "
            << sat.variables << " variables, " << sat.clauses << " clauses, ratio " << fixed(sat.computed_ratio, 3)
            << (sat.ideal_region ? " (ideal region)" : "") << "\n";
  if (!a.solver_log.empty()) {
    const SatReport log = parse_solver_log(read_text_file(a.solver_log));
    write_text_file((dir / "solver.json").string(), log.to_json());
    std::cout << "solver log: ratio " << fixed(log.ratio(), 3) << (log.ideal_region ? " (ideal region)" : "") << "\n";
  }
  if (b.key_length != r.bitstream.length())
    throw Invariant("bench key length " + std::to_string(b.key_length) + " != bitstream length " +
                    std::to_string(r.bitstream.length()));
  return 0;
}

int cmd_decompose_table(unsigned n, const std::string& out, double weight, const std::string& delay_path,
                        const std::string& area_path, bool force) {
  const DelayModel dm = delay_path.empty() ? DelayModel::defaults() : delay_model_from_json(read_text_file(delay_path));
  const AreaModel am = area_path.empty() ? AreaModel::defaults() : area_model_from_json(read_text_file(area_path));
  const FcCostModel m = FcCostModel::from_models(am, dm, weight);
  const std::string path = out.empty() ? all_imp_cache_name(n, m) : out;
  const AllImp t = AllImp::load_or_build(path, n, m, force);
  size_t decomposed = 0;
  for (const auto& [rep, impl] : t.classes()) decomposed += impl.kind == LutImpl::Kind::tree && impl.num_luts() > 1;
  std::cout << "N=" << n << ": " << t.classes().size() << " classes, " << decomposed
            << " with multi-LUT trees -> " << path << "\n";
  require(fs::exists(path), "could not write " + path);
  return 0;
}

int cmd_verify(const std::string& orig, const std::string& hybrid, const std::string& bits, uint64_t vectors) {
  const Netlist a = load_netlist(orig);
  const Netlist h = load_netlist(hybrid);
  const Bitstream bs = Bitstream::from_manifest_json(read_text_file(bits));
  const VerificationReport v = verify_equivalence(a, h, bs, vectors);
  if (!v.equivalent) {
    std::string cex;
    for (const auto& [name, val] : v.counterexample) cex += " " + name + "=" + (val ? "1" : "0");
    fail(ErrorCode::verification_failed, "output " + v.mismatch_output + " differs;" + cex);
  }
  std::cout << "equivalent (" << v.vectors << " vectors" << (v.exhaustive ? ", exhaustive" : "") << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"eASIC LUT obfuscation flow"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "easic 0.1.0");

  FlowFlags obf_flags, sweep_flags, attack_flags;
  AttackFlags attack;

  auto* obf = app.add_subcommand("obfuscate", "Hybrid netlist, bitstream and reports per obfuscation level");
  obf_flags.add(obf);
  auto* sweep = app.add_subcommand("sweep", "CSV of CP, sumCP and area over obfuscation levels");
  sweep_flags.add(sweep);

  auto* att = app.add_subcommand("attack", "Attacker-side analyses");
  att->require_subcommand(1);
  auto* a_struct = att->add_subcommand("struct", "Masking-pattern statistics of the exposed logic");
  attack_flags.add(a_struct);
  a_struct->add_option("--scope", attack.scope, "static or all")->check(CLI::IsMember({"static", "all"}));
  a_struct->add_option("--degree", attack.degree, "Trendline degree");
  a_struct->add_option("--threshold", attack.threshold, "Outlier count threshold (0 = automatic)");
  auto* a_compose = att->add_subcommand("compose", "Rank database designs by pattern correlation");
  attack_flags.add(a_compose);
  a_compose->add_option("--db", attack.db, "Pattern database (JSON)")->required();
  auto* a_bench = att->add_subcommand("bench", ".bench export with key inputs and a CNF size report");
  attack_flags.add(a_bench);
  a_bench->add_option("--solver-log", attack.solver_log, "External solver log to summarize")->check(CLI::ExistingFile);
  auto* a_db = att->add_subcommand("db", "Build a pattern database from netlists");
  a_db->add_option("--db", attack.db, "Database file to write")->required();
  a_db->add_option("netlists", attack.db_inputs, "Netlists (.v or .json)")->required()->check(CLI::ExistingFile);

  unsigned table_n = 4;
  std::string table_out, table_delay, table_area;
  double table_weight = 2000.0;
  bool table_force = false;
  auto* table = app.add_subcommand("decompose-table", "Build or refresh the exact decomposition table");
  table->add_option("--n", table_n, "Inputs (2..4)")->check(CLI::Range(2, 4));
  table->add_option("-o,--output", table_out, "Cache file (default fc<n>-<model>.bin)");
  table->add_option("--delay-weight", table_weight, "Delay weight (um2 per ns)");
  table->add_option("--delay-model", table_delay, "Delay model (JSON)")->check(CLI::ExistingFile);
  table->add_option("--area-model", table_area, "Area model (JSON)")->check(CLI::ExistingFile);
  table->add_flag("--force", table_force, "Rebuild even when the cache matches");

  std::string v_orig, v_hybrid, v_bits;
  uint64_t v_vectors = 10000;
  auto* verify = app.add_subcommand("verify", "Program a hybrid netlist and compare it with the original");
  verify->add_option("--original", v_orig, "Original netlist")->required()->check(CLI::ExistingFile);
  verify->add_option("--hybrid", v_hybrid, "Hybrid netlist")->required()->check(CLI::ExistingFile);
  verify->add_option("--bitstream", v_bits, "Bitstream manifest (JSON)")->required()->check(CLI::ExistingFile);
  verify->add_option("--vectors", v_vectors, "Random vectors");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "easic: error[usage]: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (obf->parsed()) return cmd_obfuscate(obf_flags);
    if (sweep->parsed()) return cmd_sweep(sweep_flags);
    if (a_struct->parsed()) return cmd_attack_struct(attack_flags, attack);
    if (a_compose->parsed()) return cmd_attack_compose(attack_flags, attack);
    if (a_bench->parsed()) return cmd_attack_bench(attack_flags, attack);
    if (a_db->parsed()) return cmd_attack_db(attack);
    if (table->parsed()) return cmd_decompose_table(table_n, table_out, table_weight, table_delay, table_area, table_force);
    if (verify->parsed()) return cmd_verify(v_orig, v_hybrid, v_bits, v_vectors);
  } catch (const Error& e) {
    std::cerr << "easic: error[" << to_string(e.code()) << "]: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const Invariant& e) {
    std::cerr << "easic: error[invariant]: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::exception& e) {
    std::cerr << "easic: error[internal]: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
