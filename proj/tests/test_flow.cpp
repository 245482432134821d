#include <doctest.h>

#include "easic/error.hpp"
#include "easic/flow.hpp"
#include "support/generator.hpp"

using namespace easic;

TEST_CASE("run config JSON round trip and validation") {
  RunConfig c;
  c.netlist = "a.v";
  c.obf = {0, 50, 100};
  c.decompose = true;
  c.pinswap_freq = 250;
  c.swap_cap = 7;
  c.verify_vectors = 123;
  CHECK(RunConfig::from_json(c.to_json()) == c);
  CHECK_NOTHROW(c.validate());

  try {
    RunConfig::from_json(R"({"netlist": "a.v", "obfs": [1]})");
    FAIL("unknown key accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::syntax);
  }
  CHECK_THROWS_AS(RunConfig::from_json("[1]"), Error);
  CHECK_THROWS_AS(RunConfig::from_json(R"({"obf": "x"})"), Error);

  RunConfig bad = c;
  bad.obf = {101};
  CHECK_THROWS_AS(bad.validate(), Error);
  bad = c;
  bad.netlist.clear();
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("sweep monotonicity check") {
  auto row = [](double obf, double sumcp, double are) {
    ReportRow r;
    r.obf_percent = obf;
    r.sumcp = sumcp;
    r.area.reconfigurable = are;
    return r;
  };
  CHECK(check_sweep_monotone({row(100, 5, 10), row(50, 4, 6), row(0, 3, 0)}).empty());
  CHECK(check_sweep_monotone({row(0, 3, 0), row(50, 2, 6)}).find("sumCP") != std::string::npos);
  CHECK(check_sweep_monotone({row(0, 3, 7), row(50, 4, 6)}).find("A_re") != std::string::npos);
  CHECK(check_sweep_monotone({}).empty());
}

TEST_CASE("flow levels on a generated design") {
  const Netlist nl = testing::random_netlist(4242, {.num_luts = 60});
  const FlowOptions opt;
  const Preprocessed pre = preprocess(nl, {}, opt.delay);
  std::vector<ReportRow> rows;
  for (double p : {0.0, 50.0, 80.0, 100.0}) {
    const FlowResult r = run_flow(nl, pre, p, opt);
    CHECK(r.verification.equivalent);
    CHECK(r.row.luts_re + r.row.luts_st == pre.netlist.luts().size());
    if (p == 0) CHECK(r.bitstream.length() == 0);
    if (p == 100) CHECK(r.row.luts_st == 0);
    const auto files = flow_artifacts(r, opt);
    CHECK(files.count("hybrid.v"));
    CHECK(files.count("pinswap.csv") == 0);
    CHECK(files.at("report.csv") == report_csv_header() + report_csv_row(r.row));
    rows.push_back(r.row);
  }
  CHECK(check_sweep_monotone(rows).empty());
  CHECK(sweep_csv(rows).starts_with(report_csv_header()));
  CHECK_THROWS_AS(run_flow(nl, pre, 101, opt), Error);
  FlowOptions dec = opt;
  dec.decompose = true;
  CHECK_THROWS_AS(run_flow(nl, pre, 50, dec), Error);
}
