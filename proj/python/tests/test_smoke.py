import os
import pathlib

import pytest

import easic

DATA = pathlib.Path(os.environ.get("EASIC_DATA_DIR", pathlib.Path(__file__).resolve().parents[2] / "data"))
SBM = str(DATA / "corpus" / "sbm25.v")


def test_truth_table_ops():
    a = easic.TruthTable.variable(2, 0)
    b = easic.TruthTable.variable(2, 1)
    assert (a & b).bits == 0x8
    assert (a ^ b).bits == 0x6
    assert (~(a | b)).bits == 0x1
    assert easic.TruthTable.from_hex(2, "4'h6") == (a ^ b)
    assert easic.permute_inputs(easic.TruthTable(2, 0x2), [1, 0]).bits == 0x4


def test_npn_and_isop():
    canon, perm, flips, out_flip = easic.npn_canonicalize(easic.TruthTable(3, 0x80))
    assert canon.bits <= 0x80
    assert sorted(perm) == [0, 1, 2]
    cover = easic.isop_minimize(easic.TruthTable(3, 0xE8))  # majority
    assert cover.evaluate() == easic.TruthTable(3, 0xE8)
    assert cover.num_cubes == 3


def test_error_carries_code():
    with pytest.raises(easic.EasicError) as info:
        easic.load_netlist(str(DATA / "missing.v"))
    assert info.value.args[0] == "io"
    with pytest.raises(easic.EasicError) as info:
        easic.parse_verilog("module m (a);\n input a;\n")
    assert info.value.args[0] == "syntax"


def test_flow_levels():
    nl = easic.load_netlist(SBM)
    assert nl.num_luts == 25
    rows = []
    for obf in (0, 50, 100):
        r = easic.run_flow(nl, obf)
        assert r.equivalent
        rows.append(r.row)
        assert len(r.static_luts) + len(r.reconfigurable_luts) == 25
    assert rows[0]["luts_re"] == 0 and rows[2]["luts_st"] == 0
    assert rows[0]["sumcp"] <= rows[1]["sumcp"] <= rows[2]["sumcp"]
    assert rows[0]["a_re"] <= rows[1]["a_re"] <= rows[2]["a_re"]


def test_flow_with_decompose_and_pinswap():
    nl = easic.load_netlist(SBM)
    r = easic.run_flow(nl, 80, decompose=True, pinswap_freq=400)
    assert r.equivalent
    assert len(r.swap_trajectory) >= 1
    files = r.artifacts()
    assert {"hybrid.v", "bitstream.json", "report.csv", "pinswap.csv"} <= set(files)
    # The hybrid round-trips through the Verilog reader.
    assert easic.parse_verilog(files["hybrid.v"].decode()).num_luts == len(r.reconfigurable_luts)


def test_attacks():
    nl = easic.load_netlist(SBM)
    r = easic.run_flow(nl, 50)
    exposed = easic.pattern_histogram(r.netlist)
    assert sum(exposed.values()) == len(r.static_luts)
    assert easic.search_space_bits(4) == pytest.approx(2.0)
    full = easic.pattern_histogram(nl, static_only=False)
    ranking, skipped = easic.composition_attack(full, {"sbm25": full})
    assert ranking[0][0] == "sbm25" and ranking[0][1] == pytest.approx(1.0)
    assert ranking[0][2] == "self-correlation"
    bench = easic.export_bench(r)
    assert bench["key_length"] == r.key_length
    assert "INPUT(keyinput0)" in bench["text"]
