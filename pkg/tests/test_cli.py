import json

import pytest

from stsdisc.cli import main
from stsdisc.core import read_colouring, read_triple_system
from stsdisc.sts import validate_sts


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_construct_and_verify_round_trip(tmp_path, capsys):
    path = tmp_path / "s13.txt"
    code, _, _ = run(capsys, "construct", "--n", "13", "--out", str(path))
    assert code == 0
    assert validate_sts(read_triple_system(path))[0]
    code, out, _ = run(capsys, "verify", "--system", str(path), "--no-timing")
    assert code == 0
    assert json.loads(out)["valid"] is True


def test_construct_bad_order_exits_1(tmp_path, capsys):
    code, _, err = run(capsys, "construct", "--n", "8", "--out", str(tmp_path / "x.txt"))
    assert code == 1
    assert "mod 6" in err


def test_generate_kinds(tmp_path, capsys):
    for kind, extra in (
        ("random", []),
        ("example1", ["--x-size", "5"]),
        ("monochromatic", ["--colour", "2"]),
    ):
        path = tmp_path / f"{kind}.txt"
        code, _, _ = run(capsys, "generate", "--n", "10", "--kind", kind, "--out", str(path), *extra)
        assert code == 0
        chi = read_colouring(path)
        assert chi.n == 10 and chi.r == 2


def test_enumerate_count_only(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "7", "--count-only", "--no-timing")
    assert code == 0
    payload = json.loads(out)
    assert payload["count"] == 30 and payload["schema"] == 1


def test_enumerate_rejects_large_n(capsys):
    code, _, err = run(capsys, "enumerate", "--n", "13", "--count-only")
    assert code == 1


def test_json_byte_identical_with_no_timing(tmp_path, capsys):
    path = tmp_path / "c.txt"
    run(capsys, "generate", "--n", "9", "--seed", "4", "--out", str(path))
    argv = ["count-gadgets", "--colouring", str(path), "--no-timing"]
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv)
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["mode"] == "exact" and "elapsed" not in payload


def test_timing_present_by_default(tmp_path, capsys):
    path = tmp_path / "c.txt"
    run(capsys, "generate", "--n", "9", "--seed", "4", "--out", str(path))
    _, out, _ = run(capsys, "count-gadgets", "--colouring", str(path))
    assert "elapsed" in json.loads(out)


def test_discrepancy_subcommand(tmp_path, capsys):
    sys_path = tmp_path / "s.txt"
    col_path = tmp_path / "c.txt"
    run(capsys, "construct", "--n", "9", "--out", str(sys_path))
    run(capsys, "generate", "--n", "9", "--kind", "monochromatic", "--out", str(col_path))
    code, out, _ = run(capsys, "discrepancy", "--system", str(sys_path), "--colouring", str(col_path), "--no-timing")
    assert code == 0
    assert json.loads(out)["discrepancy"] == "12"


def test_boost_subcommand_and_output_file(tmp_path, capsys):
    col = tmp_path / "c.txt"
    out_sts = tmp_path / "boosted.txt"
    run(capsys, "generate", "--n", "13", "--seed", "2", "--out", str(col))
    code, out, _ = run(
        capsys,
        "boost", "--colouring", str(col), "--vertex-cap", "6", "--seed", "1",
        "--out", str(out_sts), "--no-timing",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["schema"] == 1
    assert 3 * sum(payload["T_vector"]) + 12 * payload["selected"] == 78
    assert validate_sts(read_triple_system(out_sts))[0]


def test_decompose_exit_codes(tmp_path, capsys):
    out_path = tmp_path / "d.txt"
    code, _, _ = run(capsys, "decompose", "--complete", "9", "--out", str(out_path))
    assert code == 0
    # triangle-free divisible graph: proof of nonexistence -> invalid input
    edges = tmp_path / "c6.txt"
    edges.write_text("1 2\n2 3\n3 4\n4 5\n5 6\n1 6\n")
    code, _, err = run(capsys, "decompose", "--edges", str(edges), "--out", str(out_path))
    assert code == 1
    # budget exhaustion -> exit 2
    code, _, _ = run(
        capsys, "decompose", "--complete", "15", "--budget", "2", "--out", str(out_path)
    )
    assert code == 2


def test_trade_search_and_baseline(tmp_path, capsys):
    col = tmp_path / "c.txt"
    sts = tmp_path / "s.txt"
    run(capsys, "generate", "--n", "13", "--seed", "5", "--out", str(col))
    run(capsys, "construct", "--n", "13", "--out", str(sts))
    code, out, _ = run(
        capsys, "trade-search", "--system", str(sts), "--colouring", str(col),
        "--iterations", "10", "--no-timing",
    )
    assert code == 0
    payload = json.loads(out)
    from fractions import Fraction

    assert Fraction(payload["discrepancy_after"]) >= Fraction(payload["discrepancy_before"])
    code, out, _ = run(capsys, "baseline", "--colouring", str(col), "--trials", "10", "--no-timing")
    assert code == 0
    assert json.loads(out)["trials"] == 10


def test_recover_structure_subcommand(tmp_path, capsys):
    col = tmp_path / "e.txt"
    run(capsys, "generate", "--n", "12", "--kind", "example1", "--x-size", "6", "--out", str(col))
    code, out, _ = run(capsys, "recover-structure", "--colouring", str(col), "--no-timing")
    assert code == 0
    payload = json.loads(out)
    assert payload["mismatch_count"] == 0 and payload["x_size"] in (6,)


def test_analyze_subcommand(tmp_path, capsys):
    col = tmp_path / "c3.txt"
    run(capsys, "generate", "--n", "11", "--r", "3", "--seed", "1", "--out", str(col))
    code, out, _ = run(capsys, "analyze", "--colouring", str(col), "--no-timing")
    assert code == 0
    assert json.loads(out)["verdict"]["kind"] in ("many_gadgets", "two_dominant", "inconclusive")


def test_oracle_subcommand(tmp_path, capsys):
    col = tmp_path / "e7.txt"
    run(capsys, "generate", "--n", "7", "--kind", "example1", "--x-size", "3", "--out", str(col))
    code, out, _ = run(capsys, "oracle", "--colouring", str(col), "--no-timing")
    assert code == 0
    payload = json.loads(out)
    assert payload["min_discrepancy"] == "5" and payload["max_discrepancy"] == "5"


def test_collect_gadgets_subcommand(tmp_path, capsys):
    col = tmp_path / "c.txt"
    run(capsys, "generate", "--n", "13", "--seed", "8", "--out", str(col))
    code, out, _ = run(
        capsys, "collect-gadgets", "--colouring", str(col),
        "--max-count", "5", "--budget", "5000", "--no-timing",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["found"] == len(payload["gadgets"]) <= 5


def test_report_subcommand(tmp_path, capsys):
    outdir = tmp_path / "rep"
    code, out, _ = run(
        capsys, "report", "--n", "13", "--r", "2", "--runs", "2",
        "--trials", "10", "--outdir", str(outdir),
    )
    assert code == 0
    csv_path = outdir / "boost_runs.csv"
    assert csv_path.exists()
    header = csv_path.read_text().splitlines()[0]
    assert header.startswith("n,r,seed,selected,boost_discrepancy,baseline_discrepancy")
    assert (outdir / "boost_vs_baseline.png").exists()
    assert (outdir / "boost_margin.png").exists()


def test_unknown_flag_exits_1(capsys):
    assert main(["construct", "--bogus"]) == 1
    capsys.readouterr()
