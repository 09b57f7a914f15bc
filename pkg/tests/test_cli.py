import subprocess
import sys
from pathlib import Path

import pytest

from mccalc.cli import (
    FORMAT_VERSION,
    chain_to_cohomological,
    corpus_names,
    format_algebra,
    load_algebra,
    main,
    parse_algebra,
    run,
)
from mccalc.dgla import ValidationError
from mccalc.textfmt import ParseError

FIXTURES = Path(__file__).parent / "fixtures"

GOLDEN = {
    "homotopy_k2.txt": ["homotopy", "corpus:k2"],
    "samelson11.txt": ["samelson", "corpus:samelson11", "--x", "u", "--y", "v"],
    "validate_xab.txt": ["validate", "corpus:xab"],
}


@pytest.mark.parametrize("fixture", sorted(GOLDEN))
def test_golden_reports(fixture):
    assert run(GOLDEN[fixture]).render() == (FIXTURES / fixture).read_text(encoding="utf-8")


def test_selftest_is_byte_deterministic():
    a = run(["selftest", "--seed", "0", "--quick"]).render()
    b = run(["selftest", "--seed", "0", "--quick"]).render()
    assert a == b
    assert "FAIL" not in a


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("MCCALC_SEED", "5")
    assert "seed: 5" in run(["selftest", "--quick"]).render()
    monkeypatch.setenv("MCCALC_SEED", "five")
    assert run(["selftest", "--quick"]).exit_code == 2


def test_minimal_abelian_file():
    L = parse_algebra("algebra point\ngen x 3\n")
    assert L.nilpotency_class == 1
    assert L.basis.degrees == (chain_to_cohomological(3),) == (-3,)


def test_xab_corpus_file():
    L, _ = load_algebra("corpus:xab")
    assert L.nilpotency_class == 2


def test_jacobi_violation():
    # nilpotent, but Jacobi fails on (a, b, c)
    text = "algebra bad\n" + "".join(f"gen {s} 0\n" for s in "abcefg") + "[a, b] = e\n[b, c] = f\n[a, f] = g\n"
    with pytest.raises(ValidationError) as exc:
        parse_algebra(text)
    assert exc.value.check == "jacobi"
    assert set(exc.value.witness) == {"a", "b", "c"}


@pytest.mark.parametrize(
    "text, line",
    [
        ("gen x 0\n", 1),
        ("algebra a\ngen x 0\ngen x 1\n", 3),
        ("algebra a\ngen x 0\nd y = x\n", 3),
        ("algebra a\ngen x 0\ngen y 0\n[x, y] = z\n", 4),
        ("algebra a\ngen x 0\nnonsense\n", 3),
        ("algebra a\ngen x 0\ngen y 1\nd y = x\nd y = x\n", 5),
    ],
)
def test_parse_errors_are_located(text, line):
    with pytest.raises(ParseError) as exc:
        parse_algebra(text)
    assert exc.value.line == line


@pytest.mark.parametrize("name", corpus_names())
def test_corpus_round_trips(name):
    L, _ = load_algebra(f"corpus:{name}")
    M = parse_algebra(format_algebra(L))
    assert M.basis == L.basis and M.diff == L.diff and M.table == L.table


def test_corpus_size():
    assert len(corpus_names()) >= 6


def test_homotopy_summary():
    out = run(["homotopy", "corpus:k2"]).render()
    assert "summary: pi_3 dimension 1; all other pi trivial" in out


def test_samelson_report():
    out = run(["samelson", "corpus:samelson11", "--x", "u", "--y", "v"]).render()
    assert "curtis: w: 2*dt1*dt2" in out and "omega-bracket: w: 2*dt1*dt2" in out


@pytest.mark.parametrize(
    "argv, code",
    [
        (["validate", "corpus:xab"], 0),
        (["mc-check", "corpus:xab", "--element", "-a - 1/2*b"], 0),
        (["gauge-act", "corpus:xab", "--x", "x"], 0),
        (["connecting", "corpus:shifted", "--x", "b"], 0),
        (["connecting", "corpus:xab", "--x", "x"], 2),
        (["forms", "integrate", "--level", "2", "--form", "t1*t2*dt1*dt2"], 0),
        (["forms", "extend", "--level", "1", "--form", "t1"], 2),
        (["deligne", "corpus:k1"], 0),
        (["fill-horn", "corpus:xab", "--level", "2", "--missing", "0"], 0),
        (["fill-horn", "corpus:xab", "--level", "3", "--group", "G"], 0),
        (["validate", "corpus:nope"], 2),
        (["validate", "/nonexistent/file.alg"], 2),
        (["frobnicate"], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    rep = run(argv)
    assert rep.exit_code == code, rep.render()
    assert rep.render().startswith(f"format: {FORMAT_VERSION}\n")


def test_mc_check_failure(tmp_path):
    path = tmp_path / "curved.alg"
    path.write_text("algebra curved\ngen u -1\ngen w -2\nd u = w\n", encoding="utf-8")
    rep = run(["mc-check", str(path), "--element", "u"])
    assert rep.exit_code == 1
    assert "curvature: w" in rep.render()


def test_forms_values():
    assert "integral: 1/24" in run(["forms", "integrate", "--level", "2", "--form", "t1*t2*dt1*dt2"]).render()
    out = run(["forms", "extend", "--level", "1", "--form", "t0*t1"]).render()
    assert "2*t1*t2 - t1*t2^2 - t1^2*t2" in out


def test_main_and_help(capsys):
    assert main(["validate", "corpus:k1"]) == 0
    assert "checks-passed" in capsys.readouterr().out
    assert main(["--help"]) == 0
    assert "usage" in capsys.readouterr().out


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "mccalc.cli", "validate", "corpus:k3"], capture_output=True, text=True)
    assert proc.returncode == 0 and "exit: 0" in proc.stdout
