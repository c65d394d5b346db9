import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from warsaw_homology.cli import decode_spec, encode_spec, main
from warsaw_homology.sequences import (
    AltDiff,
    Combo,
    FiniteSupport,
    GeometricBase,
    PowerFamilyBase,
    Truncation,
    Variant,
)
from strategies import rationals

POWER_HALF = '{"kind":"alt_diff","base":{"kind":"power_tail_base","beta":0.5}}'


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out) if out.strip() else None, err


def test_classify_finite(capsys):
    code, report, _ = run_json(capsys, "classify", "--seq", '{"kind":"finite","values":["1","-1"]}')
    assert code == 0
    assert report["verdict"]["category"] == "SingularNonZero"
    assert report["verdict"]["alpha"] == "2"
    assert report["inputs"] == {"kind": "finite", "values": ["1", "-1"]}


def test_classify_power_family(capsys):
    code, report, _ = run_json(capsys, "classify", "--seq", POWER_HALF)
    assert code == 0 and report["verdict"]["category"] == "NonSingular"
    assert report["verdict"]["witness"][0]["rule"] == "p-series"


def test_classify_empty(capsys):
    code, report, _ = run_json(capsys, "classify", "--seq", '{"kind":"finite","values":[]}')
    assert code == 0 and report["verdict"]["category"] == "Boundary"


def test_classify_text_and_file(capsys, tmp_path):
    path = tmp_path / "seq.json"
    path.write_text(POWER_HALF)
    code, out, _ = run(capsys, "classify", "--seq", str(path), "--format", "text")
    assert code == 0 and out.startswith("NonSingular")


def test_inconclusive_exit_code(capsys):
    # an alternating combination of raw power families has no symbolic alternating tail
    seq = json.dumps({"kind": "mv_inverse", "x": {"kind": "mv_inverse", "x": {
        "kind": "finite", "values": ["1", "1"]}}})
    code, report, _ = run_json(capsys, "classify", "--seq", seq)
    assert code == 3 and report["verdict"]["category"] == "Inconclusive"


@pytest.mark.parametrize("seq, field", [
    ('{"kind":"wat"}', "seq.kind"),
    ('{"kind":"finite","values":[0.5]}', "seq.values[0]"),
    ('{"kind":"finite"}', "seq.values"),
    ('{"kind":"alt_diff","base":{"kind":"finite","values":[]}}', "seq.base"),
    ('{"kind":"power_tail_base","beta":-1}', "seq"),
    ('{"kind":"truncation","of":' + POWER_HALF + ',"n":-2}', "seq.n"),
    ('{"kind":"truncation","of":' + POWER_HALF + ',"n":2,"variant":"x"}', "seq.variant"),
    ('{"kind":"combo","terms":[{"coeff":true,"spec":' + POWER_HALF + '}]}', "seq.terms[0].coeff"),
    ("{not json", "seq"),
    ("/nonexistent/file.json", "seq"),
    ("[1, 2]", "seq"),
])
def test_invalid_input_names_field(capsys, seq, field):
    code, out, err = run(capsys, "classify", "--seq", seq)
    assert code == 2 and out == ""
    assert field in err


def test_non_l1_input_is_rejected(capsys):
    code, _, err = run(capsys, "classify", "--seq", '{"kind":"power_tail_base","beta":0.5}')
    assert code == 2 and "not absolutely summable" in err


def test_bad_flags_exit_2(capsys):
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "points", "--family", "q", "--count", "2")[0] == 2
    assert run(capsys, "points", "--family", "u", "--count", "x")[0] == 2
    assert run(capsys, "independence", "--betas", "0.6,0.3", "--coeffs", "1,1")[0] == 2
    assert run(capsys, "independence", "--betas", "0.3,zz", "--coeffs", "1,1")[0] == 2


def test_mv_forward(capsys):
    code, report, _ = run_json(capsys, "mv", "forward", "--seq",
                               '{"kind":"finite","values":["1"]}', "--terms", "4")
    assert code == 0
    assert report["terms"] == ["1", "1", "0", "0"]
    assert report["result"] == {"kind": "finite", "values": ["1", "1"]}


def test_mv_invert_formal(capsys):
    code, report, _ = run_json(capsys, "mv", "invert", "--seq",
                               '{"kind":"finite","values":["1"]}', "--terms", "4")
    assert report["terms"] == ["1", "-1", "1", "-1"]
    assert report["l1"]["status"] == "NotSummable"


def test_points(capsys):
    code, report, _ = run_json(capsys, "points", "--family", "u", "--count", "2")
    assert code == 0
    assert report["points"][0] == {"index": 0, "x": "0", "x_symbolic": "0", "y": "1"}
    assert report["points"][1]["x"] == "0.127323954473516"
    assert report["points"][1]["x_symbolic"] == "2/(5π)"


def test_independence(capsys):
    code, report, _ = run_json(capsys, "independence", "--betas", "0.3,0.6", "--coeffs", "1,-1")
    assert code == 0 and report["nonzero_class"]
    assert report["verdict"]["witness"][0]["rule"] == "dominance"


def test_diagnostics_csv(capsys, tmp_path):
    path = tmp_path / "trace.csv"
    code, report, _ = run_json(capsys, "diagnostics", "--seq", POWER_HALF, "--terms", "10000",
                               "--checkpoints", "100,10000", "--transform",
                               "alt_sums_minus_limit", "--csv", str(path), "--format", "json")
    assert code == 0 and report["trace"] == str(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "N,partial_sum,residual" and len(lines) == 3
    assert report["summability"]["status"] == "NotSummable"
    assert report["checkpoints"][-1]["partial_sum"] >= report["lower_bound"]
    code, out, _ = run(capsys, "diagnostics", "--seq", POWER_HALF, "--terms", "10")
    assert out.splitlines()[0] == "N,partial_sum,residual"


def test_diagnostics_checkpoint_validation(capsys):
    assert run(capsys, "diagnostics", "--seq", POWER_HALF, "--terms", "10",
               "--checkpoints", "20")[0] == 2


def test_demo(capsys):
    code, report, _ = run_json(capsys, "demo", "--base", "power:0.5", "--n-values", "10,100,1000")
    assert code == 0 and report["certified"]
    assert [t["verdict"]["category"] for t in report["truncations"]] == ["Boundary"] * 3
    assert report["verdict"]["category"] == "NonSingular"
    assert len(report["convergence"]["rows"]) == 3


def test_demo_precondition_exit_4(capsys):
    code, _, err = run(capsys, "demo", "--base", "geometric:1/2", "--n-values", "10")
    assert code == 4 and "converges" in err


def test_demo_functions_and_json_base(capsys):
    code, report, _ = run_json(capsys, "demo", "--base", '{"kind":"power_tail_base","beta":1}',
                               "--n-values", "10,20", "--functions", "1,y")
    assert code == 0 and report["inputs"]["functions"] == ["1", "y"]
    assert run(capsys, "demo", "--base", "power:0.5", "--functions", "sin")[0] == 2


def test_output_is_deterministic(capsys):
    first = run(capsys, "demo", "--base", "power:1", "--n-values", "10,100")[1]
    second = run(capsys, "demo", "--base", "power:1", "--n-values", "10,100")[1]
    assert first == second


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "warsaw_homology", "classify", "--seq",
                           '{"kind":"finite","values":["1","-1"]}', "--format", "text"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.startswith("SingularNonZero(alpha = 2)")


# -- codec round trip ----------------------------------------------------------------------

params = st.fractions(min_value=Fraction(1, 20), max_value=Fraction(19, 20), max_denominator=40)
bases = st.one_of(params.map(PowerFamilyBase), params.map(GeometricBase))
leaves = st.one_of(
    st.lists(rationals, max_size=6).map(FiniteSupport),
    bases,
    bases.map(AltDiff),
    st.builds(Truncation, bases.map(AltDiff), st.integers(0, 50), st.sampled_from(list(Variant))),
)
specs = st.one_of(leaves, st.lists(st.tuples(st.one_of(rationals, st.floats(-5, 5)), leaves),
                                   min_size=1, max_size=3).map(lambda t: Combo(tuple(t))))


@given(specs)
def test_codec_round_trip(spec):
    encoded = encode_spec(spec)
    assert decode_spec(encoded) == spec
    assert decode_spec(json.loads(json.dumps(encoded))) == spec
    assert encode_spec(decode_spec(encoded)) == encoded
