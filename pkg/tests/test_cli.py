import csv
import io
import json

import pytest
from hypothesis import given, settings, strategies as st

from qtheta.catalog import VerificationReport
from qtheta.cli import CSV_HEADER, emit_report, main
from qtheta.exactnum import Eisenstein
from qtheta.qseries import FirstMismatch


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "thm12.1", "--order", "30", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data) == 1 and data[0]["id"] == "thm12.1"
    assert data[0]["first_mismatch"] is None and data[0]["status"] == "pass"
    assert set(data[0]) == {"id", "status", "checked_order", "first_mismatch", "wall_time_ms"}


def test_check_mismatch_exit_1(capsys):
    code, out, _ = run(capsys, "check", "--lhs", "theta0", "--rhs", "theta1", "--order", "5", "--format", "json")
    assert code == 1
    fm = json.loads(out)[0]["first_mismatch"]
    assert fm["exponent_num"] == 1 and fm["lhs"] == {"a": "-2", "b": "0"} and fm["rhs"] == {"a": "1", "b": "0"}


def test_unknown_id_exit_2(capsys):
    code, _, err = run(capsys, "verify", "no.such.id")
    assert code == 2 and "no.such.id" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        [],
        ["verify"],
        ["verify", "thm12.1", "--order", "-3"],
        ["verify", "thm12.1", "--format", "xml"],
        ["expand", "theta0 ^"],
        ["expand", "1/(2+q)"],
        ["check", "--lhs", "theta0"],
        ["verify-all", "--jobs", "0"],
        ["expand", "q", "--den", "0"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_expand_dump(capsys):
    code, out, _ = run(capsys, "expand", "1/(1-q)", "--order", "3")
    assert code == 0
    assert out.splitlines() == ["0/1\t1\t0", "1/1\t1\t0", "2/1\t1\t0", "3/1\t1\t0"]
    code, out, _ = run(capsys, "expand", "theta0", "--order", "4", "--den", "3")
    assert out.splitlines()[1] == "3/3\t-2\t0"


def test_expand_json_uses_strings(capsys):
    code, out, _ = run(capsys, "expand", "phi.twist(1)", "--order", "2", "--format", "json")
    data = json.loads(out)
    assert data["order"] == "2"
    assert all(isinstance(t["a"], str) and isinstance(t["b"], str) for t in data["terms"])


def test_env_default_order(capsys, monkeypatch):
    monkeypatch.setenv("QTHETA_DEFAULT_ORDER", "2")
    code, out, _ = run(capsys, "expand", "1/(1-q)")
    assert len(out.splitlines()) == 3
    monkeypatch.setenv("QTHETA_DEFAULT_ORDER", "-1")
    assert run(capsys, "expand", "q")[0] == 2


def test_out_file(tmp_path, capsys):
    target = tmp_path / "r.csv"
    code, out, _ = run(capsys, "verify", "del81", "ram.1", "--format", "csv", "--out", str(target))
    assert code == 0 and out == ""
    rows = list(csv.reader(io.StringIO(target.read_text())))
    assert rows[0] == CSV_HEADER
    assert [r[0] for r in rows[1:]] == ["del81", "ram.1"]


def test_list_formats(capsys):
    code, out, _ = run(capsys, "list", "--format", "json")
    ids = [c["id"] for c in json.loads(out)]
    assert code == 0 and "thm12.1" in ids and ids == sorted(ids)
    code, out, _ = run(capsys, "list")
    assert out.splitlines()[0].split()[0] == ids[0]


def test_text_table_alignment():
    reports = [
        VerificationReport("a", "pass", 5, None, 1.0),
        VerificationReport("longer.id", "fail", 5, FirstMismatch(1, 1, Eisenstein(2, 0), Eisenstein(1, 1)), 2.0),
    ]
    lines = emit_report(reports, "text").splitlines()
    assert lines[0].index("status") == lines[1].index("pass") == lines[2].index("fail")
    assert "lhs 2, rhs 1+1w" in lines[2]


def test_big_coefficients_survive_json():
    big = 10 ** 40 + 7
    r = VerificationReport("x", "fail", 3, FirstMismatch(2, 3, Eisenstein(big, -big), Eisenstein(0, 1)), 0.5)
    rec = json.loads(emit_report([r], "json"))[0]
    assert int(rec["first_mismatch"]["lhs"]["a"]) == big
    assert rec["first_mismatch"]["exponent_den"] == 3


@settings(max_examples=80, deadline=None)
@given(st.text(max_size=20))
def test_never_panics_on_expressions(text):
    code = main(["expand", text, "--order", "3", "--out", "/dev/null"])
    assert code in (0, 2)


def test_exit_code_agrees_with_statuses(capsys):
    code, out, _ = run(capsys, "verify", "thm12.1", "del81", "--order", "5", "--format", "json")
    statuses = {r["status"] for r in json.loads(out)}
    assert (code == 0) == (statuses == {"pass"})
