import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from plurilag.cli import bundled_problem, run_cli

GOLDEN = Path(__file__).parent / "golden" / "selftest.txt"

SMALL = """\
[context]
independent = x y
dependent = u

[expr]
L = 1/2*u_x*u_y - cos(u)

[form]
zero.degree = 1

[task]
d0 = dform form=zero zero=true
eul = euler expr=L expect=sin(u)-u_xy
"""


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run_cli(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def body(text):
    return text.split("\n", 1)[1]


def write(tmp_path, text, name="p.problem"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_selftest_passes():
    code, out, _ = run(["selftest"])
    assert code == 0
    assert out.rstrip().endswith("summary: 15/15 passed")


def test_corrupted_witness_fails():
    code, out, _ = run(["selftest", "--problem", str(bundled_problem("sine_gordon_corrupt.problem"))])
    assert code == 1
    assert "task: symmetry\nkind: check-symmetry\nstatus: FAIL\nresidual: -u_xy" in out
    assert "summary: 13/15 passed" in out


def test_golden_report():
    _, out, _ = run(["selftest"])
    assert body(out) == GOLDEN.read_text()


def test_deterministic():
    outs = [body(run(["selftest"])[1]) for _ in range(2)]
    assert outs[0] == outs[1]


def test_zero_form_dform(tmp_path):
    code, out, _ = run(["dform", "--problem", write(tmp_path, SMALL), "--task", "d0"])
    assert code == 0
    assert "x,y: 0" in out


def test_subcommand_filters_tasks(tmp_path):
    code, out, _ = run(["euler", "--problem", write(tmp_path, SMALL)])
    assert code == 0
    assert "task: eul" in out and "task: d0" not in out


def test_json_report(tmp_path):
    report = tmp_path / "r.json"
    code, _, _ = run(["selftest", "--json", str(report)])
    assert code == 0
    doc = json.loads(report.read_text())
    assert doc["summary"] == {"passed": 15, "total": 15}
    assert [t["status"] for t in doc["tasks"]] == ["PASS"] * 15
    again = tmp_path / "s.json"
    run(["selftest", "--json", str(again)])
    assert report.read_bytes() == again.read_bytes()


@pytest.mark.parametrize(
    "text, line",
    [
        (SMALL.replace("L = 1/2*u_x*u_y - cos(u)", "L = 1/2*u_x*u_q"), 6),
        (SMALL.replace("d0 = dform form=zero zero=true", "d0 = dform form=missing"), 12),
        (SMALL.replace("[task]", "[tasks]"), 11),
        (SMALL.replace("d0 = dform form=zero zero=true", "d0 = nonsense form=zero"), 12),
    ],
)
def test_input_errors_exit_2(tmp_path, text, line):
    path = write(tmp_path, text)
    code, out, err = run(["selftest", "--problem", path])
    assert code == 2
    assert out == ""
    assert f"{path}:{line}:" in err


def test_missing_file_exits_2(tmp_path):
    code, _, err = run(["selftest", "--problem", str(tmp_path / "absent.problem")])
    assert code == 2 and "absent.problem" in err


def test_unknown_task_name(tmp_path):
    code, _, err = run(["dform", "--problem", write(tmp_path, SMALL), "--task", "nope"])
    assert code == 2 and "nope" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "plurilag", "selftest"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert body(proc.stdout) == GOLDEN.read_text()


WITNESS = """\
[context]
independent = x y
dependent = u

[expr]
f = D(u_x*cos(u), y) + D(u_y^2, x)
g = u_x^2

[task]
found = witness-search expr=f order=1 degree=2
rejected = witness-search expr=g expect=not-divergence
tiny = witness-search expr=f order=0 degree=1 trig=false expect=exhausted
wrong = witness-search expr=g
"""


def test_witness_search_outcomes(tmp_path):
    path = write(tmp_path, WITNESS)
    code, out, _ = run(["witness-search", "--problem", path, "--task", "found", "--task", "rejected", "--task", "tiny"])
    assert code == 0
    assert "outcome: found" in out and "outcome: not-divergence" in out and "outcome: exhausted" in out
    assert "residual: -2*u_xx" in out
    code, out, _ = run(["witness-search", "--problem", path, "--task", "wrong"])
    assert code == 1
