import csv
import json
import math
import subprocess
import sys

import pytest

from flapwing.cli import main
from flapwing.config import dump_config
from flapwing.scenarios import list_scenarios, load_scenario, scenario_text

BLOWUP = """\
[scenario]
name = unstable
model = stroke
mode = simulate

[params]
m_r = 2 mg
L = 2.5 mm
k_t = 20 uNm/rad
L_w = 4.4 mm
z_max = 0.8 mm

[integration]
dt = 0.5 cycle
t_end = 1000 cycle
dt_out = 0.5 cycle
"""


def run(args, capsys):
    code = main(args)
    out, err = capsys.readouterr()
    return code, out, err


def test_list_scenarios(capsys):
    code, out, _ = run(["list-scenarios"], capsys)
    names = [line.split()[0] for line in out.splitlines()]
    assert code == 0
    assert len(names) >= 6 and len(set(names)) == len(names)


@pytest.mark.slow
@pytest.mark.parametrize("name", [n for n, _ in list_scenarios()])
def test_every_builtin_runs(name, tmp_path, capsys):
    code, out, err = run(["run", name, "--output-dir", str(tmp_path)], capsys)
    assert code == 0, err
    for path in out.split():
        assert (tmp_path / path.split("/")[-1]).exists()


def test_trajectory_row_count_and_determinism(tmp_path, capsys):
    for d in ("a", "b"):
        code, _, err = run(["simulate", "fig2-stroke", "--output-dir", str(tmp_path / d)], capsys)
        assert code == 0, err
    a, b = (tmp_path / d / "fig2-stroke.csv" for d in "ab")
    assert a.read_bytes() == b.read_bytes()
    rows = list(csv.reader(a.open()))
    assert rows[0] == ["t", "angle_rad", "rate_rad_s"]
    cfg = load_scenario("fig2-stroke").integration
    assert len(rows) - 1 == math.floor(cfg["t_end"].n / cfg["dt_out"].n + 1e-9) + 1
    summ = json.loads((tmp_path / "a" / "fig2-stroke.json").read_text())
    assert summ["settled"] is True
    assert summ["rows"] == len(rows) - 1


def test_empty_config_exits_1(tmp_path, capsys):
    f = tmp_path / "empty.ini"
    f.write_text("")
    code, _, err = run(["simulate", str(f)], capsys)
    assert code == 1
    report = json.loads(err)
    assert report["kind"] == "config" and report["violations"]


def test_seedless_rejected(capsys):
    code, _, err = run(["simulate", "fig2-stroke", "--seedless"], capsys)
    assert code == 1
    assert json.loads(err)["violations"][0]["field"] == "--seedless"


def test_mode_mismatch_rejected(capsys):
    code, _, err = run(["sweep", "fig2-stroke"], capsys)
    assert code == 1


def test_missing_file_rejected(capsys):
    code, _, _ = run(["simulate", "/nonexistent/none.ini"], capsys)
    assert code == 1


def test_blow_up_exits_2(tmp_path, capsys):
    f = tmp_path / "blow.ini"
    f.write_text(BLOWUP)
    code, _, err = run(["simulate", str(f), "--output-dir", str(tmp_path)], capsys)
    assert code == 2
    report = json.loads(err)
    assert report["kind"] == "blow-up" and report["time_s"] > 0


def test_dump_config_round_trip(tmp_path, capsys):
    code, out, _ = run(["run", "pitch-design-point", "--dump-config"], capsys)
    assert code == 0
    assert out == dump_config(load_scenario("pitch-design-point"))
    f = tmp_path / "dumped.ini"
    f.write_text(out)
    code, out2, _ = run(["run", str(f), "--dump-config"], capsys)
    assert out2 == out


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "flapwing", "pivot", "pivot-table1",
                           "--output-dir", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    summ = json.loads((tmp_path / "pivot-table1.json").read_text())
    serial = summ["topologies"]["serial-torsion"]
    assert serial["stiffness_N_m_per_rad"] == pytest.approx(8.6e-6, rel=0.02)
    assert serial["within_budget"] is True
