import importlib.util
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def load(name):
    spec = importlib.util.spec_from_file_location(name, SCRIPTS / f"{name}.py")
    mod = importlib.util.module_from_spec(spec)
    sys.modules[name] = mod  # dataclasses look the module up while executing
    spec.loader.exec_module(mod)
    return mod


def test_run_demos(tmp_path, capsys):
    mod = load("run_demos")
    assert mod.main(mod.DemoConfig(simulate=False, json_dir=tmp_path)) == 0
    assert len(list(tmp_path.glob("*.json"))) == 5
    assert "dual" in capsys.readouterr().out


def test_stability_sweep(tmp_path, capsys):
    mod = load("stability_sweep")
    path = tmp_path / "s.csv"
    assert mod.main(mod.SweepConfig(csv_path=str(path))) == 0
    rows = path.read_text().splitlines()
    assert len(rows) == 1 + 4 * 6
    assert all(float(r.split(",")[-1]) <= 1e-12 for r in rows[1:])


@pytest.mark.parametrize("t_end", [5.0])
def test_henon_heiles_script(t_end, tmp_path, capsys):
    mod = load("henon_heiles_conservation")
    cfg = mod.ConservationConfig(t_end=t_end, steps=(0.02, 0.01), csv_path=str(tmp_path / "hh.csv"))
    assert mod.main(cfg) == 0
    assert (tmp_path / "hh.csv").read_text().startswith("t,p_x,p_y,x,y,H")
