import math
import pathlib

import pytest

import fricflow

ROOT = pathlib.Path(__file__).resolve().parents[2]

SMALL = """
[mesh]
n = 4
[physics]
nu = 0.1
T = 0.05
dt = 0.01
eps = 1e-3
problem = {problem}
[initial]
shape = vortex
"""


def small(problem="STOKES"):
    return fricflow.Config.from_text(SMALL.format(problem=problem))


def test_regularization_values():
    assert fricflow.rho_eps([3.0, 4.0], 0.0 + 1e-3) == pytest.approx(math.hypot(5.0, 1e-3) - 1e-3)
    a = fricflow.alpha_eps([3.0, 4.0], 1e-3)
    assert math.hypot(*a) < 1.0
    assert len(fricflow.beta_eps([1.0, 0.0], 0.1)) == 4
    d = fricflow.complementarity_defect([0.2, -0.1], 2.0, 1e-2)
    assert 0.0 <= d <= 2.0 * 1e-2


def test_mesh_info():
    info = fricflow.mesh_info(4)
    assert info["triangles"] == 32
    assert info["vertices"] == 25
    assert info["interface_edges"] == 8
    assert info["valid"]
    assert len(info["hash"]) == 16


def test_config_errors_are_listed():
    with pytest.raises(fricflow.ConfigError) as e:
        fricflow.Config.from_text("[mesh]\nn = 4\n[physics]\nnu = 1\nT = 1\ndt = 0\neps = 1e-3\nproblem = EULER\n")
    msg = str(e.value)
    assert "[physics].dt" in msg
    assert "STOKES, NAVIER_STOKES" in msg


@pytest.mark.parametrize("problem", ["STOKES", "NAVIER_STOKES"])
def test_unforced_run_dissipates(problem, tmp_path):
    cfg = small(problem)
    assert cfg.num_steps == 5
    ts = fricflow.run(cfg, str(tmp_path))
    assert len(ts["t"]) == 6
    assert all(b <= a for a, b in zip(ts["energy"], ts["energy"][1:]))
    assert (tmp_path / "timeseries.csv").read_text().startswith("t,energy,j,j_eps,max_defect,delta,newton_iters,h1_norm")
    assert ts["final_velocity"].shape[0] > 0


def test_timeseries_is_deterministic():
    cfg = small("NAVIER_STOKES")
    assert fricflow.timeseries_csv(cfg) == fricflow.timeseries_csv(cfg)


def test_energy_verification_passes():
    rep = fricflow.verify_energy(small("NAVIER_STOKES"))
    assert rep["passed"], rep["checks"]
    names = [c[0] for c in rep["checks"]]
    assert "energy identity" in names


def test_shipped_config_parses():
    cfg = fricflow.Config.from_file(str(ROOT / "configs" / "stokes_energy.ini"))
    assert cfg.n == 8
    assert cfg.problem == "STOKES"
