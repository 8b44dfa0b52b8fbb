"""Energy conservation of the gyroscopic Henon-Heiles system under RK4.

The exact Hamiltonian H = 1/2 (p^2 + q^2 + x^2 + y^2) + x y^2 - x^3/3 is
built by the pipeline; its relative drift is reported for a ladder of
step sizes, which should shrink roughly as h^4 until round-off dominates.

    python3 scripts/henon_heiles_conservation.py --csv hh.csv
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass

from symplectify import RatMatrix, Rational, nonlinear_hamiltonian, observable_drift, parse_eom, simulate

EQUATIONS = ("x'' + g*y' + x = x^2 - y^2", "y'' - g*x' + y = -2*x*y")


@dataclass
class ConservationConfig:
    g: str = "1/10"
    xi0: tuple[float, ...] = (0.0, 0.0, 0.1, 0.1)
    t_end: float = 100.0
    steps: tuple[float, ...] = (0.1, 0.05, 0.02, 0.01, 1e-3)
    tolerance: float = 1e-8
    csv_path: str | None = None


def main(cfg: ConservationConfig) -> int:
    parsed = parse_eom(list(EQUATIONS), {"g": Rational(cfg.g)})
    h_poly, _ = nonlinear_hamiltonian(parsed.eom, parsed.field, RatMatrix.identity(2), parsed.names)
    m = parsed.eom.standard_matrix()
    print(f"H = {h_poly}")
    print(f"{'h':>8} {'drift':>10} {'ratio':>7}")
    prev = None
    drift = None
    for h in cfg.steps:
        traj = simulate(m, parsed.field, cfg.xi0, h=h, t_end=cfg.t_end, variables=h_poly.vars)
        drift = observable_drift(traj, h_poly)
        ratio = f"{prev / drift:7.1f}" if prev and drift else "      -"
        print(f"{h:>8g} {drift:>10.2e} {ratio}")
        prev = drift
        if cfg.csv_path and h == cfg.steps[-1]:
            traj.write_csv(cfg.csv_path, h_poly)
    return 0 if drift is not None and drift <= cfg.tolerance else 1


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--g", default=ConservationConfig.g)
    ap.add_argument("--t-end", type=float, default=ConservationConfig.t_end)
    ap.add_argument("--csv", dest="csv_path")
    a = ap.parse_args()
    raise SystemExit(main(ConservationConfig(g=a.g, t_end=a.t_end, csv_path=a.csv_path)))
