"""Run every built-in demo through the full pipeline and summarise the outcome.

    python3 scripts/run_demos.py                # one summary line per demo
    python3 scripts/run_demos.py --full         # full reports
    python3 scripts/run_demos.py --json-dir out # machine-readable reports
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from symplectify import DEMO_EXIT_CODES, DEMOS, demo_spec, format_report, run, write_report_json


@dataclass
class DemoConfig:
    names: tuple[str, ...] = tuple(DEMOS)
    simulate: bool = True
    full: bool = False
    json_dir: Path | None = None


def summary(name: str, report) -> str:
    parts = [f"{name:<13}", f"exit={report.exit_code}",
             f"expected={DEMO_EXIT_CODES[name]}",
             f"hamiltonian={'yes' if report.verdict else 'no'}"]
    if report.canonical is not None:
        parts.append(f"H_can={report.canonical.h_can}")
    if report.potential is not None:
        parts.append(f"V={report.potential}")
    if report.drift is not None:
        parts.append(f"drift={report.drift:.2e}")
    return "  ".join(parts)


def main(cfg: DemoConfig) -> int:
    mismatches = 0
    for name in cfg.names:
        report = run(demo_spec(name, simulate_=cfg.simulate and DEMOS[name].simulation is not None))
        mismatches += report.exit_code != DEMO_EXIT_CODES[name]
        print(format_report(report) + "\n" if cfg.full else summary(name, report))
        if cfg.json_dir is not None:
            cfg.json_dir.mkdir(parents=True, exist_ok=True)
            write_report_json(report, cfg.json_dir / f"{name}.json")
    return int(mismatches > 0)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("names", nargs="*", default=list(DEMOS))
    ap.add_argument("--no-simulate", action="store_true")
    ap.add_argument("--full", action="store_true")
    ap.add_argument("--json-dir", type=Path)
    a = ap.parse_args()
    raise SystemExit(main(DemoConfig(tuple(a.names), not a.no_simulate, a.full, a.json_dir)))
