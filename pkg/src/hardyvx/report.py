"""Run reports: scenario execution and JSON/CSV emission.

JSON reports are deterministic for identical configurations: keys are
sorted and floats rendered by ``repr``, with the wall-clock fields the
only varying entries (comparison tooling should strip ``timestamp`` and
``wall_clock_seconds``).
"""

from __future__ import annotations

import datetime
import json
import time
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .config import ScenarioConfig
from .criteria import CriterionReport, equivalence_audit
from .grids import make_log_grid
from .hardy import power_family
from .lpnorm import modular

__all__ = ["RunReport", "run_scenario", "emit"]


@dataclass(frozen=True)
class RunReport:
    config: dict
    report: CriterionReport
    truncation: dict
    wall_clock_seconds: float
    timestamp: str
    version: str = __version__

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "report": self.report.to_dict(),
            "truncation": self.truncation,
            "wall_clock_seconds": self.wall_clock_seconds,
            "timestamp": self.timestamp,
            "version": self.version,
        }


def _truncation_summary(cfg: ScenarioConfig, grid) -> dict:
    """Worst relative modular truncation bias over the power test family.

    Members supported down to 0 are the only source of truncation; the
    power family probes the strongest admissible singularities.
    """
    worst = 0.0
    for member in power_family(cfg.exponent, grid):
        mv = modular(member.f, cfg.exponent)
        if mv.finite and mv.value > 0.0:
            worst = max(worst, mv.truncation_bias / mv.value)
    return {"grid_x_min": cfg.x_min,
            "max_relative_modular_bias": worst}


def run_scenario(cfg: ScenarioConfig) -> RunReport:
    t0 = time.perf_counter()
    grid = make_log_grid(cfg.x_min, cfg.n)
    report = equivalence_audit(
        cfg.exponent, grid,
        a_depth=cfg.a_depth,
        delta=cfg.delta,
        eps_depth=cfg.eps_depth,
        necessity_depth=cfg.necessity_depth,
        norm_tol=cfg.norm_tol,
        criteria_names=cfg.criteria,
        family_kinds=cfg.families,
        exponent_id=cfg.label,
    )
    truncation = _truncation_summary(cfg, grid)
    wall = time.perf_counter() - t0
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    return RunReport(cfg.echo(), report, truncation, wall, stamp)


def _json_default(obj):
    raise TypeError(f"not JSON-serializable: {obj!r}")


def report_json(report: RunReport) -> str:
    return json.dumps(report.to_dict(), sort_keys=True, indent=2,
                      allow_nan=True, default=_json_default) + "\n"


def emit(report: RunReport, fmt: str, out_dir: str | Path) -> list[Path]:
    """Write the report; returns the paths written.

    JSON: one file with the full nested report.  CSV: one file per
    criterion series with header ``a,value,lo,hi`` (lo/hi collapse to the
    value when no interval bound is tracked for that series).
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    label = report.report.exponent_id or "scenario"
    written: list[Path] = []
    if fmt == "json":
        path = out / f"{label}.json"
        path.write_text(report_json(report), encoding="utf-8")
        written.append(path)
    elif fmt == "csv":
        for name, verdict in report.report.verdicts.items():
            if not verdict.series:
                continue
            path = out / f"{label}.{name}.csv"
            lines = ["a,value,lo,hi"]
            for param, value in verdict.series:
                lines.append(f"{param!r},{value!r},{value!r},{value!r}")
            path.write_text("\n".join(lines) + "\n", encoding="utf-8")
            written.append(path)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return written
