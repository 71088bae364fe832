"""Run configuration and machine-readable reports (JSON canonical, CSV view)."""
from __future__ import annotations

import csv
import io
import json
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone

from . import __version__, catalog
from .checks import CHECKS, CheckResult, Grid, UnknownCheckError, run_all
from .manifold import FDConfig

FORMATS = ("json", "csv")
CSV_COLUMNS = ("check_id", "anchor", "point_index", "u", "residual", "tolerance", "pass")


class ConfigError(ValueError):
    """Invalid run configuration (maps to CLI exit code 2)."""


@dataclass
class RunConfig:
    manifold: str
    params: dict = field(default_factory=dict)
    grid: tuple[int, ...] | None = None
    inset: float = 0.1
    checks: list[str] | None = None  # None selects every applicable check
    h1: float = FDConfig.h1
    h2: float = FDConfig.h2
    richardson: bool = False
    tol_scale: float = 1.0
    output: str | None = None
    format: str = "json"
    verbosity: int = 0

    def validate(self) -> None:
        if self.manifold not in catalog.names():
            raise ConfigError(f"unknown manifold {self.manifold!r}; choose from {', '.join(catalog.names())}")
        if self.checks is not None:
            unknown = [c for c in self.checks if c not in CHECKS]
            if unknown:
                raise ConfigError(f"unknown check(s) {', '.join(unknown)}; choose from {', '.join(CHECKS)}")
        if self.grid is not None and any(c < 2 for c in self.grid):
            raise ConfigError("grid counts must be >= 2")
        if not (self.h1 > 0 and self.h2 > 0):
            raise ConfigError("step sizes must be positive")
        if self.inset < 2 * self.h2:
            raise ConfigError(f"inset {self.inset} is below 2*h2 = {2 * self.h2}")
        if not self.tol_scale > 0:
            raise ConfigError("tol-scale must be positive")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")

    def fd(self) -> FDConfig:
        return FDConfig(h1=self.h1, h2=self.h2, richardson=self.richardson)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["grid"] = None if self.grid is None else list(self.grid)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        d = dict(d)
        if d.get("grid") is not None:
            d["grid"] = tuple(d["grid"])
        return cls(**d)


def _result_to_dict(r: CheckResult) -> dict:
    return {
        "check_id": r.check_id,
        "anchor": r.anchor,
        "points": r.points,
        "residuals": r.residuals,
        "max_residual": None if r.error else r.max_residual,
        "tolerance": r.tolerance,
        "pass": r.passed,
        "components": r.components,
        "error": r.error,
    }


def _result_from_dict(d: dict) -> CheckResult:
    return CheckResult(
        check_id=d["check_id"],
        anchor=d["anchor"],
        points=[list(p) for p in d["points"]],
        residuals=list(d["residuals"]),
        tolerance=d["tolerance"],
        components=d.get("components", {}),
        error=d.get("error"),
    )


@dataclass
class Report:
    version: str
    timestamp: str
    config: RunConfig
    results: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def to_dict(self) -> dict:
        return {
            "version": self.version,
            "timestamp": self.timestamp,
            "config": self.config.to_dict(),
            "results": [_result_to_dict(r) for r in self.results],
            "pass": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False)

    @classmethod
    def from_dict(cls, d: dict) -> "Report":
        return cls(d["version"], d["timestamp"], RunConfig.from_dict(d["config"]),
                   [_result_from_dict(r) for r in d["results"]])

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in self.results:
            for i, (u, res) in enumerate(zip(r.points, r.residuals)):
                w.writerow([r.check_id, r.anchor, i, ";".join(repr(c) for c in u), repr(res),
                            repr(r.tolerance), res <= r.tolerance])
        return buf.getvalue()


def build_report(cfg: RunConfig) -> Report:
    cfg.validate()
    try:
        entry = catalog.get(cfg.manifold, **cfg.params)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {cfg.manifold}: {exc}") from None
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    counts = cfg.grid if cfg.grid is not None else Grid.default(entry.chart.m).counts
    if len(counts) != entry.chart.m:
        raise ConfigError(f"grid has {len(counts)} axes but {cfg.manifold} has {entry.chart.m} parameters")
    try:
        grid = Grid(tuple(counts), cfg.inset)
        grid.points(entry.chart)
        results = run_all(entry, grid, cfg.fd(), cfg.tol_scale, only=cfg.checks)
    except (ValueError, UnknownCheckError) as exc:
        raise ConfigError(str(exc)) from None
    stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return Report(__version__, stamp, cfg, results)


def write_report(report: Report, path: str, fmt: str = "json") -> None:
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}")
    text = report.to_json() if fmt == "json" else report.to_csv()
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def read_report(path: str) -> Report:
    with open(path, encoding="utf-8") as fh:
        return Report.from_json(fh.read())
