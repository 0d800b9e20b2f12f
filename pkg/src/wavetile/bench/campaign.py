"""Campaign configuration and runner.

Config files are flat ``key = value`` text ('#' starts a comment):

    seed = 7
    grid_size = 1024
    trials = 40            # optional per-target ceiling; omit for defaults
    targets = vv-paraproduct, stopping-invariants
    eps_values = 0.01, 0.05, 0.1
    cap.vv-paraproduct = 1.0
    out = reports

Identical config + seed reproduce byte-identical reports: all randomness is
Philox counter-based, trials execute in a fixed order (parallel workers only
change wall time, never ordering), and floats are serialized with repr.
The thread count comes exclusively from the WAVETILE_THREADS environment
variable.
"""

from __future__ import annotations

import os
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .targets import REGISTRY, RunContext, TargetResult

__all__ = ["ExperimentConfig", "CampaignReport", "run_campaign", "parse_config"]


@dataclass
class ExperimentConfig:
    seed: int = 7
    grid_size: int = 1024
    trials: int | None = None
    targets: tuple[str, ...] | None = None  # None = every registered target
    eps_values: tuple[float, ...] = (0.01, 0.05, 0.1)
    caps: dict = field(default_factory=dict)
    out: str = "reports"

    def __post_init__(self):
        if self.targets is None:
            self.targets = tuple(REGISTRY)
        else:
            self.targets = tuple(self.targets)
        unknown = [t for t in self.targets if t not in REGISTRY]
        if unknown:
            raise ValueError(f"unknown targets: {unknown}")
        n = self.grid_size
        if n < 8 or n & (n - 1):
            raise ValueError("grid_size must be a power of two >= 8")

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "grid_size": self.grid_size,
            "trials": self.trials,
            "targets": list(self.targets),
            "eps_values": list(self.eps_values),
            "caps": {k: self.caps[k] for k in sorted(self.caps)},
            "out": self.out,
        }


def parse_config(text: str) -> ExperimentConfig:
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"malformed config line: {raw!r}")
        key, val = line.split("=", 1)
        fields[key.strip()] = val.strip()

    kwargs: dict = {}
    caps: dict = {}
    for key, val in fields.items():
        if key == "seed":
            kwargs["seed"] = int(val)
        elif key == "grid_size":
            kwargs["grid_size"] = int(val)
        elif key == "trials":
            kwargs["trials"] = int(val)
        elif key == "targets":
            kwargs["targets"] = tuple(t.strip() for t in val.split(",") if t.strip())
        elif key == "eps_values":
            kwargs["eps_values"] = tuple(float(t) for t in val.split(","))
        elif key == "out":
            kwargs["out"] = val
        elif key.startswith("cap."):
            caps[key[4:]] = float(val)
        else:
            raise ValueError(f"unknown config key {key!r}")
    cfg = ExperimentConfig(**kwargs)
    cfg.caps.update(caps)
    return cfg


@dataclass
class CampaignReport:
    config: dict
    results: list[TargetResult]

    @property
    def passed(self) -> bool:
        return all(r.passed and r.error is None for r in self.results)

    def aggregates(self) -> dict:
        return {
            r.name: {
                "passed": r.passed,
                "error": r.error,
                "rows": len(r.rows),
                "seconds": round(r.seconds, 3),
                **r.aggregates,
            }
            for r in self.results
        }


def _thread_count() -> int:
    raw = os.environ.get("WAVETILE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_campaign(cfg: ExperimentConfig) -> CampaignReport:
    """Execute every configured target; errors abort the target only."""
    ctx = RunContext(
        seed=cfg.seed,
        trials=cfg.trials,
        grid_size=cfg.grid_size,
        caps=cfg.caps,
        eps_values=cfg.eps_values,
    )

    def run_one(name: str) -> TargetResult:
        target = REGISTRY[name]
        t0 = time.time()
        try:
            result = target.runner(ctx)
        except Exception:
            result = TargetResult(
                name, target.statement, [], {}, False,
                error=traceback.format_exc(limit=3),
            )
        result.seconds = time.time() - t0
        return result

    workers = _thread_count()
    if workers == 1:
        results = [run_one(name) for name in cfg.targets]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_one, cfg.targets))
    return CampaignReport(cfg.to_dict(), results)
