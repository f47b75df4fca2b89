"""Run configuration: domain, grid, suites, sweep ranges, output directory.

Loaded from a JSON file; an empty or missing body means all defaults.
Invalid values raise ConfigError, which the CLI maps to exit code 2.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field as dfield, asdict

from .geometry import ConeDomain
from .grids import PolarGrid


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    n: int = 2
    omega: float = math.pi / 4
    variant: str = "double"
    nr: int = 600
    nt: int = 96
    r_max: float = 40.0
    r_min: float | None = None
    q: float | None = None
    suite: str = "hardy"
    eps_list: list = dfield(default_factory=lambda: [1e-2, 1e-3, 1e-4, 1e-5, 1e-6])
    k_list: list = dfield(default_factory=lambda: [2.0, 4.0, 8.0, 16.0])
    alpha_decades: int = 4
    alpha_points: int = 9
    t_lo: float = 1e-3
    t_hi: float = 1e3
    t_points: int = 7
    p_list: list = dfield(default_factory=lambda: [1.0, 1.5, 3.0, float("inf")])
    out_dir: str = "out"
    tolerances: dict = dfield(default_factory=dict)

    def __post_init__(self):
        if self.n not in (2, 3):
            raise ConfigError("n must be 2 or 3")
        if not 0.0 < self.omega < math.pi / 2:
            raise ConfigError("omega must lie in (0, pi/2)")
        if self.variant not in ("double", "quadrant"):
            raise ConfigError(f"unknown variant {self.variant!r}")
        if self.nr < 3 or self.nt < 3:
            raise ConfigError("grid must have at least 3 nodes per direction")
        for name in ("eps_list", "k_list", "p_list"):
            if not getattr(self, name):
                raise ConfigError(f"{name} must be nonempty")
        if self.t_lo <= 0 or self.t_hi <= self.t_lo or self.t_points < 2:
            raise ConfigError("invalid t sweep")
        if any(v <= 0 for v in self.tolerances.values()):
            raise ConfigError("tolerances must be positive")

    def tolerance(self, key: str, default: float) -> float:
        return float(self.tolerances.get(key, default))

    def domain(self) -> ConeDomain:
        return ConeDomain(self.n, self.omega, self.variant)

    def grid(self) -> PolarGrid:
        return PolarGrid.cone(self.domain(), nr=self.nr, nt=self.nt,
                              r_max=self.r_max, r_min=self.r_min, q=self.q)

    def as_dict(self) -> dict:
        return asdict(self)


def load_config(path: str | None) -> RunConfig:
    """Parse a JSON config; empty content or a missing path yield defaults."""
    if path is None:
        return RunConfig()
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    with open(path) as fh:
        text = fh.read().strip()
    if not text:
        return RunConfig()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"config is not valid JSON: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    known = RunConfig().as_dict().keys()
    unknown = set(data) - set(known)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "p_list" in data:
        data["p_list"] = [float("inf") if p in ("inf", "Infinity") else float(p)
                          for p in data["p_list"]]
    try:
        return RunConfig(**data)
    except TypeError as e:
        raise ConfigError(str(e)) from e
