"""Run configuration shared by the command-line tools."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields

FORMATS = ("json", "csv", "text")
ENV_PREFIX = "UNICRIT_"


@dataclass(frozen=True)
class RunConfig:
    precision: int = 128
    nmax: int = 2000
    degree_cap: int = 4096
    tol: float = 1e-10
    format: str = "json"
    jobs: int = 1
    seed: int = 0

    def __post_init__(self):
        for name in ("precision", "nmax", "degree_cap", "jobs"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.format not in FORMATS:
            raise ValueError(f"unknown format {self.format!r}")

    @classmethod
    def from_env(cls, environ=None, **overrides) -> "RunConfig":
        """Defaults, then UNICRIT_* variables, then explicit overrides."""
        environ = os.environ if environ is None else environ
        values = {}
        for f in fields(cls):
            raw = environ.get(ENV_PREFIX + f.name.upper())
            if raw is not None:
                values[f.name] = _convert(f.name, raw)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def public(self) -> dict:
        """Settings that affect results (jobs and format do not)."""
        return {"precision": self.precision, "nmax": self.nmax, "degree_cap": self.degree_cap,
                "tol": self.tol, "seed": self.seed}


def _convert(name: str, raw: str):
    if name == "tol":
        return float(raw)
    if name == "format":
        return raw.strip().lower()
    return int(raw)
