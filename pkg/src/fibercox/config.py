"""Budgets and run configuration."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import PreconditionError


@dataclass(frozen=True)
class PipelineConfig:
    cycle: int | None = 5
    complex_path: str | None = None
    iterations: int = 1
    cell_budget: int = 10**7
    orbit_budget: int = 1 << 20
    samples: int = 200
    exhaustive: bool = False
    neighborhood_samples: int = 50
    vcd_simplex_budget: int = 20_000
    implicit_threshold: int = 5000
    restarts: int = 32
    seed: int = 0
    coeffs: str = "Z"
    out_dir: str | None = None

    def __post_init__(self):
        if self.complex_path is None and (self.cycle is None or self.cycle < 5):
            raise PreconditionError("cycle length must be at least 5")
        if self.iterations < 1:
            raise PreconditionError("need at least one iteration")
        for name in ("cell_budget", "orbit_budget", "samples", "neighborhood_samples",
                     "vcd_simplex_budget", "implicit_threshold", "restarts"):
            if getattr(self, name) <= 0:
                raise PreconditionError(f"{name} must be positive")

    def to_json(self) -> dict:
        return asdict(self)
