"""Shared tolerances, size caps and the CLI run configuration."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

OPERATOR_TOL = 1e-10
ROUNDTRIP_TOL = 1e-12
PRUNE_TOL = 1e-14

# Caps are in number of sites (2S).
ORBIT_ENUM_CAP = 24
DENSE_HAMILTONIAN_CAP = 14
DENSE_PRODUCT_CAP = 12
DENSE_EVOLVE_CAP = 10
ENTROPY_CAP = 20

DENSE_CAP_ENV = "PERMDYN_DENSE_CAP"


def dense_cap(default: int) -> int:
    """Return the dense-size cap, honouring the ``PERMDYN_DENSE_CAP`` override."""
    raw = os.environ.get(DENSE_CAP_ENV)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"{DENSE_CAP_ENV} must be an integer, got {raw!r}") from exc
    if value < 2:
        raise ValueError(f"{DENSE_CAP_ENV} must be >= 2, got {value}")
    return value


def check_dense_size(n_sites: int, default: int) -> None:
    cap = dense_cap(default)
    if n_sites > cap:
        raise ValueError(
            f"dense operation on {n_sites} sites exceeds cap of {cap} sites "
            f"(set {DENSE_CAP_ENV} to override)"
        )


@dataclass
class RunConfig:
    spins: int
    T: float = 1.0
    operator_tol: float = OPERATOR_TOL
    roundtrip_tol: float = ROUNDTRIP_TOL
    dense_cap: int = field(default_factory=lambda: dense_cap(DENSE_HAMILTONIAN_CAP))
    seed: int = 0
    output_format: str = "json"
    output: str | None = None

    def __post_init__(self):
        if self.spins < 4 or self.spins % 2:
            raise ValueError(f"--spins must be even and >= 4, got {self.spins}")
        if not self.T > 0:
            raise ValueError(f"--T must be positive, got {self.T}")
        if not (self.operator_tol > 0 and self.roundtrip_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.output_format not in ("json", "csv", "text"):
            raise ValueError(f"unknown output format {self.output_format!r}")

    @property
    def S(self) -> int:
        return self.spins // 2
