"""Sparse complex superpositions of chain configurations."""

from __future__ import annotations

from typing import Iterator, Mapping

import numpy as np

from .chain import SpinConfig, as_config
from .config import PRUNE_TOL


class QuantumState:
    """Amplitude map over basis configurations, keyed by packed bits.

    Amplitudes with magnitude below ``prune_tol`` are dropped on construction.
    The object is treated as immutable; operations return new states.
    """

    __slots__ = ("n_sites", "_amps")

    def __init__(self, n_sites: int, amplitudes: Mapping[int, complex] | None = None,
                 prune_tol: float = PRUNE_TOL):
        if n_sites < 4 or n_sites % 2:
            raise ValueError(f"chain needs an even number of sites >= 4, got {n_sites}")
        self.n_sites = n_sites
        limit = 1 << n_sites
        amps = {}
        for bits, a in (amplitudes or {}).items():
            bits = int(bits)
            if not 0 <= bits < limit:
                raise ValueError(f"basis index {bits} out of range for {n_sites} sites")
            a = complex(a)
            if abs(a) >= prune_tol:
                amps[bits] = a
        self._amps = amps

    @classmethod
    def basis(cls, state: SpinConfig | str) -> "QuantumState":
        state = as_config(state)
        return cls(state.n_sites, {state.bits: 1.0})

    @classmethod
    def from_terms(cls, terms: Mapping[str | SpinConfig, complex]) -> "QuantumState":
        amps: dict[int, complex] = {}
        n_sites = None
        for key, a in terms.items():
            cfg = as_config(key)
            if n_sites is None:
                n_sites = cfg.n_sites
            elif cfg.n_sites != n_sites:
                raise ValueError("all terms must have the same number of sites")
            amps[cfg.bits] = amps.get(cfg.bits, 0) + complex(a)
        if n_sites is None:
            raise ValueError("need at least one term")
        return cls(n_sites, amps)

    @classmethod
    def from_vector(cls, n_sites: int, vector) -> "QuantumState":
        vec = np.asarray(vector)
        if vec.shape != (1 << n_sites,):
            raise ValueError(f"vector of shape {vec.shape} does not match {n_sites} sites")
        nz = np.flatnonzero(np.abs(vec) >= PRUNE_TOL)
        return cls(n_sites, {int(b): complex(vec[b]) for b in nz})

    @property
    def S(self) -> int:
        return self.n_sites // 2

    @property
    def amplitudes(self) -> dict[int, complex]:
        return dict(self._amps)

    def __len__(self) -> int:
        return len(self._amps)

    def __iter__(self) -> Iterator[tuple[SpinConfig, complex]]:
        for bits in sorted(self._amps):
            yield SpinConfig(bits, self.n_sites), self._amps[bits]

    def __getitem__(self, key: SpinConfig | str) -> complex:
        cfg = as_config(key)
        return self._amps.get(cfg.bits, 0j)

    def __repr__(self) -> str:
        terms = ", ".join(f"{cfg}: {a:.6g}" for cfg, a in list(self)[:6])
        more = "" if len(self) <= 6 else f", ... ({len(self)} terms)"
        return f"QuantumState({terms}{more})"

    def _check(self, other: "QuantumState") -> None:
        if other.n_sites != self.n_sites:
            raise ValueError(f"states on {self.n_sites} and {other.n_sites} sites")

    def __add__(self, other: "QuantumState") -> "QuantumState":
        self._check(other)
        amps = dict(self._amps)
        for b, a in other._amps.items():
            amps[b] = amps.get(b, 0) + a
        return QuantumState(self.n_sites, amps)

    def __sub__(self, other: "QuantumState") -> "QuantumState":
        return self + other.scaled(-1)

    def scaled(self, factor: complex) -> "QuantumState":
        return QuantumState(self.n_sites, {b: factor * a for b, a in self._amps.items()})

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self._amps.values())))

    def normalized(self) -> "QuantumState":
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero state")
        return self.scaled(1 / nrm)

    def is_zero(self) -> bool:
        return not self._amps

    def inner(self, other: "QuantumState") -> complex:
        """``<self|other>``."""
        self._check(other)
        return sum(a.conjugate() * other._amps.get(b, 0) for b, a in self._amps.items())

    def distance(self, other: "QuantumState") -> float:
        self._check(other)
        keys = self._amps.keys() | other._amps.keys()
        return float(np.sqrt(sum(abs(self._amps.get(k, 0) - other._amps.get(k, 0)) ** 2 for k in keys)))

    def to_vector(self) -> np.ndarray:
        vec = np.zeros(1 << self.n_sites, dtype=complex)
        for b, a in self._amps.items():
            vec[b] = a
        return vec

    def top(self, k: int | None = None) -> list[tuple[SpinConfig, complex]]:
        """Terms by decreasing magnitude (ties broken by text order)."""
        terms = sorted(self, key=lambda t: (-abs(t[1]), t[0].to_text()))
        return terms if k is None else terms[:k]
