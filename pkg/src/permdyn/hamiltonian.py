"""The chain Hamiltonian as a polynomial in the update operator.

Every operator here is ``H = sum_n c_n U**n`` for ``n = 0..S-1``.  Because
``U**S = 1`` these polynomials form a commutative algebra, and on an orbit of
length ``L`` (``L`` divides ``S``) ``H`` is circulant: its eigenvectors are the
orbit's Fourier modes, where ``U`` has eigenvalue ``exp(-2 pi i r / L)``.

:func:`synthesize_exact` returns the generator with ``exp(-i H T) = U`` and
spectrum in ``[0, 2 pi / T)``.  Its coefficients are
``c_0 = pi (S - 1) / (S T)`` and ``c_n = pi/(S T) (-1 - i cot(pi n / S))``.
Expanding the closed-form cogwheel Hamiltonian down its first column instead
(``+i cot``) gives the same operator with ``U`` and ``U^dagger`` exchanged,
i.e. the generator of ``U^dagger``; :meth:`OperatorPolynomial.reversed`
converts between the two.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import (
    OrbitRecord,
    SpinConfig,
    enumerate_orbits,
    magnetization,
    orbit_of,
    update_array,
    update_bits,
)
from .cogwheel import circulant_exponential, circulant_matrix, max_abs
from .config import DENSE_HAMILTONIAN_CAP, ROUNDTRIP_TOL, check_dense_size
from .state import QuantumState


def _cot_pi_fraction(n: int, S: int) -> float:
    """``cot(pi n / S)``, exactly zero at ``n = S/2``."""
    if 2 * n == S:
        return 0.0
    x = np.pi * n / S
    return float(np.cos(x) / np.sin(x))


@dataclass(frozen=True)
class OperatorPolynomial:
    S: int
    T: float
    coefficients: tuple[complex, ...]
    label: str = ""

    def __post_init__(self):
        if self.S < 2:
            raise ValueError(f"S must be >= 2, got {self.S}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        coeffs = tuple(complex(c) for c in self.coefficients)
        if len(coeffs) != self.S:
            raise ValueError(f"need {self.S} coefficients, got {len(coeffs)}")
        if not all(np.isfinite(c.real) and np.isfinite(c.imag) for c in coeffs):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def n_sites(self) -> int:
        return 2 * self.S

    def array(self) -> np.ndarray:
        return np.array(self.coefficients, dtype=complex)

    def hermiticity_residual(self) -> float:
        c = self.array()
        mirrored = np.conj(np.roll(c[::-1], 1))  # mirrored[n] = conj(c[S - n])
        return max_abs(c - mirrored)

    def is_hermitian(self, tol: float = ROUNDTRIP_TOL) -> bool:
        return self.hermiticity_residual() <= tol

    def reversed(self) -> "OperatorPolynomial":
        """Same coefficients attached to powers of ``U^dagger`` (``c_n -> c_{S-n}``)."""
        c = self.array()
        return OperatorPolynomial(self.S, self.T, tuple(np.roll(c[::-1], 1)), self.label)

    def adjoint(self) -> "OperatorPolynomial":
        return OperatorPolynomial(self.S, self.T, tuple(np.conj(self.reversed().array())), self.label)

    def __matmul__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        """Operator product; powers of ``U`` wrap modulo ``S``."""
        if other.S != self.S:
            raise ValueError("polynomials for different chains")
        a, b = self.array(), other.array()
        out = np.zeros(self.S, dtype=complex)
        for n, cn in enumerate(a):
            out += cn * np.roll(b, n)
        return OperatorPolynomial(self.S, self.T, tuple(out), self.label)

    def folded(self, L: int) -> np.ndarray:
        """Coefficients collected onto ``U**k``, ``k < L``, for an orbit where ``U**L = 1``."""
        if self.S % L:
            raise ValueError(f"orbit length {L} does not divide S = {self.S}")
        return self.array().reshape(self.S // L, L).sum(axis=0)

    def orbit_eigenvalues(self, representative: SpinConfig, L: int) -> np.ndarray:
        return np.fft.fft(self.folded(L))

    def to_json(self) -> dict:
        return {
            "S": self.S,
            "T": self.T,
            "coefficients": [[c.real, c.imag] for c in self.coefficients],
        }

    @classmethod
    def from_json(cls, data: dict) -> "OperatorPolynomial":
        return cls(int(data["S"]), float(data["T"]),
                   tuple(complex(re, im) for re, im in data["coefficients"]))


def synthesize_exact(S: int, T: float = 1.0) -> OperatorPolynomial:
    """Generator of the update on the whole state space: ``exp(-i H T) = U``."""
    if S < 2:
        raise ValueError(f"S must be >= 2, got {S}")
    scale = np.pi / (S * T)
    coeffs = [scale * (S - 1)]
    coeffs += [scale * complex(-1.0, -_cot_pi_fraction(n, S)) for n in range(1, S)]
    return OperatorPolynomial(S, T, tuple(coeffs), "exact")


def synthesize_reduced(S: int, T: float = 1.0) -> OperatorPolynomial:
    """Exact form with the projector onto ``U``-invariant states dropped.

    Agrees with :func:`synthesize_exact` away from eigenvalue-one modes of ``U``;
    on those it is larger by ``pi / T``.
    """
    if S < 2:
        raise ValueError(f"S must be >= 2, got {S}")
    coeffs = [np.pi / T]
    coeffs += [complex(0.0, -np.pi / (S * T) * _cot_pi_fraction(n, S)) for n in range(1, S)]
    return OperatorPolynomial(S, T, tuple(coeffs), "reduced")


def _check_chain(n_sites: int, psi: QuantumState) -> None:
    if psi.n_sites != n_sites:
        raise ValueError(f"operator acts on {n_sites} sites, state has {psi.n_sites}")


def apply_polynomial(poly: OperatorPolynomial, psi: QuantumState) -> QuantumState:
    """``sum_n c_n U**n psi`` by permuting the support; no dense matrices."""
    _check_chain(poly.n_sites, psi)
    out: dict[int, complex] = {}
    for n, c in enumerate(poly.coefficients):
        if c == 0:
            continue
        for bits, a in psi.amplitudes.items():
            target = update_bits(bits, psi.n_sites, n)
            out[target] = out.get(target, 0) + c * a
    return QuantumState(psi.n_sites, out)


def apply_hamiltonian(op, psi: QuantumState) -> QuantumState:
    if isinstance(op, MagnetizedHamiltonian):
        return op.apply(psi)
    return apply_polynomial(op, psi)


def orbit_spectrum(poly, orbit: OrbitRecord) -> np.ndarray:
    """Eigenvalues on the orbit's Fourier modes ``r = 0..L-1``.

    Mode ``r`` is ``sum_k exp(2 pi i r k / L) U**k |rep>``; ``U`` acts on it as
    ``exp(-2 pi i r / L)``.
    """
    if orbit.representative.n_sites != poly.n_sites:
        raise ValueError("orbit and operator belong to different chains")
    return poly.orbit_eigenvalues(orbit.representative, orbit.length)


def distinct_levels(poly, tol: float = 1e-9) -> np.ndarray:
    """Distinct eigenvalues over the whole space, gathered orbit by orbit."""
    levels = np.concatenate([orbit_spectrum(poly, o) for o in enumerate_orbits(poly.S)])
    levels = np.sort_complex(np.round(levels.real / tol) * tol + 1j * np.round(levels.imag / tol) * tol)
    keep = [levels[0]]
    for v in levels[1:]:
        if abs(v - keep[-1]) > tol:
            keep.append(v)
    return np.array(keep)


def update_matrix(n_sites: int, cap: int = DENSE_HAMILTONIAN_CAP, steps: int = 1) -> np.ndarray:
    """Dense 0/1 matrix with ``M[U b, b] = 1``."""
    check_dense_size(n_sites, cap)
    dim = 1 << n_sites
    cols = np.arange(dim, dtype=np.uint64)
    rows = update_array(cols, n_sites, steps).astype(np.intp)
    M = np.zeros((dim, dim))
    M[rows, cols.astype(np.intp)] = 1.0
    return M


def dense_hamiltonian(op, cap: int = DENSE_HAMILTONIAN_CAP) -> np.ndarray:
    """``sum_n c_n U_perm**n`` as a dense ``2^(2S)``-dimensional matrix."""
    poly = op.poly if isinstance(op, MagnetizedHamiltonian) else op
    n_sites = poly.n_sites
    check_dense_size(n_sites, cap)
    dim = 1 << n_sites
    cols = np.arange(dim, dtype=np.uint64)
    icols = cols.astype(np.intp)
    H = np.zeros((dim, dim), dtype=complex)
    for n, c in enumerate(poly.coefficients):
        if c != 0:
            rows = update_array(cols, n_sites, n).astype(np.intp)
            H[rows, icols] += c
    if isinstance(op, MagnetizedHamiltonian):
        H[icols, icols] += op.mu * magnetization_diagonal(n_sites)
    return H


def magnetization_diagonal(n_sites: int) -> np.ndarray:
    """Eigenvalue of the magnetization operator on each basis state."""
    dim = 1 << n_sites
    bits = np.arange(dim, dtype=np.uint64)
    ups = np.zeros(dim, dtype=np.int64)
    for p in range(n_sites):
        ups += ((bits >> np.uint64(p)) & np.uint64(1)).astype(np.int64)
    return (2 * ups - n_sites) / n_sites


def orbit_block_exponential(H: np.ndarray, n_sites: int, t: float,
                            tol: float = ROUNDTRIP_TOL) -> np.ndarray:
    """``exp(-i H t)`` for a dense polynomial-in-``U`` matrix, one orbit block at a time.

    Each block is checked to be circulant in the orbit basis and exponentiated
    through the cogwheel diagonalizer.  Raises if ``H`` couples different
    orbits.
    """
    dim = 1 << n_sites
    if H.shape != (dim, dim):
        raise ValueError(f"matrix of shape {H.shape} does not match {n_sites} sites")
    out = np.zeros_like(H, dtype=complex)
    block_weight = 0.0
    for orbit in enumerate_orbits(n_sites // 2):
        idx = np.array([s.bits for s in orbit_of(orbit.representative).states], dtype=np.intp)
        block = H[np.ix_(idx, idx)]
        col = block[:, 0]
        if max_abs(block - circulant_matrix(col)) > tol * max(1.0, max_abs(block)):
            raise ValueError(f"block of orbit {orbit.representative} is not circulant")
        block_weight += float(np.sum(np.abs(block) ** 2))
        out[np.ix_(idx, idx)] = circulant_exponential(col, t)
    total = float(np.sum(np.abs(H) ** 2))
    if total - block_weight > tol * max(1.0, total):
        raise ValueError("matrix couples different orbits")
    return out


@dataclass(frozen=True)
class MagnetizedHamiltonian:
    """``H + mu * M``; the magnetization term is diagonal and constant on orbits."""

    poly: OperatorPolynomial
    mu: float

    @property
    def S(self) -> int:
        return self.poly.S

    @property
    def T(self) -> float:
        return self.poly.T

    @property
    def n_sites(self) -> int:
        return self.poly.n_sites

    def apply(self, psi: QuantumState) -> QuantumState:
        out = apply_polynomial(self.poly, psi)
        if self.mu == 0:
            return out
        diag = QuantumState(psi.n_sites, {
            b: self.mu * float(magnetization(SpinConfig(b, psi.n_sites))) * a
            for b, a in psi.amplitudes.items()
        })
        return out + diag

    def orbit_eigenvalues(self, representative: SpinConfig, L: int) -> np.ndarray:
        return self.poly.orbit_eigenvalues(representative, L) + self.mu * float(magnetization(representative))


def add_magnetization_term(poly: OperatorPolynomial, mu: float) -> MagnetizedHamiltonian:
    return MagnetizedHamiltonian(poly, float(mu))
