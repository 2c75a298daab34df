"""Exponential identities for the exchange operators.

Dense matrices here live on ``2^(2S)`` basis states indexed by packed bits
(site 1 is the least significant bit, a set bit is spin up).  Transpositions
are built from Pauli products rather than from the bit swap, so that they can
serve as an independent check on the permutation engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .chain import SpinConfig, orbit_of
from .cogwheel import max_abs
from .config import DENSE_HAMILTONIAN_CAP, DENSE_PRODUCT_CAP, check_dense_size
from .hamiltonian import dense_hamiltonian, orbit_block_exponential, synthesize_exact, update_matrix

# Local basis ordered by bit value: index 0 = down, index 1 = up.
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, 1j], [-1j, 0]], dtype=complex)
SIGMA_Z = np.array([[-1, 0], [0, 1]], dtype=complex)


@dataclass(frozen=True)
class TranspositionSet:
    pairs: tuple[tuple[int, int], ...]
    parity: str

    def __post_init__(self):
        pairs = tuple(tuple(sorted(p)) for p in self.pairs)
        seen: set[int] = set()
        for i, j in pairs:
            if i == j:
                raise ValueError(f"degenerate pair ({i}, {j})")
            if i in seen or j in seen:
                raise ValueError("pairs within one sweep must be disjoint")
            seen.update((i, j))
        object.__setattr__(self, "pairs", pairs)


def sweep(n_sites: int, parity: str) -> TranspositionSet:
    """The odd pairs ``(2k-1, 2k)`` or the even pairs ``(2l, 2l+1)`` (wrapping)."""
    if parity == "odd":
        pairs = [(p, p + 1) for p in range(1, n_sites, 2)]
    elif parity == "even":
        pairs = [(p, p % n_sites + 1) for p in range(2, n_sites + 1, 2)]
    else:
        raise ValueError(f"parity must be 'odd' or 'even', got {parity!r}")
    return TranspositionSet(tuple(pairs), parity)


def site_operator(op: np.ndarray, site: int, n_sites: int) -> sp.csr_matrix:
    """``op`` on the 1-based ``site``, identity elsewhere."""
    factors = [sp.identity(2, format="csr", dtype=complex)] * n_sites
    factors = list(factors)
    factors[n_sites - site] = sp.csr_matrix(op)  # kron puts site 1 last (least significant)
    return reduce(lambda a, b: sp.kron(a, b, format="csr"), factors)


def _check_pair(i: int, j: int, n_sites: int) -> None:
    if i == j:
        raise ValueError("transposition needs two different sites")
    if not (1 <= i <= n_sites and 1 <= j <= n_sites):
        raise ValueError(f"sites ({i}, {j}) out of range 1..{n_sites}")


def transposition_matrix(i: int, j: int, n_sites: int, cap: int = DENSE_HAMILTONIAN_CAP) -> np.ndarray:
    """``(sigma_i . sigma_j + 1) / 2`` as a dense matrix."""
    _check_pair(i, j, n_sites)
    check_dense_size(n_sites, cap)
    dim = 1 << n_sites
    P = sp.identity(dim, format="csr", dtype=complex)
    for s in (SIGMA_X, SIGMA_Y, SIGMA_Z):
        P = P + site_operator(s, i, n_sites) @ site_operator(s, j, n_sites)
    return (P / 2).toarray()


def swap_matrix(i: int, j: int, n_sites: int) -> np.ndarray:
    """Same operator built directly as the bit swap of sites ``i`` and ``j``."""
    _check_pair(i, j, n_sites)
    dim = 1 << n_sites
    b = np.arange(dim)
    bi = (b >> (i - 1)) & 1
    bj = (b >> (j - 1)) & 1
    swapped = b ^ ((bi ^ bj) << (i - 1)) ^ ((bi ^ bj) << (j - 1))
    M = np.zeros((dim, dim))
    M[swapped, b] = 1.0
    return M


def transposition_exponential(P: np.ndarray, theta: float) -> np.ndarray:
    """``exp(-i theta P)`` for an involution ``P``: ``cos(theta) - i sin(theta) P``."""
    return np.cos(theta) * np.eye(P.shape[0]) - 1j * np.sin(theta) * P


def verify_transposition_exponential(i: int, j: int, n_sites: int, k: int = 0,
                                     theta: float | None = None) -> float:
    """Residual of ``P - i exp(-i theta P)`` with ``theta = (2k + 1/2) pi`` by default."""
    P = transposition_matrix(i, j, n_sites)
    if theta is None:
        theta = (2 * k + 0.5) * np.pi
    return max_abs(P - 1j * transposition_exponential(P, theta))


def sweep_generator(n_sites: int, parity: str) -> np.ndarray:
    tset = sweep(n_sites, parity)
    return sum(transposition_matrix(i, j, n_sites, cap=max(n_sites, DENSE_PRODUCT_CAP))
               for i, j in tset.pairs)


def sweep_product(n_sites: int, parity: str) -> np.ndarray:
    """``prod (-i P)`` over the sweep, each factor from the involution formula."""
    out = np.eye(1 << n_sites, dtype=complex)
    for i, j in sweep(n_sites, parity).pairs:
        P = transposition_matrix(i, j, n_sites, cap=max(n_sites, DENSE_PRODUCT_CAP))
        out = transposition_exponential(P, np.pi / 2) @ out
    return out


def sweep_exponential(n_sites: int, parity: str) -> np.ndarray:
    """``exp(-i pi/2 sum P)`` by generic scaling and squaring."""
    return scipy.linalg.expm(-0.5j * np.pi * sweep_generator(n_sites, parity))


def phase_prefactor(S: int) -> complex:
    """``i^(2S) (-i)^S (-i)^S``; equals one for every ``S``."""
    return (1j ** (2 * S)) * ((-1j) ** S) * ((-1j) ** S)


ORDERINGS = {
    # (left factor, right factor); the right factor acts first.
    "even-first": ("odd", "even"),
    "odd-first": ("even", "odd"),
}


def verify_product_identity(n_sites: int, ordering: str = "even-first",
                            cap: int = DENSE_PRODUCT_CAP) -> float:
    """Residual of ``i^(2S) exp(-i pi/2 sum P_a) exp(-i pi/2 sum P_b) - U``."""
    if ordering not in ORDERINGS:
        raise ValueError(f"ordering must be one of {sorted(ORDERINGS)}, got {ordering!r}")
    check_dense_size(n_sites, cap)
    first, second = ORDERINGS[ordering]
    S = n_sites // 2
    lhs = (1j ** (2 * S)) * sweep_exponential(n_sites, first) @ sweep_exponential(n_sites, second)
    return max_abs(lhs - update_matrix(n_sites, cap=cap))


def verify_terminating_bch(n_sites: int, T: float = 1.0, mode: str = "dense",
                           samples: int = 100, seed: int = 0) -> float:
    """Residual of ``exp(-i H T) - U`` for the exact Hamiltonian.

    ``mode="dense"`` builds both matrices in full (size-capped).  ``mode="orbit"``
    draws random basis states and checks, on each state's orbit, that every
    Fourier-mode eigenvalue ``lam`` satisfies ``exp(-i lam T) = omega`` for the
    mode's ``U``-eigenvalue ``omega``; there is no size cap.
    """
    S = n_sites // 2
    poly = synthesize_exact(S, T)
    if mode == "dense":
        H = dense_hamiltonian(poly)
        return max_abs(orbit_block_exponential(H, n_sites, T) - update_matrix(n_sites))
    if mode != "orbit":
        raise ValueError(f"mode must be 'dense' or 'orbit', got {mode!r}")
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        bits = int.from_bytes(rng.bytes((n_sites + 7) // 8), "little") & ((1 << n_sites) - 1)
        orbit = orbit_of(SpinConfig(bits, n_sites))
        L = orbit.length
        lam = poly.orbit_eigenvalues(orbit.representative, L)
        omega = np.exp(-2j * np.pi * np.arange(L) / L)
        worst = max(worst, max_abs(np.exp(-1j * lam * T) - omega), max_abs(lam.imag))
    return worst


def commutator(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return A @ B - B @ A


def bch_series_truncated(X: np.ndarray, Y: np.ndarray, order: int = 4) -> np.ndarray:
    """Leading Baker-Campbell-Hausdorff terms for ``log(exp(X) exp(Y))`` up to ``order``."""
    X = np.asarray(X)
    Y = np.asarray(Y)
    if X.shape != Y.shape or X.ndim != 2 or X.shape[0] != X.shape[1]:
        raise ValueError(f"need square matrices of equal size, got {X.shape} and {Y.shape}")
    if order not in (1, 2, 3, 4):
        raise ValueError(f"order must be 1..4, got {order}")
    Z = X + Y
    if order >= 2:
        XY = commutator(X, Y)
        Z = Z + XY / 2
    if order >= 3:
        Z = Z + (commutator(X, XY) + commutator(Y, commutator(Y, X))) / 12
    if order >= 4:
        Z = Z - commutator(Y, commutator(X, XY)) / 24
    return Z


def bch_sweep_residual(n_sites: int = 4, order: int = 4) -> float:
    """How far the truncated series is from ``exp(X) exp(Y)`` for the two sweeps."""
    X = -0.5j * np.pi * sweep_generator(n_sites, "odd")
    Y = -0.5j * np.pi * sweep_generator(n_sites, "even")
    Z = bch_series_truncated(X, Y, order)
    return max_abs(scipy.linalg.expm(Z) - scipy.linalg.expm(X) @ scipy.linalg.expm(Y))
