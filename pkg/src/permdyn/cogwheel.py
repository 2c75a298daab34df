"""Complete permutations of N states ("cogwheels") and their Hamiltonians.

Everything here is closed form.  The diagonalizer ``D`` has entries
``exp(i a_nm) / sqrt(N)`` with ``a_nm = 2 pi (n - 1)(m - 1) / N``; its rows
are the eigenvectors of the standard-form cyclic shift, and since ``D`` is
symmetric so are its columns.  Exponentials of circulant matrices are taken
through ``D`` instead of a generic eigensolver.

Sign convention worth knowing: the Hamiltonian with diagonal
``pi (N - 1) / (N T)`` and off-diagonal ``pi/(N T) (-1 + i cot(pi (n - m)/N))``
equals ``D^dagger H_diag D``, and ``exp(-i H_N T)`` is the *inverse* of the
standard-form shift.  The generator of the shift itself is its transpose,
``D H_diag D^dagger`` (see :func:`shift_generator`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class CogwheelSystem:
    N: int
    T: float = 1.0
    phases: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"N must be >= 1, got {self.N}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if not self.phases:
            object.__setattr__(self, "phases", (0.0,) * self.N)
        elif len(self.phases) != self.N:
            raise ValueError(f"need {self.N} phases, got {len(self.phases)}")
        else:
            object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))


def standard_permutation_matrix(sys: CogwheelSystem) -> np.ndarray:
    """Cyclic shift ``alpha_k -> exp(i phi_k) alpha_{k+1}``, ``alpha_N -> exp(i phi_N) alpha_1``."""
    N = sys.N
    U = np.zeros((N, N), dtype=complex)
    for k in range(N):
        U[(k + 1) % N, k] = np.exp(1j * sys.phases[k])
    return U


def cogwheel_spectrum(sys: CogwheelSystem) -> np.ndarray:
    """Eigenvalues ``(2 pi (n - 1) - sum(phi)) / (N T)`` for ``n = 1..N``."""
    n = np.arange(1, sys.N + 1)
    return (2 * np.pi * (n - 1) - sum(sys.phases)) / (sys.N * sys.T)


def eigenvector_phase(N: int, n: int, m: int) -> float:
    """Phase ``a_nm`` of component ``m`` of eigenvector ``n``, normalized to [0, 2 pi)."""
    if not (1 <= n <= N and 1 <= m <= N):
        raise ValueError(f"indices ({n}, {m}) out of range 1..{N}")
    # reduce the integer first so large N keeps full precision
    return 2 * np.pi * ((n * m - n - m + 1) % N) / N


def diagonalizer(N: int) -> np.ndarray:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    idx = np.arange(N)
    exponent = np.outer(idx, idx) % N
    return np.exp(2j * np.pi * exponent / N) / np.sqrt(N)


def _cot(x):
    return np.cos(x) / np.sin(x)


def cogwheel_hamiltonian(N: int, T: float = 1.0) -> np.ndarray:
    """Closed-form Hamiltonian matrix (zero phases)."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    scale = np.pi / (N * T)
    H = np.empty((N, N), dtype=complex)
    for n in range(N):
        for m in range(N):
            if n == m:
                H[n, m] = scale * (N - 1)
            else:
                H[n, m] = scale * complex(-1.0, _cot(np.pi * (n - m) / N))
    return H


def hamiltonian_from_diagonalizer(N: int, T: float = 1.0) -> np.ndarray:
    """``D^dagger H_diag D`` built numerically; must agree with :func:`cogwheel_hamiltonian`."""
    D = diagonalizer(N)
    E = cogwheel_spectrum(CogwheelSystem(N, T))
    return D.conj().T @ (E[:, None] * D)


def shift_generator(N: int, T: float = 1.0) -> np.ndarray:
    """Hermitian ``G`` with ``exp(-i G T)`` equal to the standard-form shift."""
    D = diagonalizer(N)
    E = cogwheel_spectrum(CogwheelSystem(N, T))
    return D @ (E[:, None] * D.conj().T)


def cogwheel_exponential(N: int, T: float, t: float) -> np.ndarray:
    """``exp(-i H_N t)`` for the closed-form Hamiltonian, through ``D``."""
    D = diagonalizer(N)
    E = cogwheel_spectrum(CogwheelSystem(N, T))
    return D.conj().T @ (np.exp(-1j * E * t)[:, None] * D)


def circulant_eigenvalues(first_column) -> np.ndarray:
    """Eigenvalue of ``C = sum_k h_k U^k`` on each eigenvector (row ``n`` of ``D``).

    ``U`` is the zero-phase standard shift; row ``n`` of ``D`` has
    ``U``-eigenvalue ``exp(-2 pi i n / N)`` (0-based ``n``).
    """
    h = np.asarray(first_column, dtype=complex)
    N = len(h)
    D = diagonalizer(N)
    # sum_k h_k exp(-2 pi i n k / N) = sqrt(N) * (conj(D) @ h)_n
    return np.sqrt(N) * (D.conj() @ h)


def circulant_exponential(first_column, t: float) -> np.ndarray:
    """``exp(-i C t)`` for the circulant ``C`` whose first column is given."""
    h = np.asarray(first_column, dtype=complex)
    D = diagonalizer(len(h))
    mu = circulant_eigenvalues(h)
    return D @ (np.exp(-1j * mu * t)[:, None] * D.conj().T)


def circulant_matrix(first_column) -> np.ndarray:
    h = np.asarray(first_column, dtype=complex)
    N = len(h)
    idx = np.arange(N)
    return h[(idx[:, None] - idx[None, :]) % N]


def max_abs(a) -> float:
    a = np.asarray(a)
    return float(np.max(np.abs(a))) if a.size else 0.0


def unitarity_residual(M: np.ndarray) -> float:
    return max_abs(M @ M.conj().T - np.eye(M.shape[0]))


def roundtrip_residual(N: int, T: float = 1.0) -> dict[str, float]:
    """Closed-form checks for one cogwheel; every entry should be at rounding level."""
    sys = CogwheelSystem(N, T)
    D = diagonalizer(N)
    H = cogwheel_hamiltonian(N, T)
    U = standard_permutation_matrix(sys)
    return {
        "diagonalizer_unitarity": unitarity_residual(D),
        "hamiltonian_vs_diagonalizer": max_abs(H - hamiltonian_from_diagonalizer(N, T)),
        "spectrum": max_abs(D @ H @ D.conj().T - np.diag(cogwheel_spectrum(sys))),
        "hermiticity": max_abs(H - H.conj().T),
        # the closed form generates the inverse shift
        "exponential_inverse_shift": max_abs(cogwheel_exponential(N, T, T) - U.conj().T),
        "shift_generator": max_abs(circulant_exponential(shift_generator(N, T)[:, 0], T) - U),
    }
