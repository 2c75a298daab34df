"""Superpositions from imprecise Hamiltonians.

The exact Hamiltonian only ever permutes basis states.  Anything else in the
commuting algebra of ``U`` (truncated, perturbed) evolves a basis state into
a superposition over its orbit.  Evolution is exact and done orbit by orbit
in Fourier space, so it scales to long chains; :func:`evolve_dense` is the
small-size oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chain import SpinConfig, as_config, update_bits
from .config import DENSE_EVOLVE_CAP, ENTROPY_CAP, ROUNDTRIP_TOL, check_dense_size
from .hamiltonian import MagnetizedHamiltonian, OperatorPolynomial, synthesize_reduced
from .state import QuantumState

NORM_TOL = 1e-10


def approx_hamiltonian(S: int, T: float = 1.0, allow_degenerate: bool = False) -> OperatorPolynomial:
    """Leading terms of the reduced Hamiltonian, ``cot(pi n/S)`` replaced by ``+-S/pi``.

    Gives ``(pi/T)(1 - (i/pi)(U - U^dagger))``.  For ``S = 2`` the two kept
    terms land on the same power and cancel; that case is refused unless
    ``allow_degenerate`` is set.
    """
    if S < 2 or (S < 3 and not allow_degenerate):
        raise ValueError(f"approximate Hamiltonian needs S >= 3, got {S}")
    c = np.zeros(S, dtype=complex)
    c[0] = np.pi / T
    c[1] += -1j / T
    c[S - 1] += 1j / T
    return OperatorPolynomial(S, T, tuple(c), "approx")


def bell_probe_state(n_sites: int = 8) -> SpinConfig:
    """All up except a down pair on sites 4 and 5 (first down on an even site)."""
    if n_sites < 8:
        raise ValueError(f"the probe state needs at least 8 sites, got {n_sites}")
    bits = ((1 << n_sites) - 1) & ~(1 << 3) & ~(1 << 4)
    return SpinConfig(bits, n_sites)


def commutator_action(state: SpinConfig | str, normalize: bool = False) -> QuantumState:
    """``(U - U^dagger)|state>``; the zero state exactly when ``U`` fixes ``state``."""
    state = as_config(state)
    fwd = update_bits(state.bits, state.n_sites, 1)
    back = update_bits(state.bits, state.n_sites, -1)
    amps = {fwd: 1.0}
    amps[back] = amps.get(back, 0) - 1.0
    psi = QuantumState(state.n_sites, amps)
    return psi.normalized() if normalize and not psi.is_zero() else psi


@dataclass(frozen=True)
class PerturbationSpec:
    """Coefficient offsets ``epsilon * delta_n``.

    Without explicit ``deltas`` the offsets are drawn from a complex standard
    normal with ``seed`` (in units of ``1/T``).
    """

    epsilon: float
    deltas: tuple[complex, ...] | None = None
    seed: int = 0
    hermitize: bool = True

    def offsets(self, S: int, T: float) -> np.ndarray:
        if self.deltas is not None:
            d = np.array(self.deltas, dtype=complex)
            if d.shape != (S,):
                raise ValueError(f"need {S} deltas, got {d.shape[0]}")
        else:
            rng = np.random.default_rng(self.seed)
            d = (rng.standard_normal(S) + 1j * rng.standard_normal(S)) / T
        if self.hermitize:
            d = (d + np.conj(np.roll(d[::-1], 1))) / 2
        return d


def perturb(poly: OperatorPolynomial, spec: PerturbationSpec) -> OperatorPolynomial:
    if spec.epsilon == 0:
        return poly
    c = poly.array() + spec.epsilon * spec.offsets(poly.S, poly.T)
    label = f"{poly.label}+eps" if poly.label else "perturbed"
    return OperatorPolynomial(poly.S, poly.T, tuple(c), label)


def _orbit_from(bits: int, n_sites: int) -> list[int]:
    members = [bits]
    cur = update_bits(bits, n_sites)
    while cur != bits:
        members.append(cur)
        cur = update_bits(cur, n_sites)
    return members


def evolve(op: OperatorPolynomial | MagnetizedHamiltonian, psi: QuantumState, t: float) -> QuantumState:
    """``exp(-i H t) psi`` computed exactly on each orbit in ``psi``'s support."""
    if psi.n_sites != op.n_sites:
        raise ValueError(f"operator acts on {op.n_sites} sites, state has {psi.n_sites}")
    amps = psi.amplitudes
    done: set[int] = set()
    out: dict[int, complex] = {}
    for start in sorted(amps):
        if start in done:
            continue
        members = _orbit_from(start, psi.n_sites)
        done.update(members)
        x = np.array([amps.get(b, 0) for b in members], dtype=complex)
        lam = op.orbit_eigenvalues(SpinConfig(start, psi.n_sites), len(members))
        y = np.fft.ifft(np.exp(-1j * lam * t) * np.fft.fft(x))
        for b, a in zip(members, y):
            out[b] = a
    return QuantumState(psi.n_sites, out)


def evolve_dense(H: np.ndarray, psi: QuantumState, t: float, cap: int = DENSE_EVOLVE_CAP) -> QuantumState:
    """Dense Hermitian exponentiation; the oracle for :func:`evolve`."""
    check_dense_size(psi.n_sites, cap)
    dim = 1 << psi.n_sites
    if H.shape != (dim, dim):
        raise ValueError(f"matrix of shape {H.shape} does not match {psi.n_sites} sites")
    if np.max(np.abs(H - H.conj().T)) > ROUNDTRIP_TOL * max(1.0, float(np.max(np.abs(H)))):
        raise ValueError("dense evolution needs a Hermitian matrix")
    w, V = np.linalg.eigh(H)
    vec = V @ (np.exp(-1j * w * t) * (V.conj().T @ psi.to_vector()))
    return QuantumState.from_vector(psi.n_sites, vec)


def _check_normalized(psi: QuantumState) -> float:
    total = sum(abs(a) ** 2 for a in psi.amplitudes.values())
    if abs(total - 1) > NORM_TOL:
        raise ValueError(f"state is not normalized (norm^2 = {total:.12g})")
    return total


def superposition_weight(psi: QuantumState) -> float:
    """``1 - max |amplitude|^2``: zero exactly on single configurations."""
    total = _check_normalized(psi)
    probs = sorted(abs(a) ** 2 for a in psi.amplitudes.values())
    # sum the small probabilities directly; 1 - max loses digits near zero
    return float(sum(probs[:-1]) / total) if probs else 0.0


def entanglement_entropy(psi: QuantumState, cut: int) -> float:
    """Von Neumann entropy (nats) of sites ``1..cut`` against the rest."""
    n = psi.n_sites
    if not 1 <= cut < n:
        raise ValueError(f"cut must lie between 1 and {n - 1}, got {cut}")
    if n > ENTROPY_CAP:
        raise ValueError(f"entropy limited to {ENTROPY_CAP} sites, got {n}")
    amps = psi.amplitudes
    if not amps:
        raise ValueError("entropy of the zero state is undefined")
    mask = (1 << cut) - 1
    lefts = sorted({b & mask for b in amps})
    rights = sorted({b >> cut for b in amps})
    li = {v: k for k, v in enumerate(lefts)}
    ri = {v: k for k, v in enumerate(rights)}
    M = np.zeros((len(lefts), len(rights)), dtype=complex)
    for b, a in amps.items():
        M[li[b & mask], ri[b >> cut]] = a
    gram = M @ M.conj().T if len(lefts) <= len(rights) else M.conj().T @ M
    p = np.linalg.eigvalsh(gram)
    p = p / p.sum()
    p = p[p > 1e-15]
    return float(max(0.0, -np.sum(p * np.log(p))))


def trace_record(psi: QuantumState, t: float, cut: int | None = None,
                 top_k: int | None = None) -> dict:
    """One line of an evolution trace."""
    rec = {"t": t, "weight": superposition_weight(psi)}
    if cut is not None and psi.n_sites <= ENTROPY_CAP:
        rec["entropy"] = entanglement_entropy(psi, cut)
    else:
        rec["entropy"] = None
    rec["amplitudes"] = [
        {"state": cfg.to_text(), "re": a.real, "im": a.imag} for cfg, a in psi.top(top_k)
    ]
    return rec


def perturbed_trace(S: int, T: float, epsilon: float, state: SpinConfig | str,
                    times, seed: int = 0, cut: int | None = None,
                    top_k: int | None = None) -> list[dict]:
    """Evolve a basis state under the perturbed exact Hamiltonian at each time."""
    from .hamiltonian import synthesize_exact

    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon}")
    poly = perturb(synthesize_exact(S, T), PerturbationSpec(epsilon, seed=seed))
    psi0 = QuantumState.basis(state)
    if psi0.n_sites != 2 * S:
        raise ValueError(f"state has {psi0.n_sites} sites, expected {2 * S}")
    if cut is None:
        cut = S
    return [trace_record(evolve(poly, psi0, t), t, cut, top_k) for t in times]


__all__ = [
    "PerturbationSpec",
    "QuantumState",
    "approx_hamiltonian",
    "bell_probe_state",
    "commutator_action",
    "entanglement_entropy",
    "evolve",
    "evolve_dense",
    "perturb",
    "perturbed_trace",
    "superposition_weight",
    "synthesize_reduced",
    "trace_record",
]
