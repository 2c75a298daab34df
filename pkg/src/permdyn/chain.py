"""Classical spin configurations of the periodic chain and the exchange update.

A configuration of ``2S`` two-valued spins is packed into an integer: position
``p`` (1-based) is bit ``p - 1``, and an up spin is a set bit.  The text form
is a string over ``u``/``d`` with position 1 leftmost.

One update applies the exchanges on the pairs ``(2l, 2l+1)`` (the pair
``(2S, 2S+1)`` wraps to ``(2S, 1)``) and then on the pairs ``(2k-1, 2k)``.
Its net effect is that the value sitting at an odd position ``p`` moves to
``p - 2`` and the value at an even position moves to ``p + 2`` (mod ``2S``).
On packed integers that is one right-rotation of the odd-position bits and
one left-rotation of the even-position bits, so ``U**n`` costs the same as
``U``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .config import ORBIT_ENUM_CAP

UP = "u"
DOWN = "d"


def _check_sites(n_sites: int) -> None:
    if n_sites < 4 or n_sites % 2:
        raise ValueError(f"chain needs an even number of sites >= 4, got {n_sites}")


@dataclass(frozen=True, order=True)
class SpinConfig:
    """One ontological state: ``n_sites`` spins packed into ``bits``."""

    bits: int
    n_sites: int

    def __post_init__(self):
        _check_sites(self.n_sites)
        if not 0 <= self.bits < (1 << self.n_sites):
            raise ValueError(f"bits {self.bits} out of range for {self.n_sites} sites")

    @classmethod
    def from_text(cls, text: str) -> "SpinConfig":
        text = text.strip()
        bad = set(text) - {UP, DOWN}
        if bad:
            raise ValueError(f"state string may only contain 'u' and 'd', got {sorted(bad)}")
        bits = 0
        for p, ch in enumerate(text):
            if ch == UP:
                bits |= 1 << p
        return cls(bits, len(text))

    @classmethod
    def from_spins(cls, spins: Iterable[int]) -> "SpinConfig":
        spins = list(spins)
        bits = 0
        for p, s in enumerate(spins):
            if s == 1:
                bits |= 1 << p
            elif s != -1:
                raise ValueError(f"spin values must be +1 or -1, got {s!r} at position {p + 1}")
        return cls(bits, len(spins))

    @classmethod
    def all_up(cls, n_sites: int) -> "SpinConfig":
        return cls((1 << n_sites) - 1, n_sites)

    @classmethod
    def all_down(cls, n_sites: int) -> "SpinConfig":
        return cls(0, n_sites)

    @classmethod
    def alternating(cls, n_sites: int, odd_up: bool = True) -> "SpinConfig":
        """Odd positions up and even positions down (or the reverse)."""
        odd, even = _masks(n_sites)
        return cls(odd if odd_up else even, n_sites)

    @property
    def S(self) -> int:
        return self.n_sites // 2

    def spins(self) -> tuple[int, ...]:
        return tuple(1 if (self.bits >> p) & 1 else -1 for p in range(self.n_sites))

    def to_text(self) -> str:
        return "".join(UP if (self.bits >> p) & 1 else DOWN for p in range(self.n_sites))

    def __str__(self) -> str:
        return self.to_text()


def as_config(state: SpinConfig | str) -> SpinConfig:
    if isinstance(state, SpinConfig):
        return state
    return SpinConfig.from_text(state)


@lru_cache(maxsize=None)
def _masks(n_sites: int) -> tuple[int, int]:
    """Bit masks of the odd positions (bits 0, 2, ...) and the even positions."""
    odd = sum(1 << b for b in range(0, n_sites, 2))
    even = sum(1 << b for b in range(1, n_sites, 2))
    return odd, even


def _rotl(x: int, k: int, n: int) -> int:
    k %= n
    if k == 0:
        return x
    full = (1 << n) - 1
    return ((x << k) | (x >> (n - k))) & full


def update_bits(bits: int, n_sites: int, steps: int = 1) -> int:
    """Apply ``U**steps`` to a packed configuration; negative steps run ``U^dagger``."""
    odd, even = _masks(n_sites)
    shift = 2 * steps
    return _rotl(bits & odd, -shift, n_sites) | _rotl(bits & even, shift, n_sites)


def update_by_pair_swaps(spins: Sequence[int]) -> list[int]:
    """Reference update: swap the even pairs, then the odd pairs, one at a time."""
    out = list(spins)
    n = len(out)
    _check_sites(n)
    for left in range(1, n, 2):  # pairs (2l, 2l+1), 0-based (1, 2), ..., (n-1, 0)
        right = (left + 1) % n
        out[left], out[right] = out[right], out[left]
    for left in range(0, n, 2):  # pairs (2k-1, 2k)
        out[left], out[left + 1] = out[left + 1], out[left]
    return out


@dataclass(frozen=True)
class PositionPermutation:
    """Where each position's value goes in one update (0-based index arrays).

    ``forward[p]`` is the destination of the value at position ``p``;
    ``inverse`` is the inverse map.
    """

    forward: np.ndarray
    inverse: np.ndarray

    @classmethod
    def from_forward(cls, forward: Sequence[int]) -> "PositionPermutation":
        fwd = np.asarray(forward, dtype=np.int64)
        if sorted(fwd.tolist()) != list(range(len(fwd))):
            raise ValueError("forward map is not a bijection")
        inv = np.empty_like(fwd)
        inv[fwd] = np.arange(len(fwd))
        fwd.setflags(write=False)
        inv.setflags(write=False)
        return cls(fwd, inv)

    @classmethod
    def identity(cls, n: int) -> "PositionPermutation":
        return cls.from_forward(range(n))

    def __len__(self) -> int:
        return len(self.forward)

    def then(self, other: "PositionPermutation") -> "PositionPermutation":
        """Apply ``self`` first, then ``other``."""
        return PositionPermutation.from_forward(other.forward[self.forward])

    def inverted(self) -> "PositionPermutation":
        return PositionPermutation(self.inverse, self.forward)

    def power(self, n: int) -> "PositionPermutation":
        base = self if n >= 0 else self.inverted()
        n = abs(n)
        result = PositionPermutation.identity(len(self))
        while n:
            if n & 1:
                result = result.then(base)
            base = base.then(base)
            n >>= 1
        return result

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.forward, np.arange(len(self))))

    def apply(self, values: np.ndarray) -> np.ndarray:
        """Move values along the last axis (works on batches of configurations)."""
        return np.asarray(values)[..., self.inverse]

    def destination(self, position: int) -> int:
        """1-based destination of the value at 1-based ``position``."""
        return int(self.forward[position - 1]) + 1


@dataclass(frozen=True)
class ChainModel:
    S: int
    permutation: PositionPermutation

    @property
    def n_sites(self) -> int:
        return 2 * self.S

    def apply(self, state: SpinConfig | str, steps: int = 1, direction: str = "forward") -> SpinConfig:
        state = as_config(state)
        if state.n_sites != self.n_sites:
            raise ValueError(f"state has {state.n_sites} sites, chain has {self.n_sites}")
        return apply_update(state, steps, direction)

    def apply_array(self, spins: np.ndarray, steps: int = 1) -> np.ndarray:
        """Update a (batch of) +/-1 arrays through the position permutation."""
        spins = np.asarray(spins)
        if spins.shape[-1] != self.n_sites:
            raise ValueError(f"arrays have {spins.shape[-1]} sites, chain has {self.n_sites}")
        return self.permutation.power(steps).apply(spins)


def new_chain(S: int) -> ChainModel:
    if S < 2:
        raise ValueError("degenerate chain: S must be >= 2 (for S = 1 the two sweeps cancel)")
    n = 2 * S
    forward = [(p - 2) % n if p % 2 == 0 else (p + 2) % n for p in range(n)]
    return ChainModel(S, PositionPermutation.from_forward(forward))


def apply_update(state: SpinConfig | str, steps: int = 1, direction: str = "forward") -> SpinConfig:
    """Return ``U**steps`` (or ``(U^dagger)**steps``) applied to a basis state."""
    state = as_config(state)
    if direction == "inverse":
        steps = -steps
    elif direction != "forward":
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    return SpinConfig(update_bits(state.bits, state.n_sites, steps), state.n_sites)


def lex_key(state: SpinConfig) -> int:
    """Integer whose order matches the text order of configurations."""
    return int(format(state.bits, f"0{state.n_sites}b")[::-1], 2)


@dataclass(frozen=True)
class OrbitRecord:
    representative: SpinConfig
    length: int
    states: tuple[SpinConfig, ...] | None = None

    def index(self) -> dict[int, int]:
        """Map packed state -> position along the orbit, starting at the representative."""
        states = self.states if self.states is not None else orbit_of(self.representative).states
        return {s.bits: k for k, s in enumerate(states)}


def orbit_of(state: SpinConfig | str) -> OrbitRecord:
    """Cycle of ``state`` under ``U``, listed from its text-smallest member."""
    state = as_config(state)
    n = state.n_sites
    members = [state.bits]
    cur = update_bits(state.bits, n)
    while cur != state.bits:
        members.append(cur)
        cur = update_bits(cur, n)
    configs = [SpinConfig(b, n) for b in members]
    start = min(range(len(configs)), key=lambda k: lex_key(configs[k]))
    ordered = tuple(configs[start:] + configs[:start])
    return OrbitRecord(ordered[0], len(ordered), ordered)


def enumerate_orbits(S: int, cap: int | None = None) -> list[OrbitRecord]:
    """All orbits of the ``2S``-site chain, sorted by representative text."""
    if S < 2:
        raise ValueError("degenerate chain: S must be >= 2")
    n = 2 * S
    cap = ORBIT_ENUM_CAP if cap is None else cap
    if n > cap:
        raise ValueError(f"enumerating 2^{n} states exceeds the cap of {cap} sites")
    # Work in bit-reversed coordinates so integer order equals text order:
    # position p sits at bit n - p, odd positions land on odd bits.
    dtype = np.uint32 if n <= 31 else np.uint64
    full = dtype((1 << n) - 1)
    odd_bits = dtype(sum(1 << b for b in range(1, n, 2)))
    even_bits = dtype(sum(1 << b for b in range(0, n, 2)))
    two, back = dtype(2), dtype(n - 2)

    def step(y):
        lo = y & odd_bits
        hi = y & even_bits
        left = ((lo << two) | (lo >> back)) & full
        right = ((hi >> two) | (hi << back)) & full
        return left | right

    y = np.arange(1 << n, dtype=dtype)
    cur = y.copy()
    smallest = y.copy()
    length = np.zeros(1 << n, dtype=np.int32)
    for k in range(1, S + 1):
        cur = step(cur)
        np.minimum(smallest, cur, out=smallest)
        length[(length == 0) & (cur == y)] = k
    reps = np.flatnonzero(smallest == y)
    out = []
    for r in reps.tolist():
        text = format(r, f"0{n}b").replace("1", UP).replace("0", DOWN)
        out.append(OrbitRecord(SpinConfig.from_text(text), int(length[r])))
    return out


def count_up_down(state: SpinConfig | str) -> tuple[int, int]:
    state = as_config(state)
    up = state.bits.bit_count()
    return up, state.n_sites - up


def magnetization(state: SpinConfig | str) -> Fraction:
    up, down = count_up_down(state)
    return Fraction(up - down, up + down)


def spin_flip(state: SpinConfig | str) -> SpinConfig:
    state = as_config(state)
    return SpinConfig(state.bits ^ ((1 << state.n_sites) - 1), state.n_sites)


def translate(state: SpinConfig | str, shift: int) -> SpinConfig:
    """Relabel positions so the value at ``p`` moves to ``p + shift``."""
    state = as_config(state)
    if shift % 2:
        raise ValueError(
            f"odd shift {shift} converts leftmovers and rightmovers into each other; "
            "only even shifts are symmetries of the dynamics"
        )
    return SpinConfig(_rotl(state.bits, shift, state.n_sites), state.n_sites)


@dataclass(frozen=True)
class MoverView:
    """Spin values split by sublattice after ``step`` updates.

    ``right[k - 1]`` is the value at position ``2k``; ``left[l - 1]`` is the
    value at position ``2l - 1``.
    """

    right: tuple[int, ...]
    left: tuple[int, ...]
    step: int

    def reconstruct(self) -> SpinConfig:
        spins = []
        for odd, even in zip(self.left, self.right):
            spins.extend((odd, even))
        return SpinConfig.from_spins(spins)


def mover_decompose(state: SpinConfig | str, n: int = 0) -> MoverView:
    """Mover view of ``U**n`` applied to ``state``."""
    spins = apply_update(state, n).spins()
    return MoverView(right=spins[1::2], left=spins[0::2], step=n)


def mover_check(view_n: MoverView, view_next: MoverView) -> bool:
    """True when ``view_next`` follows ``view_n`` by the mover difference equations."""
    if len(view_n.right) != len(view_next.right) or len(view_n.left) != len(view_next.left):
        raise ValueError("views come from chains of different size")
    S = len(view_n.right)
    right_ok = all(view_next.right[k] == view_n.right[(k - 1) % S] for k in range(S))
    left_ok = all(view_next.left[l] == view_n.left[(l + 1) % S] for l in range(S))
    return right_ok and left_ok


def update_array(bits: np.ndarray, n_sites: int, steps: int = 1) -> np.ndarray:
    """Vectorized :func:`update_bits` for arrays of packed states (``n_sites <= 62``)."""
    if n_sites > 62:
        raise ValueError("array update supports at most 62 sites")
    x = np.asarray(bits, dtype=np.uint64)
    odd, even = (np.uint64(m) for m in _masks(n_sites))
    full = np.uint64((1 << n_sites) - 1)
    n = n_sites

    def rotl(v, k):
        k %= n
        if k == 0:
            return v
        return ((v << np.uint64(k)) | (v >> np.uint64(n - k))) & full

    shift = 2 * steps
    return rotl(x & odd, -shift) | rotl(x & even, shift)


def conservation_violations(states: Iterable[SpinConfig], shift: int = 2) -> int:
    """Count states where an update breaks a conservation law or symmetry."""
    bad = 0
    for s in states:
        u = apply_update(s)
        ok = (
            count_up_down(u) == count_up_down(s)
            and magnetization(u) == magnetization(s)
            and apply_update(spin_flip(s)) == spin_flip(u)
            and apply_update(translate(s, shift)) == translate(u, shift)
            and apply_update(u, 1, "inverse") == s
        )
        bad += not ok
    return bad
