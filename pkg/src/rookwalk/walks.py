"""Rook walks on an m x n torus board.

Steps are stored as residues: a horizontal step of amount ``a`` moves the rook
``a`` squares to the right with wrap-around, so ``1 <= a <= m - 1``.  A walk
returns to its start square exactly when the horizontal amounts sum to 0 mod m
and the vertical amounts sum to 0 mod n.  Absolute positions are never stored.

The enumerators here are deliberately naive: they run over every raw step
sequence and filter.  They serve as the oracle for everything built on top of
the sijection pipeline, so they must not share code with it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

H = "h"
V = "v"
AXES = (H, V)


class InvalidWalk(ValueError):
    pass


class WalkParseError(InvalidWalk):
    """Raised for malformed walk text; ``position`` is the 1-based token index."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


@dataclass(frozen=True)
class Walk1D:
    m: int
    steps: tuple[int, ...]

    def __post_init__(self):
        if self.m < 2:
            raise InvalidWalk(f"board width must be >= 2, got {self.m}")
        for s in self.steps:
            if not 1 <= s <= self.m - 1:
                raise InvalidWalk(f"step {s} outside [1, {self.m - 1}]")
        if sum(self.steps) % self.m:
            raise InvalidWalk(f"steps {self.steps} do not sum to 0 mod {self.m}")

    @property
    def k(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Walk2D:
    m: int
    n: int
    steps: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if self.m < 2 or self.n < 2:
            raise InvalidWalk(f"board must be at least 2 x 2, got {self.m} x {self.n}")
        hsum = vsum = 0
        for axis, amount in self.steps:
            if axis == H:
                if not 1 <= amount <= self.m - 1:
                    raise InvalidWalk(f"horizontal step {amount} outside [1, {self.m - 1}]")
                hsum += amount
            elif axis == V:
                if not 1 <= amount <= self.n - 1:
                    raise InvalidWalk(f"vertical step {amount} outside [1, {self.n - 1}]")
                vsum += amount
            else:
                raise InvalidWalk(f"unknown axis {axis!r}")
        if hsum % self.m or vsum % self.n:
            raise InvalidWalk("walk does not return to its start square")

    @property
    def k(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class SubsetK:
    """An i-subset of [k], kept as a strictly increasing tuple."""

    k: int
    members: tuple[int, ...]

    def __post_init__(self):
        prev = 0
        for x in self.members:
            if not prev < x <= self.k:
                raise ValueError(f"{self.members} is not an increasing subset of [{self.k}]")
            prev = x


def enum_walks_1d(m: int, k: int) -> list[Walk1D]:
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    return [
        Walk1D(m, seq)
        for seq in itertools.product(range(1, m), repeat=k)
        if sum(seq) % m == 0
    ]


def _step_alphabet(m: int, n: int) -> list[tuple[str, int]]:
    return [(H, a) for a in range(1, m)] + [(V, b) for b in range(1, n)]


def _closed_sequences(m: int, n: int, k: int):
    # residue contribution of each step, indexed like the alphabet
    alphabet = _step_alphabet(m, n)
    dh = [a if axis == H else 0 for axis, a in alphabet]
    dv = [a if axis == V else 0 for axis, a in alphabet]
    for idx in itertools.product(range(len(alphabet)), repeat=k):
        if sum(dh[i] for i in idx) % m == 0 and sum(dv[i] for i in idx) % n == 0:
            yield tuple(alphabet[i] for i in idx)


def enum_walks_2d(m: int, n: int, k: int) -> list[Walk2D]:
    """All closed rook walks of length k, in lexicographic step order."""
    if m < 2 or n < 2:
        raise ValueError(f"m, n must be >= 2, got {m}, {n}")
    return [Walk2D(m, n, steps) for steps in _closed_sequences(m, n, k)]


def brute_count_2d(m: int, n: int, k: int) -> int:
    """Same filter as enum_walks_2d, without building Walk2D objects."""
    if m < 2 or n < 2:
        raise ValueError(f"m, n must be >= 2, got {m}, {n}")
    return sum(1 for _ in _closed_sequences(m, n, k))


def stanley_count(m: int, n: int, k: int) -> int:
    """Closed-form number of closed rook walks of length k on an m x n board."""
    if m < 2 or n < 2 or k < 0:
        raise ValueError(f"need m, n >= 2 and k >= 0, got {m}, {n}, {k}")
    numerator = (
        (m + n - 2) ** k
        + (n - 1) * (m - 2) ** k
        + (m - 1) * (n - 2) ** k
        + (m - 1) * (n - 1) * (-2) ** k
    )
    count, rem = divmod(numerator, m * n)
    if rem:
        raise ArithmeticError(f"numerator {numerator} not divisible by {m * n}")
    return count


def split_walk(w: Walk2D) -> tuple[SubsetK, Walk1D, Walk1D]:
    """Project a walk onto its axes, remembering which positions were horizontal."""
    positions = tuple(p for p, (axis, _) in enumerate(w.steps, 1) if axis == H)
    horiz = tuple(a for axis, a in w.steps if axis == H)
    vert = tuple(a for axis, a in w.steps if axis == V)
    return SubsetK(w.k, positions), Walk1D(w.m, horiz), Walk1D(w.n, vert)


def merge_walk(subset: SubsetK, h: Walk1D, v: Walk1D) -> Walk2D:
    if len(subset.members) != h.k or subset.k - len(subset.members) != v.k:
        raise ValueError(
            f"lengths do not fit: |I|={len(subset.members)}, k={subset.k}, "
            f"horizontal {h.k}, vertical {v.k}"
        )
    chosen = set(subset.members)
    hs, vs = iter(h.steps), iter(v.steps)
    steps = tuple(
        (H, next(hs)) if p in chosen else (V, next(vs))
        for p in range(1, subset.k + 1)
    )
    return Walk2D(h.m, v.m, steps)


def format_walk(w: Walk2D) -> str:
    return ",".join(f"{axis}{amount}" for axis, amount in w.steps)


def parse_walk(text: str, m: int, n: int) -> Walk2D:
    """Parse ``h2,v3,...`` into a Walk2D; amounts must already be residues."""
    text = text.strip()
    tokens = text.split(",") if text else []
    steps = []
    last_pos = {H: None, V: None}
    for pos, token in enumerate(tokens, 1):
        token = token.strip().lower()
        axis, digits = token[:1], token[1:]
        if axis not in AXES or not digits.isdigit():
            raise WalkParseError(f"token {pos} ({token!r}) is not h<amount> or v<amount>", pos)
        amount = int(digits)
        bound = m if axis == H else n
        if not 1 <= amount <= bound - 1:
            raise WalkParseError(
                f"token {pos} ({token!r}): amount must lie in [1, {bound - 1}]", pos
            )
        steps.append((axis, amount))
        last_pos[axis] = pos
    for axis, modulus in ((H, m), (V, n)):
        total = sum(a for ax, a in steps if ax == axis)
        if total % modulus:
            raise WalkParseError(
                f"{'horizontal' if axis == H else 'vertical'} steps sum to {total}, "
                f"not 0 mod {modulus}",
                last_pos[axis],
            )
    return Walk2D(m, n, tuple(steps))
