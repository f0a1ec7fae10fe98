"""Signed sets and sijections.

A signed set is described by a ``SetExpr`` tree.  Its elements are plain term
trees (ints, strings, tuples) so they hash, compare and serialize cheaply:

* ``Interval(l)``        -> ``j`` for ``1 <= j <= l``
* ``TuplePower(B, k)``   -> length-k tuple of elements of ``B``
* ``Binomial(k, i)``     -> increasing length-i tuple drawn from ``1..k``
* ``Alpha(i)``           -> the single value ``"alpha"``
* ``Walk1DSet(m, k)``    -> tuple of step residues
* ``Walk2DSet(m, n, k)`` -> tuple of ``("h", a)`` / ``("v", b)`` pairs
* ``PaddedTuples(l, k, i)`` -> ``(S, x)`` with ``x[j-1] == l`` for ``j`` in ``S``
* ``Sum(A, B, ...)``     -> ``(index, element)`` so repeated summands stay apart
* ``Product(A, B, ...)`` -> tuple with one element per factor
* ``Negation(A)``        -> same elements as ``A``, opposite signs

A sijection between signed sets S and T is an involution on the tagged union
of S and T.  Pairs on the same side have opposite signs; pairs across sides
have equal signs.  ``Sijection.apply`` works on ``(side, value)`` pairs and
never looks at signs; signs always come from the set expressions, so the
verifier checks the weight contract against the definitions.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, prod
from typing import Any, Callable, Iterator

from . import walks

LEFT = "left"
RIGHT = "right"
ALPHA = "alpha"

Point = tuple[str, Any]


class SijectionDefect(RuntimeError):
    """A map broke the sijection contract while being evaluated."""


class PreconditionError(ValueError):
    pass


def _other(side: str) -> str:
    return RIGHT if side == LEFT else LEFT


@dataclass(frozen=True)
class SignedElement:
    value: Any
    sign: int

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")


@dataclass(frozen=True)
class TaggedElement:
    side: str
    element: SignedElement


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


class SetExpr:
    """Base class.  Iterating yields ``(value, sign)`` pairs in canonical order."""

    def __iter__(self) -> Iterator[tuple[Any, int]]:
        raise NotImplementedError

    def contains(self, value) -> bool:
        raise NotImplementedError

    def sign(self, value) -> int:
        """Sign of a member; the result is meaningless for non-members."""
        raise NotImplementedError

    def size(self) -> int:
        raise NotImplementedError

    def __add__(self, other: SetExpr) -> Sum:
        return Sum(self, other)

    def __sub__(self, other: SetExpr) -> Sum:
        return Sum(self, Negation(other))

    def __mul__(self, other: SetExpr) -> Product:
        return Product(self, other)

    def __neg__(self) -> Negation:
        return Negation(self)


def _check_nonneg(**params):
    for name, v in params.items():
        if not _is_int(v) or v < 0:
            raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")


@dataclass(frozen=True)
class Interval(SetExpr):
    """[l] = {1, ..., l}; l = 0 gives the empty set."""

    l: int

    def __post_init__(self):
        _check_nonneg(l=self.l)

    def __iter__(self):
        for j in range(1, self.l + 1):
            yield j, 1

    def contains(self, value):
        return _is_int(value) and 1 <= value <= self.l

    def sign(self, value):
        return 1

    def size(self):
        return self.l


@dataclass(frozen=True)
class TuplePower(SetExpr):
    base: SetExpr
    k: int

    def __post_init__(self):
        _check_nonneg(k=self.k)

    def __iter__(self):
        for combo in itertools.product(list(self.base), repeat=self.k):
            yield tuple(v for v, _ in combo), prod(s for _, s in combo)

    def contains(self, value):
        return (
            isinstance(value, tuple)
            and len(value) == self.k
            and all(self.base.contains(v) for v in value)
        )

    def sign(self, value):
        return prod(self.base.sign(v) for v in value)

    def size(self):
        return self.base.size() ** self.k


@dataclass(frozen=True)
class Binomial(SetExpr):
    """The i-element subsets of [k]."""

    k: int
    i: int

    def __post_init__(self):
        _check_nonneg(k=self.k, i=self.i)

    def __iter__(self):
        for subset in itertools.combinations(range(1, self.k + 1), self.i):
            yield subset, 1

    def contains(self, value):
        if not isinstance(value, tuple) or len(value) != self.i:
            return False
        prev = 0
        for x in value:
            if not _is_int(x) or not prev < x <= self.k:
                return False
            prev = x
        return True

    def sign(self, value):
        return 1

    def size(self):
        return comb(self.k, self.i)


@dataclass(frozen=True)
class Alpha(SetExpr):
    """Singleton of sign (-1)**i."""

    i: int

    def __post_init__(self):
        _check_nonneg(i=self.i)

    def __iter__(self):
        yield ALPHA, (-1) ** self.i

    def contains(self, value):
        return value == ALPHA

    def sign(self, value):
        return (-1) ** self.i

    def size(self):
        return 1


@dataclass(frozen=True)
class Walk1DSet(SetExpr):
    m: int
    k: int

    def __post_init__(self):
        _check_nonneg(k=self.k)
        if not _is_int(self.m) or self.m < 2:
            raise ValueError(f"m must be >= 2, got {self.m!r}")

    def __iter__(self):
        for w in walks.enum_walks_1d(self.m, self.k):
            yield w.steps, 1

    def contains(self, value):
        return (
            isinstance(value, tuple)
            and len(value) == self.k
            and all(_is_int(a) and 1 <= a < self.m for a in value)
            and sum(value) % self.m == 0
        )

    def sign(self, value):
        return 1

    def size(self):
        m, k = self.m, self.k
        return ((m - 1) ** k + (-1) ** k * (m - 1)) // m


@dataclass(frozen=True)
class Walk2DSet(SetExpr):
    m: int
    n: int
    k: int

    def __post_init__(self):
        _check_nonneg(k=self.k)
        if self.m < 2 or self.n < 2:
            raise ValueError(f"m, n must be >= 2, got {self.m}, {self.n}")

    def __iter__(self):
        for w in walks.enum_walks_2d(self.m, self.n, self.k):
            yield w.steps, 1

    def contains(self, value):
        if not isinstance(value, tuple) or len(value) != self.k:
            return False
        try:
            walks.Walk2D(self.m, self.n, value)
        except (walks.InvalidWalk, TypeError, ValueError):
            return False
        return True

    def sign(self, value):
        return 1

    def size(self):
        return walks.stanley_count(self.m, self.n, self.k)


@dataclass(frozen=True)
class PaddedTuples(SetExpr):
    """Pairs (S, x) in Binomial(k, i) x [l]^k with x equal to l on S."""

    l: int
    k: int
    i: int

    def __post_init__(self):
        _check_nonneg(l=self.l, k=self.k, i=self.i)

    def __iter__(self):
        free = range(1, self.l + 1)
        for subset in itertools.combinations(range(1, self.k + 1), self.i):
            slots = [(self.l,) if p in subset else free for p in range(1, self.k + 1)]
            for x in itertools.product(*slots):
                yield (subset, x), 1

    def contains(self, value):
        if not isinstance(value, tuple) or len(value) != 2:
            return False
        subset, x = value
        return (
            Binomial(self.k, self.i).contains(subset)
            and TuplePower(Interval(self.l), self.k).contains(x)
            and all(x[p - 1] == self.l for p in subset)
        )

    def sign(self, value):
        return 1

    def size(self):
        return comb(self.k, self.i) * self.l ** (self.k - self.i)


@dataclass(frozen=True, init=False)
class Sum(SetExpr):
    parts: tuple[SetExpr, ...]

    def __init__(self, *parts: SetExpr):
        object.__setattr__(self, "parts", tuple(parts))

    def __iter__(self):
        for idx, part in enumerate(self.parts):
            for v, s in part:
                yield (idx, v), s

    def contains(self, value):
        return (
            isinstance(value, tuple)
            and len(value) == 2
            and _is_int(value[0])
            and 0 <= value[0] < len(self.parts)
            and self.parts[value[0]].contains(value[1])
        )

    def sign(self, value):
        idx, v = value
        return self.parts[idx].sign(v)

    def size(self):
        return sum(p.size() for p in self.parts)


@dataclass(frozen=True, init=False)
class Product(SetExpr):
    factors: tuple[SetExpr, ...]

    def __init__(self, *factors: SetExpr):
        object.__setattr__(self, "factors", tuple(factors))

    def __iter__(self):
        for combo in itertools.product(*(list(f) for f in self.factors)):
            yield tuple(v for v, _ in combo), prod(s for _, s in combo)

    def contains(self, value):
        return (
            isinstance(value, tuple)
            and len(value) == len(self.factors)
            and all(f.contains(v) for f, v in zip(self.factors, value))
        )

    def sign(self, value):
        return prod(f.sign(v) for f, v in zip(self.factors, value))

    def size(self):
        return prod(f.size() for f in self.factors)


@dataclass(frozen=True)
class Negation(SetExpr):
    inner: SetExpr

    def __iter__(self):
        for v, s in self.inner:
            yield v, -s

    def contains(self, value):
        return self.inner.contains(value)

    def sign(self, value):
        return -self.inner.sign(value)

    def size(self):
        return self.inner.size()


def enumerate_set(expr: SetExpr) -> Iterator[SignedElement]:
    for v, s in expr:
        yield SignedElement(v, s)


def weight(expr: SetExpr) -> int:
    return sum(s for _, s in expr)


# --------------------------------------------------------------------------
# sijections


class Sijection:
    """An involution on the tagged disjoint union ``left ⊔ right``.

    ``fn(side, value)`` returns the image as a ``(side, value)`` pair.
    """

    def __init__(self, left: SetExpr, right: SetExpr, fn: Callable[[str, Any], Point],
                 name: str = "sijection"):
        self.left = left
        self.right = right
        self._fn = fn
        self.name = name

    def __repr__(self):
        return f"<Sijection {self.name}: {self.left!r} <-> {self.right!r}>"

    def side_expr(self, side: str) -> SetExpr:
        return self.left if side == LEFT else self.right

    def apply(self, side: str, value) -> Point:
        return self._fn(side, value)

    def trajectory(self, side: str, value) -> list[TaggedElement]:
        """Points visited from ``(side, value)`` to its image, both included.

        Intermediate points of composed maps carry a side label other than
        ``"left"``/``"right"`` naming the set they live in.
        """
        return [self.tag(side, value), self.tag(*self.apply(side, value))]

    def tag(self, side: str, value) -> TaggedElement:
        return TaggedElement(side, SignedElement(value, self.side_expr(side).sign(value)))

    def __call__(self, x: TaggedElement) -> TaggedElement:
        return self.tag(*self.apply(x.side, x.element.value))


class _Relabel(Sijection):
    def __init__(self, left, right, forward, backward, name):
        super().__init__(left, right, None, name)
        self.forward = forward
        self.backward = backward

    def apply(self, side, value):
        if side == LEFT:
            return RIGHT, self.forward(value)
        return LEFT, self.backward(value)


def relabel_sij(left: SetExpr, right: SetExpr, forward: Callable, backward: Callable,
                name: str = "relabel") -> Sijection:
    """Sign-preserving bijection left -> right given as a pair of inverse maps."""
    return _Relabel(left, right, forward, backward, name)


class _Identity(Sijection):
    def apply(self, side, value):
        return (RIGHT if side == LEFT else LEFT), value


def identity_sij(expr: SetExpr) -> Sijection:
    return _Identity(expr, expr, None, name="identity")


class _Wrapped(Sijection):
    """Same involution as ``inner`` seen through an endpoint relabelling.

    ``outward`` maps an inner ``(side, value)`` to the outer carrier and
    ``inward`` goes back.
    """

    def __init__(self, inner: Sijection, left: SetExpr, right: SetExpr,
                 inward: Callable[[str, Any], Point], outward: Callable[[str, Any], Point],
                 name: str):
        super().__init__(left, right, None, name)
        self.inner = inner
        self._in = inward
        self._out = outward

    def apply(self, side, value):
        return self._out(*self.inner.apply(*self._in(side, value)))

    def trajectory(self, side, value):
        path = self.inner.trajectory(*self._in(side, value))
        last = path[-1]
        return (
            [self.tag(side, value)]
            + path[1:-1]
            + [self.tag(*self._out(last.side, last.element.value))]
        )


class _Mirror(Sijection):
    def __init__(self, inner: Sijection):
        super().__init__(inner.right, inner.left, None, name=f"mirror({inner.name})")
        self.inner = inner

    def apply(self, side, value):
        out_side, w = self.inner.apply(RIGHT if side == LEFT else LEFT, value)
        return (RIGHT if out_side == LEFT else LEFT), w

    def trajectory(self, side, value):
        path = self.inner.trajectory(_other(side), value)
        last = path[-1]
        return [self.tag(side, value)] + path[1:-1] + [self.tag(_other(last.side), last.element.value)]


def mirror_sij(s: Sijection) -> Sijection:
    """The same involution with left and right exchanged."""
    return _Mirror(s)


def rebracket(s: Sijection) -> Sijection:
    """Turn ``A <-> B + C`` into ``A - B <-> C`` without touching the involution."""
    if not isinstance(s.right, Sum) or len(s.right.parts) != 2:
        raise PreconditionError(f"rebracket needs a right side Sum(B, C), got {s.right!r}")
    b, c = s.right.parts

    def inward(side, value):
        if side == RIGHT:
            return RIGHT, (1, value)
        idx, v = value
        return (LEFT, v) if idx == 0 else (RIGHT, (0, v))

    def outward(side, value):
        if side == LEFT:
            return LEFT, (0, value)
        idx, v = value
        return (LEFT, (1, v)) if idx == 0 else (RIGHT, v)

    return _Wrapped(s, Sum(s.left, Negation(b)), c, inward, outward,
                    name=f"rebracket({s.name})")


class _SumSij(Sijection):
    def __init__(self, parts: tuple[Sijection, ...]):
        super().__init__(Sum(*(p.left for p in parts)), Sum(*(p.right for p in parts)),
                         None, name="sum(" + ", ".join(p.name for p in parts) + ")")
        self.parts = parts

    def apply(self, side, value):
        idx, v = value
        out_side, w = self.parts[idx].apply(side, v)
        return out_side, (idx, w)

    def trajectory(self, side, value):
        idx, v = value
        path = self.parts[idx].trajectory(side, v)
        inner = [TaggedElement(f"+{idx}/{p.side}", p.element) for p in path[1:-1]]
        last = path[-1]
        return [self.tag(side, value)] + inner + [self.tag(last.side, (idx, last.element.value))]


def sum_sij(*parts: Sijection) -> Sijection:
    """Sijection ``A1 + A2 + ... <-> B1 + B2 + ...`` acting summand-wise."""
    return _SumSij(tuple(parts))


class _ProductSij(Sijection):
    def __init__(self, f: Sijection, g: Sijection):
        super().__init__(Product(f.left, g.left), Product(f.right, g.right), None,
                         name=f"({f.name} x {g.name})")
        self.f = f
        self.g = g

    def apply(self, side, value):
        x, y = value
        fs, fx = self.f.apply(side, x)
        if fs == side:
            return side, (fx, y)
        gs, gy = self.g.apply(side, y)
        if gs == side:
            return side, (x, gy)
        return fs, (fx, gy)


def product_sij(f: Sijection, g: Sijection) -> Sijection:
    """Sijection ``A x C <-> B x D`` from ``f: A <-> B`` and ``g: C <-> D``.

    If ``f`` keeps the first coordinate on its side, only it moves; otherwise
    if ``g`` keeps the second on its side, only that moves; otherwise both
    cross together.
    """
    return _ProductSij(f, g)


class _Chain(Sijection):
    """Composite of sijections X0 <-> X1 <-> ... <-> Xn by path chasing."""

    def __init__(self, stages: tuple[Sijection, ...]):
        super().__init__(stages[0].left, stages[-1].right, None,
                         name=" ; ".join(s.name for s in stages))
        self.stages = stages
        self._budget = None

    def _label(self, j):
        if j == 0:
            return LEFT
        if j == len(self.stages):
            return RIGHT
        return f"X{j}"

    @property
    def budget(self) -> int:
        # a chase visits each (position, direction, element) state at most once
        if self._budget is None:
            self._budget = 2 * sum(st.left.size() for st in self.stages[1:]) + 1
        return self._budget

    def _chase(self, side, value, path=None):
        stages = self.stages
        n = len(stages)
        # position j in X_j; direction +1 means the next map is stages[j]
        j, d = (0, 1) if side == LEFT else (n, -1)
        for _ in range(self.budget):
            t = j if d > 0 else j - 1
            s_in = LEFT if d > 0 else RIGHT
            if path is None:
                s_out, value = stages[t].apply(s_in, value)
            else:
                sub = stages[t].trajectory(s_in, value)
                for p in sub[1:-1]:
                    path.append(TaggedElement(f"s{t}.{p.side}", p.element))
                s_out, value = sub[-1].side, sub[-1].element.value
                path.append(TaggedElement(self._label(t if s_out == LEFT else t + 1),
                                          sub[-1].element))
            if s_out == s_in:
                d = -d
            else:
                j += d
            if j == 0 and d < 0:
                return LEFT, value
            if j == n and d > 0:
                return RIGHT, value
        raise SijectionDefect(
            f"chase through {self.name} exceeded {self.budget} states; "
            "some stage is not an involution"
        )

    def apply(self, side, value):
        return self._chase(side, value)

    def trajectory(self, side, value):
        path = [self.tag(side, value)]
        self._chase(side, value, path)
        return path


def compose_sij(f: Sijection, g: Sijection) -> Sijection:
    """Sijection ``A <-> C`` from ``f: A <-> B`` and ``g: B <-> C``."""
    if f.right != g.left:
        raise PreconditionError(
            f"cannot compose: {f.name} ends at {f.right!r} but {g.name} starts at {g.left!r}"
        )
    stages = []
    for s in (f, g):
        stages.extend(s.stages if isinstance(s, _Chain) else (s,))
    return _Chain(tuple(stages))


def chain_sij(*sijs: Sijection) -> Sijection:
    out = sijs[0]
    for s in sijs[1:]:
        out = compose_sij(out, s)
    return out


def swap_images(s: Sijection, a: Point, b: Point) -> Sijection:
    """A deliberately broken copy of ``s`` whose images of ``a`` and ``b`` are exchanged."""
    image_a, image_b = s.apply(*a), s.apply(*b)

    def fn(side, value):
        if (side, value) == a:
            return image_b
        if (side, value) == b:
            return image_a
        return s.apply(side, value)

    return Sijection(s.left, s.right, fn, name=f"corrupted({s.name})")


def trace_element(s: Sijection, x: TaggedElement) -> list[TaggedElement]:
    """Full path from ``x`` to ``s(x)`` through every intermediate set."""
    value = x.element.value
    if x.side not in (LEFT, RIGHT) or not s.side_expr(x.side).contains(value):
        raise PreconditionError(f"{x!r} is not in the carrier of {s.name}")
    return s.trajectory(x.side, value)


# --------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerifyReport:
    carrier_size: int
    involution_ok: bool
    weight_contract_ok: bool
    totality_ok: bool
    left_weight: int
    right_weight: int
    first_failure: TaggedElement | None = None
    failure_reason: str | None = None

    @property
    def ok(self) -> bool:
        return self.involution_ok and self.weight_contract_ok and self.totality_ok


def _signs_by_value(expr: SetExpr) -> dict:
    table = {}
    for v, s in expr:
        if v in table:
            raise SijectionDefect(f"{expr!r} enumerates {v!r} twice")
        table[v] = s
    return table


def verify_sijection(s: Sijection) -> VerifyReport:
    """Exhaustively check totality, involution and the sign rule on the carrier."""
    tables = {LEFT: _signs_by_value(s.left), RIGHT: _signs_by_value(s.right)}
    flags = {"totality": True, "involution": True, "weight": True}
    failure = None

    def fail(kind, side, value, sign, reason):
        nonlocal failure
        flags[kind] = False
        if failure is None:
            failure = (TaggedElement(side, SignedElement(value, sign)), reason)

    for side in (LEFT, RIGHT):
        for value, sign in tables[side].items():
            try:
                img_side, img = s.apply(side, value)
            except Exception as exc:  # a crashing map is a totality failure
                fail("totality", side, value, sign, f"map raised {exc!r}")
                continue
            img_sign = tables.get(img_side, {}).get(img)
            if img_sign is None:
                fail("totality", side, value, sign,
                     f"image {(img_side, img)!r} is outside the carrier")
                continue
            try:
                back = s.apply(img_side, img)
            except Exception as exc:
                fail("totality", img_side, img, img_sign, f"map raised {exc!r}")
                continue
            if back != (side, value):
                fail("involution", side, value, sign,
                     f"maps to {(img_side, img)!r} which maps to {back!r}")
            expected = -sign if img_side == side else sign
            if img_sign != expected:
                fail("weight", side, value, sign,
                     f"image {(img_side, img)!r} has sign {img_sign}, expected {expected}")

    return VerifyReport(
        carrier_size=len(tables[LEFT]) + len(tables[RIGHT]),
        involution_ok=flags["involution"],
        weight_contract_ok=flags["weight"],
        totality_ok=flags["totality"],
        left_weight=sum(tables[LEFT].values()),
        right_weight=sum(tables[RIGHT].values()),
        first_failure=failure[0] if failure else None,
        failure_reason=failure[1] if failure else None,
    )
