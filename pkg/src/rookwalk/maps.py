"""The explicit sijections behind the rook-walk count, and their composite.

Every map here acts on the element encodings documented in ``signed``.  The
composite ``grand_sij`` is glued together only with the combinators from
``signed``: relabellings, sums, products, mirrors, rebracketing and chase
composition.
"""
from __future__ import annotations

from .signed import (
    ALPHA,
    LEFT,
    RIGHT,
    Alpha,
    Binomial,
    Interval,
    PaddedTuples,
    PreconditionError,
    Product,
    SijectionDefect,
    Sijection,
    Sum,
    TuplePower,
    Walk1DSet,
    Walk2DSet,
    chain_sij,
    identity_sij,
    mirror_sij,
    product_sij,
    rebracket,
    relabel_sij,
    sum_sij,
)
from .walks import SubsetK, Walk1D, Walk2D, merge_walk, split_walk


def _power(l: int, k: int) -> TuplePower:
    return TuplePower(Interval(l), k)


# --------------------------------------------------------------------------
# one-dimensional walks


def is_alternating(seq: tuple[int, ...], m: int) -> bool:
    """True for sequences of the form (x, m-x, x, m-x, ...)."""
    if not seq:
        return True
    x = seq[0]
    return all(a == (x if q % 2 == 0 else m - x) for q, a in enumerate(seq))


def alternating(x: int, m: int, length: int) -> tuple[int, ...]:
    return tuple(x if q % 2 == 0 else m - x for q in range(length))


def _residue(value: int, m: int) -> int:
    r = value % m
    if r == 0:
        raise SijectionDefect(f"intermediate value {value} vanishes mod {m}")
    return r


def onedim_case(m: int, j: int, walk: tuple[int, ...]) -> str:
    """Which branch of the one-dimensional map handles ``(j, walk)``.

    ``"base"`` for the empty walk, then ``"a"`` for ``j < m``, ``"b"`` for an
    alternating walk with ``j == m`` and ``"c"`` for the rest.
    """
    if not walk:
        return "base"
    if j < m:
        return "a"
    return "b" if is_alternating(walk, m) else "c"


def tail_sum(seq: tuple[int, ...], m: int) -> int:
    return sum(seq[1:]) % m


def _onedim_forward(m: int, j: int, a: tuple[int, ...]):
    i = len(a)
    case = onedim_case(m, j, a)
    if case == "base":
        return (1, (ALPHA, j)) if j < m else (0, ())
    if case == "a":
        return 0, (j,) + a[:-1]
    if case == "b":
        return 1, (ALPHA, a[0])
    a1 = a[0]
    for p in range(i):
        if (a[i - 1 - p] + (-1) ** p * a1) % m:
            break
    else:
        raise SijectionDefect(f"{a} is alternating mod {m}; case (c) does not apply")
    head = a[: i - p - 1]
    pivot = _residue(a[i - p - 1] + (-1) ** p * a1, m)
    tail = tuple(_residue((-1) ** e * a1, m) for e in range(p - 1, -1, -1))
    return 0, head + (pivot,) + tail


def _onedim_case_c_inverse(m: int, b: tuple[int, ...]):
    # case (c) never moves the first entry, so a_1 = b_1; p is then the first
    # offset from the end where b stops matching (-1)^q a_1
    i = len(b)
    a1 = b[0]
    for p in range(i):
        if (b[i - 1 - p] - (-1) ** p * a1) % m:
            break
    else:
        raise SijectionDefect(f"no case (c) preimage for {b} mod {m}")
    head = b[: i - p - 1]
    pivot = _residue(b[i - p - 1] - (-1) ** p * a1, m)
    tail = tuple(_residue(-((-1) ** e) * a1, m) for e in range(p - 1, -1, -1))
    return head + (pivot,) + tail


def onedim_sij(m: int, i: int) -> Sijection:
    """``[m] x S_{m,i}  <->  [m-1]^i + alpha_i x [m-1]``.

    Left elements are ``(j, walk)``; right elements are ``(0, tuple)`` or
    ``(1, ("alpha", x))``.  For odd ``i`` the alternating tuples in
    ``[m-1]^i`` cancel against ``alpha_i x [m-1]`` on the right side.
    """
    if m < 2 or i < 0:
        raise PreconditionError(f"need m >= 2 and i >= 0, got m={m}, i={i}")
    left = Product(Interval(m), Walk1DSet(m, i))
    right = Sum(_power(m - 1, i), Product(Alpha(i), Interval(m - 1)))

    def fn(side, value):
        if side == LEFT:
            j, a = value
            return RIGHT, _onedim_forward(m, j, a)
        idx, payload = value
        if idx == 1:
            x = payload[1]
            if i == 0:
                return LEFT, (x, ())
            if i % 2 == 0:
                return LEFT, (m, alternating(x, m, i))
            return RIGHT, (0, alternating(x, m, i))
        b = payload
        if i == 0:
            return LEFT, (m, ())
        if tail_sum(b, m):
            # inverse of case (a): the dropped last step closes the walk
            return LEFT, (b[0], b[1:] + (_residue(-sum(b[1:]), m),))
        if is_alternating(b, m):
            return RIGHT, (1, (ALPHA, b[0]))
        return LEFT, (m, _onedim_case_c_inverse(m, b))

    return Sijection(left, right, fn, name=f"onedim({m},{i})")


# --------------------------------------------------------------------------
# even/odd cancellation on padded tuples


def padded_tuple_bij(l: int, k: int, i: int) -> Sijection:
    """``[l]_i^k <-> Binomial(k, i) x [l]^(k-i)`` by deleting the forced ``l`` entries."""
    if i > k:
        raise PreconditionError(f"need i <= k, got i={i}, k={k}")

    def forward(value):
        subset, x = value
        y = list(x)
        for p in reversed(subset):
            if y.pop(p - 1) != l:
                raise PreconditionError(f"{x} is not {l} at every position of {subset}")
        return subset, tuple(y)

    def backward(value):
        subset, y = value
        x = list(y)
        for p in subset:
            x.insert(p - 1, l)
        return subset, tuple(x)

    return relabel_sij(PaddedTuples(l, k, i), Product(Binomial(k, i), _power(l, k - i)),
                       forward, backward, name=f"padded({l},{k},{i})")


def _parity_sum(l: int, k: int, parity: int) -> Sum:
    return Sum(*(PaddedTuples(l, k, i) for i in range(parity, k + 1, 2)))


def _first_max(x: tuple[int, ...], l: int):
    for pos, v in enumerate(x, 1):
        if v == l:
            return pos
    return None


def _toggle(subset: tuple[int, ...], pos: int) -> tuple[int, ...]:
    if pos in subset:
        return tuple(p for p in subset if p != pos)
    return tuple(sorted(subset + (pos,)))


def gm_forward(l: int, value):
    """Left element of ``garsia_milne_bij(l, k)`` to its right partner."""
    idx, payload = value
    if idx == 0:
        return 0, ((), payload)
    _, (subset, x) = payload
    pos = _first_max(x, l)  # exists: subset is nonempty and x is l there
    new = _toggle(subset, pos)
    return len(new) // 2, (new, x)


def gm_inverse(l: int, value):
    """Right element of ``garsia_milne_bij(l, k)`` to its left partner."""
    _, (subset, x) = value
    pos = _first_max(x, l)
    if pos is None:
        return 0, x
    new = _toggle(subset, pos)
    return 1, (len(new) // 2, (new, x))


def garsia_milne_bij(l: int, k: int) -> Sijection:
    """``[l-1]^k + sum_{i odd} [l]_i^k  <->  sum_{i even} [l]_i^k``.

    Summands of each parity sum are listed by increasing ``i``, so the entry
    for ``i`` sits at index ``i // 2``.
    """
    if l < 1 or k < 0:
        raise PreconditionError(f"need l >= 1 and k >= 0, got l={l}, k={k}")
    left = Sum(_power(l - 1, k), _parity_sum(l, k, 1))
    right = _parity_sum(l, k, 0)
    return relabel_sij(left, right, lambda v: gm_forward(l, v), lambda v: gm_inverse(l, v),
                       name=f"garsia_milne({l},{k})")


def main_cor_left(l: int, k: int) -> Sum:
    return Sum(*(Product(Binomial(k, i), Alpha(i), _power(l, k - i)) for i in range(k + 1)))


def main_cor_sij(l: int, k: int) -> Sijection:
    """``sum_i Binomial(k, i) x alpha_i x [l]^(k-i)  <->  [l-1]^k``."""
    if l < 1 or k < 0:
        raise PreconditionError(f"need l >= 1 and k >= 0, got l={l}, k={k}")
    gm = garsia_milne_bij(l, k)
    evens, odds = gm.right, gm.left.parts[1]
    plain = gm.left.parts[0]

    # even <-> [l-1]^k + odd  becomes  even - odd <-> [l-1]^k
    swap = relabel_sij(gm.left, Sum(odds, plain),
                       lambda v: (1 - v[0], v[1]), lambda v: (1 - v[0], v[1]),
                       name="swap")
    cancel = rebracket(chain_sij(mirror_sij(gm), swap))

    alpha_first = Sum(*(Product(Alpha(i), Product(Binomial(k, i), _power(l, k - i)))
                        for i in range(k + 1)))
    reorder = relabel_sij(
        main_cor_left(l, k), alpha_first,
        lambda v: (v[0], (v[1][1], (v[1][0], v[1][2]))),
        lambda v: (v[0], (v[1][1][0], v[1][0], v[1][1][1])),
        name="reorder",
    )
    unpad = sum_sij(*(product_sij(identity_sij(Alpha(i)), mirror_sij(padded_tuple_bij(l, k, i)))
                      for i in range(k + 1)))

    def split_parity(v):
        i, (_, p) = v
        return (i % 2, (i // 2, p))

    def join_parity(v):
        parity, (t, p) = v
        return (2 * t + parity, (ALPHA, p))

    by_parity = relabel_sij(unpad.right, cancel.left, split_parity, join_parity,
                            name="by_parity")
    out = chain_sij(reorder, unpad, by_parity, cancel)
    out.name = f"main_cor({l},{k})"
    return out


# --------------------------------------------------------------------------
# small bijections for the final assembly


def alpha_product_sij(i: int, k: int) -> Sijection:
    if not 0 <= i <= k:
        raise PreconditionError(f"need 0 <= i <= k, got i={i}, k={k}")
    return relabel_sij(Product(Alpha(i), Alpha(k - i)), Alpha(k),
                       lambda v: ALPHA, lambda v: (ALPHA, ALPHA),
                       name=f"alpha_product({i},{k})")


def subset_indicator_bij(k: int) -> Sijection:
    """Subsets of [k] (grouped by size) to 1/2 tuples; 2 marks membership."""

    def forward(value):
        _, subset = value
        return tuple(2 if p in subset else 1 for p in range(1, k + 1))

    def backward(x):
        subset = tuple(p for p, v in enumerate(x, 1) if v == 2)
        return len(subset), subset

    return relabel_sij(Sum(*(Binomial(k, i) for i in range(k + 1))), _power(2, k),
                       forward, backward, name=f"subset_indicator({k})")


def subset_complement_bij(k: int, i: int) -> Sijection:
    if not 0 <= i <= k:
        raise PreconditionError(f"need 0 <= i <= k, got i={i}, k={k}")

    def complement(subset):
        return tuple(p for p in range(1, k + 1) if p not in subset)

    return relabel_sij(Binomial(k, i), Binomial(k, k - i), complement, complement,
                       name=f"complement({k},{i})")


def vandermonde_merge_bij(m: int, n: int, k: int) -> Sijection:
    """Interleave an [m-1]-tuple and an [n-1]-tuple into one [m+n-2]-tuple.

    Values up to m-1 stand for positions in the subset; larger values v carry
    v - (m-1) from the second tuple.
    """
    left = Sum(*(Product(Binomial(k, i), _power(m - 1, i), _power(n - 1, k - i))
                 for i in range(k + 1)))

    def forward(value):
        i, (subset, h, v) = value
        chosen = set(subset)
        hs, vs = iter(h), iter(v)
        return tuple(next(hs) if p in chosen else m - 1 + next(vs) for p in range(1, k + 1))

    def backward(x):
        subset = tuple(p for p, c in enumerate(x, 1) if c <= m - 1)
        h = tuple(c for c in x if c <= m - 1)
        v = tuple(c - (m - 1) for c in x if c > m - 1)
        return len(subset), (subset, h, v)

    return relabel_sij(left, _power(m + n - 2, k), forward, backward,
                       name=f"vandermonde({m},{n},{k})")


# --------------------------------------------------------------------------
# the composite


def grand_right(m: int, n: int, k: int) -> Sum:
    return Sum(
        _power(m + n - 2, k),
        Product(Interval(n - 1), _power(m - 2, k)),
        Product(Interval(m - 1), _power(n - 2, k)),
        Product(Interval(m - 1), Interval(n - 1), Alpha(k), _power(2, k)),
    )


def _split_stage(m, n, k):
    left = Product(Interval(m), Interval(n), Walk2DSet(m, n, k))
    right = Sum(*(
        Product(Binomial(k, i),
                Product(Product(Interval(m), Walk1DSet(m, i)),
                        Product(Interval(n), Walk1DSet(n, k - i))))
        for i in range(k + 1)
    ))

    def forward(value):
        a, b, steps = value
        subset, h, v = split_walk(Walk2D(m, n, steps))
        return len(subset.members), (subset.members, ((a, h.steps), (b, v.steps)))

    def backward(value):
        _, (subset, ((a, h), (b, v))) = value
        w = merge_walk(SubsetK(k, subset), Walk1D(m, h), Walk1D(n, v))
        return a, b, w.steps

    return relabel_sij(left, right, forward, backward, name="split")


def _distribute_stage(m, n, k, onedim_right):
    # block order: (tuple, tuple), (tuple, alpha), (alpha, tuple), (alpha, alpha)
    b1 = Sum(*(Product(Binomial(k, i), _power(m - 1, i), _power(n - 1, k - i))
               for i in range(k + 1)))
    b2 = Sum(*(Product(Binomial(k, i), Product(_power(m - 1, i), Alpha(k - i), Interval(n - 1)))
               for i in range(k + 1)))
    b3 = Sum(*(Product(Binomial(k, i), Alpha(i), Interval(m - 1), _power(n - 1, k - i))
               for i in range(k + 1)))
    b4 = Sum(*(Product(Binomial(k, i), Product(Alpha(i), Alpha(k - i)),
                       Product(Interval(m - 1), Interval(n - 1)))
               for i in range(k + 1)))
    right = Sum(b1, b2, b3, b4)

    def forward(value):
        i, (subset, ((s1, u), (s2, w))) = value
        block = 2 * s1 + s2
        if block == 0:
            return 0, (i, (subset, u, w))
        if block == 1:
            return 1, (i, (subset, (u, ALPHA, w[1])))
        if block == 2:
            return 2, (i, (subset, ALPHA, u[1], w))
        return 3, (i, (subset, (ALPHA, ALPHA), (u[1], w[1])))

    def backward(value):
        block, (i, payload) = value
        if block == 0:
            subset, u, w = payload
            return i, (subset, ((0, u), (0, w)))
        if block == 1:
            subset, (u, _, y) = payload
            return i, (subset, ((0, u), (1, (ALPHA, y))))
        if block == 2:
            subset, _, x, w = payload
            return i, (subset, ((1, (ALPHA, x)), (0, w)))
        subset, _, (x, y) = payload
        return i, (subset, ((1, (ALPHA, x)), (1, (ALPHA, y))))

    return relabel_sij(onedim_right, right, forward, backward, name="distribute")


def _second_block(m, n, k, block):
    # sum_i B(k,i) x [m-1]^i x alpha_{k-i} x [n-1]  <->  [n-1] x [m-2]^k
    flip = sum_sij(*(
        product_sij(subset_complement_bij(k, i), identity_sij(part.factors[1]))
        for i, part in enumerate(block.parts)
    ))
    cor = main_cor_sij(m - 1, k)
    to_cor = relabel_sij(
        flip.right, Product(cor.left, Interval(n - 1)),
        lambda v: ((k - v[0], (v[1][0], ALPHA, v[1][1][0])), v[1][1][2]),
        lambda v: (k - v[0][0], (v[0][1][0], (v[0][1][2], ALPHA, v[1]))),
        name="reindex",
    )
    applied = product_sij(cor, identity_sij(Interval(n - 1)))
    swap = relabel_sij(applied.right, Product(Interval(n - 1), _power(m - 2, k)),
                       lambda v: (v[1], v[0]), lambda v: (v[1], v[0]), name="swap")
    return chain_sij(flip, to_cor, applied, swap)


def _third_block(m, n, k, block):
    # sum_i B(k,i) x alpha_i x [m-1] x [n-1]^(k-i)  <->  [m-1] x [n-2]^k
    cor = main_cor_sij(n - 1, k)
    pull = relabel_sij(
        block, Product(Interval(m - 1), cor.left),
        lambda v: (v[1][2], (v[0], (v[1][0], ALPHA, v[1][3]))),
        lambda v: (v[1][0], (v[1][1][0], ALPHA, v[0], v[1][1][2])),
        name="factor_out",
    )
    return chain_sij(pull, product_sij(identity_sij(Interval(m - 1)), cor))


def _fourth_block(m, n, k, block):
    # sum_i B(k,i) x alpha_i x alpha_{k-i} x [m-1] x [n-1]
    #   <->  [m-1] x [n-1] x alpha_k x [2]^k
    squares = Product(Interval(m - 1), Interval(n - 1))
    collapse = sum_sij(*(product_sij(identity_sij(Binomial(k, i)), alpha_product_sij(i, k))
                         for i in range(k + 1)))
    indicator = subset_indicator_bij(k)
    gather = relabel_sij(collapse.right, Product(indicator.left, Alpha(k)),
                         lambda v: ((v[0], v[1][0]), ALPHA),
                         lambda v: (v[0][0], (v[0][1], ALPHA)),
                         name="gather")
    core = chain_sij(collapse, gather, product_sij(indicator, identity_sij(Alpha(k))))
    pull = relabel_sij(block, Product(squares, core.left),
                       lambda v: (v[1][2], (v[0], (v[1][0], v[1][1]))),
                       lambda v: (v[1][0], (v[1][1][0], v[1][1][1], v[0])),
                       name="factor_out")
    flatten = relabel_sij(
        Product(squares, core.right),
        Product(Interval(m - 1), Interval(n - 1), Alpha(k), _power(2, k)),
        lambda v: (v[0][0], v[0][1], ALPHA, v[1][0]),
        lambda v: ((v[0], v[1]), (v[3], ALPHA)),
        name="flatten",
    )
    return chain_sij(pull, product_sij(identity_sij(squares), core), flatten)


def grand_sij(m: int, n: int, k: int) -> Sijection:
    """``[m] x [n] x S_{m,n,k}  <->  [m+n-2]^k + [n-1] x [m-2]^k
    + [m-1] x [n-2]^k + [m-1] x [n-1] x alpha_k x [2]^k``.
    """
    if m < 2 or n < 2 or k < 0:
        raise PreconditionError(f"need m, n >= 2 and k >= 0, got {m}, {n}, {k}")
    split = _split_stage(m, n, k)
    onedim = sum_sij(*(
        product_sij(identity_sij(Binomial(k, i)),
                    product_sij(onedim_sij(m, i), onedim_sij(n, k - i)))
        for i in range(k + 1)
    ))
    distribute = _distribute_stage(m, n, k, onedim.right)
    b1, b2, b3, b4 = distribute.right.parts
    blocks = sum_sij(
        vandermonde_merge_bij(m, n, k),
        _second_block(m, n, k, b2),
        _third_block(m, n, k, b3),
        _fourth_block(m, n, k, b4),
    )
    out = chain_sij(split, onedim, distribute, blocks)
    out.name = f"grand({m},{n},{k})"
    return out
