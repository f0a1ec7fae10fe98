from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from rookwalk.maps import garsia_milne_bij, onedim_sij
from rookwalk.signed import (
    ALPHA,
    LEFT,
    RIGHT,
    Alpha,
    Binomial,
    Interval,
    Negation,
    PaddedTuples,
    PreconditionError,
    Product,
    SignedElement,
    SijectionDefect,
    Sijection,
    Sum,
    TaggedElement,
    TuplePower,
    Walk1DSet,
    Walk2DSet,
    compose_sij,
    enumerate_set,
    identity_sij,
    mirror_sij,
    product_sij,
    rebracket,
    relabel_sij,
    sum_sij,
    swap_images,
    trace_element,
    verify_sijection,
    weight,
)


def test_interval_enumeration():
    assert list(enumerate_set(Interval(3))) == [SignedElement(j, 1) for j in (1, 2, 3)]
    assert list(Interval(0)) == []


def test_alpha_is_a_signed_singleton():
    assert list(enumerate_set(Alpha(3))) == [SignedElement(ALPHA, -1)]
    assert weight(Alpha(2)) == 1
    assert weight(Alpha(7)) == -1


def test_product_signs():
    elems = list(enumerate_set(Product(Alpha(1), Interval(2))))
    assert [e.sign for e in elems] == [-1, -1]
    assert [e.value for e in elems] == [(ALPHA, 1), (ALPHA, 2)]


def test_weights_by_hand():
    assert weight(Interval(5)) == 5
    assert weight(Sum(TuplePower(Interval(2), 2), Negation(Interval(4)))) == 0
    assert weight(TuplePower(Alpha(1), 3)) == -1
    assert weight(TuplePower(Interval(0), 0)) == 1


def test_binomial_order_is_lexicographic():
    assert [v for v, _ in Binomial(4, 2)] == [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    assert list(Binomial(2, 3)) == []


def test_padded_tuples():
    values = [v for v, _ in PaddedTuples(2, 2, 1)]
    assert values == [((1,), (2, 1)), ((1,), (2, 2)), ((2,), (1, 2)), ((2,), (2, 2))]
    assert PaddedTuples(3, 4, 2).size() == comb(4, 2) * 9 == len(list(PaddedTuples(3, 4, 2)))


def test_sum_keeps_repeated_summands_apart():
    values = [v for v, _ in Sum(Interval(2), Interval(2))]
    assert values == [(0, 1), (0, 2), (1, 1), (1, 2)]
    assert len(set(values)) == 4


def test_walk_sets():
    assert [v for v, _ in Walk1DSet(3, 2)] == [(1, 2), (2, 1)]
    assert [v for v, _ in Walk2DSet(2, 2, 2)] == [(("h", 1), ("h", 1)), (("v", 1), ("v", 1))]
    assert Walk2DSet(3, 3, 3).contains((("h", 1), ("h", 1), ("h", 1)))
    assert not Walk2DSet(3, 3, 3).contains((("h", 1), ("h", 1), ("v", 1)))


def test_operators_build_expressions():
    a, b = Interval(2), Alpha(1)
    assert a + b == Sum(a, b)
    assert a - b == Sum(a, Negation(b))
    assert a * b == Product(a, b)
    assert -a == Negation(a)


# random small expressions for the algebraic laws
atoms = st.one_of(
    st.integers(0, 4).map(Interval),
    st.integers(0, 6).map(Alpha),
    st.tuples(st.integers(0, 4), st.integers(0, 4)).map(lambda t: Binomial(*t)),
    st.tuples(st.integers(2, 4), st.integers(0, 3)).map(lambda t: Walk1DSet(*t)),
    st.tuples(st.integers(1, 3), st.integers(0, 3), st.integers(0, 3)).map(
        lambda t: PaddedTuples(*t)),
)
exprs = st.recursive(
    atoms,
    lambda sub: st.one_of(
        st.tuples(sub, sub).map(lambda t: Sum(*t)),
        st.tuples(sub, sub).map(lambda t: Product(*t)),
        sub.map(Negation),
        st.tuples(sub, st.integers(0, 2)).map(lambda t: TuplePower(*t)),
    ),
    max_leaves=4,
)


@settings(max_examples=150, deadline=None)
@given(exprs, exprs)
def test_weight_is_additive_and_multiplicative(a, b):
    assert weight(Sum(a, b)) == weight(a) + weight(b)
    assert weight(Product(a, b)) == weight(a) * weight(b)
    assert weight(Negation(a)) == -weight(a)


@settings(max_examples=150, deadline=None)
@given(exprs)
def test_enumeration_is_deterministic_duplicate_free_and_consistent(e):
    first = list(e)
    assert first == list(e)
    values = [v for v, _ in first]
    assert len(values) == len(set(values)) == e.size()
    for v, s in first:
        assert e.contains(v)
        assert e.sign(v) == s


def test_contains_rejects_foreign_values():
    assert not Interval(3).contains(4)
    assert not Interval(3).contains(True)
    assert not Sum(Interval(1), Interval(1)).contains((2, 1))
    assert not Product(Interval(2), Alpha(0)).contains((1,))
    assert not Binomial(3, 2).contains((2, 2))


# --------------------------------------------------------------------------
# sijections


def test_identity_verifies():
    report = verify_sijection(identity_sij(Interval(3)))
    assert report.ok
    assert (report.left_weight, report.right_weight, report.carrier_size) == (3, 3, 6)


def test_onedim_report_weights():
    report = verify_sijection(onedim_sij(3, 2))
    assert report.ok and report.left_weight == report.right_weight == 6


def test_swapped_images_are_caught():
    s = identity_sij(Interval(3))
    bad = swap_images(s, (LEFT, 1), (LEFT, 2))
    report = verify_sijection(bad)
    assert not report.involution_ok and not report.ok
    assert report.first_failure == TaggedElement(LEFT, SignedElement(1, 1))


def test_sign_violation_is_caught():
    # pairs 1 <-> 2 on the same side, but both are positive
    def fn(side, value):
        return side, 3 - value

    report = verify_sijection(Sijection(Interval(2), Interval(0), fn))
    assert report.involution_ok and report.totality_ok
    assert not report.weight_contract_ok


def test_escape_from_carrier_is_caught():
    s = relabel_sij(Interval(2), Interval(2), lambda v: v + 1, lambda v: v - 1)
    report = verify_sijection(s)
    assert not report.totality_ok


def test_crashing_map_is_a_totality_failure():
    def fn(side, value):
        raise KeyError(value)

    report = verify_sijection(Sijection(Interval(1), Interval(1), fn))
    assert not report.totality_ok
    assert "KeyError" in report.failure_reason


def test_sum_of_identities_is_identity():
    s = sum_sij(identity_sij(Interval(2)), identity_sij(Alpha(1)))
    assert s.left == s.right == Sum(Interval(2), Alpha(1))
    for v, _ in s.left:
        assert s.apply(LEFT, v) == (RIGHT, v)
    report = verify_sijection(s)
    assert report.ok and report.left_weight == weight(Interval(2)) + weight(Alpha(1))


def test_sum_of_onedim_maps():
    assert verify_sijection(sum_sij(onedim_sij(2, 0), onedim_sij(2, 1))).ok


def test_product_of_identities_is_identity():
    s = product_sij(identity_sij(Interval(2)), identity_sij(Interval(3)))
    for v, _ in s.left:
        assert s.apply(LEFT, v) == (RIGHT, v)


def test_product_with_onedim():
    s = product_sij(onedim_sij(3, 1), identity_sij(Interval(2)))
    assert verify_sijection(s).ok


def test_product_sign_when_both_cross():
    s = product_sij(identity_sij(Alpha(1)), identity_sij(Alpha(1)))
    x = s.tag(LEFT, (ALPHA, ALPHA))
    y = s(x)
    assert y.side == RIGHT and y.element.sign == x.element.sign == 1


@pytest.mark.parametrize("m,i", [(2, 2), (3, 3), (4, 2), (5, 3)])
def test_products_of_onedim_maps(m, i):
    assert verify_sijection(product_sij(onedim_sij(m, i), onedim_sij(3, 2))).ok


def test_compose_identities():
    s = compose_sij(identity_sij(Interval(3)), identity_sij(Interval(3)))
    for v, _ in s.left:
        assert s.apply(LEFT, v) == (RIGHT, v)
    assert verify_sijection(s).ok


@pytest.mark.parametrize("m,i", [(3, 2), (3, 3), (4, 4), (5, 3)])
def test_compose_with_mirror(m, i):
    f = onedim_sij(m, i)
    s = compose_sij(f, mirror_sij(f))
    assert verify_sijection(s).ok
    for v, _ in s.left:
        side, _ = f.apply(LEFT, v)
        if side == RIGHT:
            assert s.apply(LEFT, v) == (RIGHT, v)


def test_compose_requires_matching_middle():
    with pytest.raises(PreconditionError):
        compose_sij(identity_sij(Interval(2)), identity_sij(Interval(3)))


def test_compose_detects_runaway_chase():
    # both maps break the contract; the chase bounces around B forever
    bad_f = {(LEFT, 1): (RIGHT, 1), (RIGHT, 1): (RIGHT, 2), (RIGHT, 2): (RIGHT, 1)}
    f = Sijection(Interval(1), Interval(2), lambda side, v: bad_f[side, v], name="f")
    g = Sijection(Interval(2), Interval(0), lambda side, v: (side, v), name="g")
    with pytest.raises(SijectionDefect):
        compose_sij(f, g).apply(LEFT, 1)


def test_compose_flattens_chains():
    f = identity_sij(Interval(2))
    s = compose_sij(compose_sij(f, f), compose_sij(f, f))
    assert len(s.stages) == 4


def test_rebracket_requires_sum():
    with pytest.raises(PreconditionError):
        rebracket(identity_sij(Interval(2)))


def test_rebracket_degenerate():
    a = Interval(3)
    s = relabel_sij(a, Sum(a, Interval(0)), lambda v: (0, v), lambda v: v[1])
    r = rebracket(s)
    assert r.left == Sum(a, Negation(a))
    assert r.right == Interval(0)
    report = verify_sijection(r)
    assert report.ok and report.left_weight == report.right_weight == 0
    assert r.apply(LEFT, (0, 2)) == (LEFT, (1, 2))


def test_rebracket_of_mirrored_garsia_milne():
    gm = garsia_milne_bij(3, 3)
    flipped = mirror_sij(gm)
    r = rebracket(flipped)
    assert verify_sijection(r).ok
    assert r.left == Sum(gm.right, Negation(gm.left.parts[0]))


@pytest.mark.parametrize("l,k", [(1, 2), (2, 3), (3, 2)])
def test_rebracket_preserves_the_involution(l, k):
    s = mirror_sij(garsia_milne_bij(l, k))
    r = rebracket(s)
    assert verify_sijection(s).ok and verify_sijection(r).ok
    # same pairing on the underlying union, just retagged
    pairs = 0
    for v, _ in r.left:
        idx, w = v
        img_side, img = r.apply(LEFT, v)
        inner = s.apply(LEFT, w) if idx == 0 else s.apply(RIGHT, (0, w))
        if img_side == RIGHT:
            assert inner == (RIGHT, (1, img))
        else:
            assert inner == ((LEFT, img[1]) if img[0] == 0 else (RIGHT, (0, img[1])))
        pairs += 1
    assert pairs == r.left.size()


def test_trace_through_identity():
    s = identity_sij(Interval(2))
    path = trace_element(s, s.tag(LEFT, 2))
    assert path == [s.tag(LEFT, 2), s.tag(RIGHT, 2)]


def test_trace_rejects_outsiders():
    s = identity_sij(Interval(2))
    with pytest.raises(PreconditionError):
        trace_element(s, TaggedElement(LEFT, SignedElement(5, 1)))
