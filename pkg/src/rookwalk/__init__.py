"""Sijections for counting closed rook walks, with brute-force oracles."""

from .signed import (
    LEFT,
    RIGHT,
    Alpha,
    Binomial,
    Interval,
    Negation,
    PaddedTuples,
    Product,
    SetExpr,
    SignedElement,
    Sijection,
    Sum,
    TaggedElement,
    TuplePower,
    VerifyReport,
    Walk1DSet,
    Walk2DSet,
    compose_sij,
    enumerate_set,
    identity_sij,
    mirror_sij,
    product_sij,
    rebracket,
    sum_sij,
    trace_element,
    verify_sijection,
    weight,
)
from .walks import Walk1D, Walk2D, SubsetK, enum_walks_1d, enum_walks_2d, stanley_count

__version__ = "0.1.0"
