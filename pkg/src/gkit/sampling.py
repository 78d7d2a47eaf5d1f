"""Seeded random element generators shared by the selftest and the tests.

Everything takes an explicit random.Random; nothing touches global state,
so identical seeds give identical streams.
"""

from . import cohen
from .basefield import EtaleAlgebra, PrimeParams
from .polys import SparsePoly


def rand_poly(rng, params: PrimeParams, max_deg=2):
    dom = params.domain
    terms = {}
    for _ in range(rng.randrange(1, 4)):
        exps = tuple(rng.randrange(max_deg + 1) for _ in range(params.d))
        c = rng.randrange(params.p)
        if c:
            terms[exps] = c
    return SparsePoly(dom, params.d, terms)


def rand_field_elem(rng, params: PrimeParams, max_deg=2, with_denominator=True):
    num = rand_poly(rng, params, max_deg)
    if with_denominator and rng.randrange(2):
        den = rand_poly(rng, params, max(1, max_deg - 1))
        if den.is_zero():
            den = SparsePoly.constant(params.domain, params.d, 1)
    else:
        den = SparsePoly.constant(params.domain, params.d, 1)
    from .basefield import BaseFieldElem

    return BaseFieldElem(params, num, den)


def rand_nonzero_field_elem(rng, params, max_deg=2):
    while True:
        v = rand_field_elem(rng, params, max_deg)
        if not v.is_zero():
            return v


def rand_etale_elem(rng, algebra: EtaleAlgebra, max_deg=2):
    return algebra.from_coords(
        [rand_field_elem(rng, algebra.params, max_deg) for _ in range(algebra.deg)]
    )


def rand_ambient_elem(rng, ring, max_deg=2):
    from .rings import EtaleRing, FieldRing

    if isinstance(ring, FieldRing):
        return rand_field_elem(rng, ring.params, max_deg)
    if isinstance(ring, EtaleRing):
        return rand_etale_elem(rng, ring.algebra, max_deg)
    raise TypeError(f"no sampler for {ring!r}")


def rand_cohen(rng, ring, level, density=0.6, max_deg=2):
    coords = {}
    for slot in cohen.slot_indices(ring, level):
        if rng.random() < density:
            v = rand_ambient_elem(rng, ring, max_deg)
            if not ring.is_zero(v):
                coords[slot] = v
    return cohen.CohenElem(ring, level, coords)


def rand_base_elem(rng, base, density=0.6, max_deg=2):
    alg = base.algebra()
    return alg.from_components(
        [rand_cohen(rng, base.field_ring, base.m, density, max_deg) for _ in range(base.e)]
    )


def rand_int_witt(rng, ring, length, bound=50):
    from .witt import WittVector

    return WittVector(ring, tuple(rng.randrange(-bound, bound + 1) for _ in range(length)))
