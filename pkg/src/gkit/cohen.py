"""Truncated Cohen rings C_{n+1}(Q) in canonical coordinates.

C_{n+1}(Q) sits inside the length-(n+1) Witt vectors over the n-th
Frobenius twist of Q.  For the supported ambients the twist collapses onto
Q itself: the Witt-vector image of Q carries entrywise p^n-th powers, and
the distinguished generators become Teichmuller lifts of the p-basis
monomials.  Every element then has a unique canonical form

    sum over slots (j, i) of the vector with  x_j(i)^{p^n} * t^{i p^j}
    in position j and zeros elsewhere,

where j runs over Witt positions 0..n and i over [0, p^{n-j}-1]^d.  A
CohenElem stores exactly the coordinates x_j(i); `to_witt` realizes the sum
and `extract` inverts it, failing with NotInCohen off the subring.

For a symbolic ambient k[z_1..z_e] the twist raises k-coefficients to the
p^n-th power and fixes the symbols, so extraction tests digits of the
coefficients only.
"""

from .errors import (
    InternalError,
    LevelMismatch,
    NotAPthPower,
    NotInCohen,
    NotInImage,
    TypeMismatch,
)
from .rings import multi_indices
from .witt import WittVector, p_times, witt_add, witt_mul, witt_neg, witt_sub


class CohenElem:
    """Canonical coordinates of an element of C_{n+1}(Q).

    ``coords`` maps (j, i) to a nonzero ambient element, j the Witt
    position, i a multi-index tuple in [0, p^{n-j}-1]^d.
    """

    __slots__ = ("ring", "level", "coords")

    def __init__(self, ring, level, coords):
        self.ring = ring
        self.level = level  # n + 1
        clean = {}
        n = level - 1
        d = ring.params.d
        for (j, i), x in coords.items():
            i = tuple(i)
            if not 0 <= j <= n:
                raise LevelMismatch(f"position {j} outside level {level}")
            if len(i) != d or any(c < 0 or c >= ring.char_p ** (n - j) for c in i):
                raise LevelMismatch(f"index {i} not allowed at position {j}")
            if not ring.is_zero(x):
                clean[(j, i)] = x
        self.coords = clean

    @classmethod
    def zero(cls, ring, level):
        return cls(ring, level, {})

    @classmethod
    def single(cls, ring, level, j, i, x):
        return cls(ring, level, {(j, tuple(i)): x})

    def is_zero(self):
        return not self.coords

    def support_min_position(self):
        return min((j for j, _ in self.coords), default=self.level)

    def sorted_coords(self):
        return sorted(self.coords.items())

    def __eq__(self, other):
        if not isinstance(other, CohenElem):
            return NotImplemented
        if self.ring != other.ring or self.level != other.level:
            return False
        if set(self.coords) != set(other.coords):
            return False
        return all(self.ring.eq(x, other.coords[s]) for s, x in self.coords.items())

    def __hash__(self):
        return hash((self.level, tuple(sorted(self.coords))))

    def __repr__(self):
        parts = ", ".join(
            f"x_{j}{list(i)}={self.ring.to_string(x)}" for (j, i), x in self.sorted_coords()
        )
        return f"<C_{self.level} {{{parts}}}>"


def slot_indices(ring, level):
    """All (j, i) slots of C_level, position-major, indices lexicographic."""
    p, d = ring.char_p, ring.params.d
    n = level - 1
    out = []
    for j in range(level):
        for i in multi_indices(p ** (n - j), d):
            out.append((j, i))
    return out


def _single_vector(ring, level, j, i, x):
    n = level - 1
    entries = [ring.zero()] * level
    mono = ring.params.monomial(tuple(c * ring.char_p**j for c in i))
    entries[j] = ring.mul(ring.twist(x, n), ring.scalar(mono))
    return WittVector(ring, entries)


def to_witt(c: CohenElem) -> WittVector:
    """Witt-sum of the single-slot vectors of the canonical form."""
    acc = WittVector(c.ring, (c.ring.zero(),) * c.level)
    for (j, i), x in c.sorted_coords():
        acc = witt_add(acc, _single_vector(c.ring, c.level, j, i, x))
    return acc


def extract(w: WittVector, max_position=None) -> CohenElem:
    """Invert the canonical form: greedy level-by-level digit extraction.

    At position j the residual entry must expand as
    sum_m c_m^{p^n} t^m with c_m = 0 unless p^j divides m componentwise;
    the surviving digits are the coordinates x_j(i), i = m / p^j.  Their
    realization is Witt-subtracted and the next position processed.  Any
    forbidden digit, or a nonzero final residual, raises NotInCohen.

    ``max_position`` stops after that position, ignoring what remains above
    it (used by exact p-division, where the top of the vector is free).
    """
    ring = w.ring
    level = len(w)
    n = level - 1
    p = ring.char_p
    top = n if max_position is None else max_position
    residual = w
    coords = {}
    for j in range(top + 1):
        entry = residual[j]
        if ring.is_zero(entry):
            continue
        digits = ring.digits_iter(entry, n)
        part = {}
        for m, cval in sorted(digits.items()):
            if any(comp % p**j for comp in m):
                raise NotInCohen(
                    f"position {j}: digit at index {m} is not divisible by p^{j}"
                )
            i = tuple(comp // p**j for comp in m)
            part[(j, i)] = cval
        coords.update(part)
        part_elem = CohenElem(ring, level, part)
        residual = witt_sub(residual, to_witt(part_elem))
        if not ring.is_zero(residual[j]):
            raise InternalError("digit extraction did not clear its position")
    if max_position is None and not residual.is_zero():
        raise NotInCohen("nonzero residual after the last position")
    return CohenElem(ring, level, coords)


def _closure_op(op, *args):
    try:
        return op(*args)
    except NotInCohen as exc:
        raise InternalError(f"Cohen subring closure violated: {exc}") from exc


def cohen_add(a: CohenElem, b: CohenElem) -> CohenElem:
    _check_pair(a, b)
    return _closure_op(lambda: extract(witt_add(to_witt(a), to_witt(b))))


def cohen_sub(a: CohenElem, b: CohenElem) -> CohenElem:
    _check_pair(a, b)
    return _closure_op(lambda: extract(witt_sub(to_witt(a), to_witt(b))))


def cohen_mul(a: CohenElem, b: CohenElem) -> CohenElem:
    _check_pair(a, b)
    return _closure_op(lambda: extract(witt_mul(to_witt(a), to_witt(b))))


def cohen_neg(a: CohenElem) -> CohenElem:
    return _closure_op(lambda: extract(witt_neg(to_witt(a))))


def cohen_from_int(ring, level, value):
    acc = CohenElem.zero(ring, level)
    one = CohenElem.single(ring, level, 0, (0,) * ring.params.d, ring.one())
    neg = value < 0
    for _ in range(abs(value) % ring.char_p**level):
        acc = cohen_add(acc, one)
    return cohen_neg(acc) if neg else acc


def _check_pair(a, b):
    if a.ring != b.ring or a.level != b.level:
        raise TypeMismatch("Cohen operands over different rings or levels")


def ver_embed(c: CohenElem, target_level) -> CohenElem:
    """The additive embedding C_{m+1} -> C_{n+1}: slot (j, i) moves to
    (j + n - m, i); index ranges match on the nose."""
    if target_level < c.level:
        raise LevelMismatch(f"cannot embed level {c.level} into {target_level}")
    shift = target_level - c.level
    coords = {(j + shift, i): x for (j, i), x in c.coords.items()}
    return CohenElem(c.ring, target_level, coords)


def ver_project(c: CohenElem, source_level) -> CohenElem:
    """Inverse of ver_embed on its image."""
    shift = c.level - source_level
    if shift < 0:
        raise LevelMismatch("source level exceeds element level")
    if c.support_min_position() < shift:
        raise NotInImage(f"support below position {shift}")
    coords = {(j - shift, i): x for (j, i), x in c.coords.items()}
    return CohenElem(c.ring, source_level, coords)


def p_pow_times(c: CohenElem, exponent=1) -> CohenElem:
    """p^exponent * c, computed at the vector level."""
    w = to_witt(c)
    for _ in range(exponent):
        w = p_times(w)
    return _closure_op(lambda: extract(w))


def solve_p_division(target: CohenElem, exponent) -> CohenElem:
    """Find c with p^exponent * c = target, target supported at positions
    >= exponent (the Verschiebung-embedded copy of the lower level).

    Multiplication by p^e shifts the Witt vector and raises entries to the
    p^e-th power, so the bottom n-e+1 entries of any solution are forced:
    entry j is the e-fold p-th root of target's entry j+e.  Extracting
    canonical coordinates of that partial vector through position n-e (the
    entries above are free and set to zero slot-wise) yields a member of
    the subring whose p^e-multiple is exactly the target; the final
    verification multiplies back.

    Requires a relatively perfect ambient (k or etale): the p-th roots must
    exist and be unique.
    """
    ring = target.ring
    level = target.level
    n = level - 1
    e = exponent
    if e < 0 or e > n:
        raise NotInImage(f"exponent {e} outside [0, {n}]")
    if target.support_min_position() < e:
        raise NotInImage(f"target has support below position {e}")
    if e == 0:
        return target
    w = to_witt(target)
    forced = []
    for j in range(level - e):
        entry = w[j + e]
        for _ in range(e):
            try:
                entry = ring.pth_root(entry)
            except NotAPthPower as exc:
                raise NotInImage(f"entry {j + e} is not a p^{e}-th power: {exc}")
        forced.append(entry)
    padded = WittVector(ring, tuple(forced) + (ring.zero(),) * e)
    c = extract(padded, max_position=level - 1 - e)
    check = to_witt(c)
    for _ in range(e):
        check = p_times(check)
    if check != w:
        raise InternalError("p-division verification failed")
    return c


def residue(c: CohenElem):
    """The image in C_{n+1}(k)/(p) = k: reassemble the position-0 digits."""
    ring = c.ring
    n = c.level - 1
    acc = ring.zero()
    for (j, i), x in c.coords.items():
        if j == 0:
            acc = ring.add(acc, ring.mul(ring.twist(x, n), ring.scalar(ring.params.monomial(i))))
    return acc


def teich_lift(ring, level, value) -> CohenElem:
    """The canonical lift of an ambient element: position-0 coordinates are
    its n-fold digits, higher positions vanish.  Its residue is the value
    again.  (The Teichmuller vector (value, 0, .., 0) itself usually lies
    outside the subring; on p-basis monomials the two lifts agree.)"""
    n = level - 1
    coords = {(0, m): x for m, x in ring.digits_iter(value, n).items()}
    return CohenElem(ring, level, coords)


def truncate_level(c: CohenElem, target_level) -> CohenElem:
    """The quotient map C_{n+1} -> C_{m+1} (m <= n): truncate the Witt
    vector and re-extract at the lower level."""
    if target_level > c.level:
        raise LevelMismatch("truncation target exceeds level")
    if target_level == c.level:
        return c
    w = to_witt(c).truncate(target_level)
    return _closure_op(lambda: extract(w))
