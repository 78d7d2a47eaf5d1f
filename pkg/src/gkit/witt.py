"""Truncated p-typical Witt vectors over any supported coefficient ring.

Arithmetic is driven by the universal structure polynomials, built once per
(p, N) by the classical ghost-component recursion over the integers

    S_n = (w_n(x) + w_n(y) - sum_{i<n} p^i S_i^{p^(n-i)}) / p^n,

with every division checked to be exact.  Over the integers the ghost maps
are injective, which makes them an independent oracle for the construction;
over F_p-algebras the mod-p reductions of the same polynomials are used
(they are much smaller).

Sizes grow quickly with N: keep N <= 4 for p = 2 and N <= 3 for p = 3.
Measured term counts of the full integer polynomials:

    p=2: S = [2, 3, 8, 40]        P = [1, 3, 9, 51]
    p=3: S = [2, 4, 24]           P = [1, 3, 13]
"""

import threading

from .errors import IndexOutOfRange, InternalError, LengthMismatch
from .polys import IntDomain, SparsePoly

_INT = IntDomain()
_cache = {}
_cache_lock = threading.Lock()


class StructurePolys:
    """Universal polynomials for one (p, N): sums, products, negation,
    Frobenius.  All live in Z[x_0..x_{N-1}, y_0..y_{N-1}] (variables 0..N-1
    are x, N..2N-1 are y); Frobenius only involves the x block."""

    def __init__(self, p, N):
        self.p = p
        self.N = N
        x = [SparsePoly.variable(_INT, 2 * N, i) for i in range(N)]
        y = [SparsePoly.variable(_INT, 2 * N, N + i) for i in range(N)]

        def ghost(vec, n):
            acc = SparsePoly.zero(_INT, 2 * N)
            for i in range(n + 1):
                acc = acc + vec[i].pow(p ** (n - i)).scale(p**i)
            return acc

        sums, prods, negs = [], [], []
        for n in range(N):
            wx, wy = ghost(x, n), ghost(y, n)
            s = wx + wy
            pr = wx * wy
            ng = -wx
            for i in range(n):
                s = s - sums[i].pow(p ** (n - i)).scale(p**i)
                pr = pr - prods[i].pow(p ** (n - i)).scale(p**i)
                ng = ng - negs[i].pow(p ** (n - i)).scale(p**i)
            sums.append(_exact_div_int(s, p**n))
            prods.append(_exact_div_int(pr, p**n))
            negs.append(_exact_div_int(ng, p**n))
        frobs = []
        for n in range(N - 1):
            f = ghost(x, n + 1)
            for i in range(n):
                f = f - frobs[i].pow(p ** (n - i)).scale(p**i)
            frobs.append(_exact_div_int(f, p**n))
        self.sums = sums
        self.prods = prods
        self.negs = negs
        self.frobs = frobs
        self._reduced = None

    def reduced_mod_p(self):
        """The same polynomials with coefficients reduced mod p (zeros dropped)."""
        if self._reduced is None:
            red = lambda polys: [_reduce_mod(q, self.p) for q in polys]
            self._reduced = (
                red(self.sums),
                red(self.prods),
                red(self.negs),
                red(self.frobs),
            )
        return self._reduced

    def term_counts(self):
        return {
            "sums": [len(q.terms) for q in self.sums],
            "prods": [len(q.terms) for q in self.prods],
            "negs": [len(q.terms) for q in self.negs],
            "frobs": [len(q.terms) for q in self.frobs],
        }


def _exact_div_int(poly, k):
    terms = {}
    for e, c in poly.terms.items():
        q, r = divmod(c, k)
        if r:
            raise InternalError(f"inexact division by {k} in structure polynomials")
        if q:
            terms[e] = q
    return SparsePoly(_INT, poly.nvars, terms)


def _reduce_mod(poly, p):
    terms = {}
    for e, c in poly.terms.items():
        c %= p
        if c:
            terms[e] = c
    return SparsePoly(_INT, poly.nvars, terms)


def structure_polys(p, N):
    """Cached structure polynomials; construction is race-free, reads are
    lock-free afterwards."""
    key = (p, N)
    got = _cache.get(key)
    if got is not None:
        return got
    with _cache_lock:
        got = _cache.get(key)
        if got is None:
            got = StructurePolys(p, N)
            _cache[key] = got
    return got


class WittVector:
    """A length-N tuple over a coefficient ring; the ring adapter defines
    the arithmetic of the entries."""

    __slots__ = ("ring", "entries")

    def __init__(self, ring, entries):
        self.ring = ring
        self.entries = tuple(entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __eq__(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        if self.ring != other.ring or len(self) != len(other):
            return False
        return all(self.ring.eq(a, b) for a, b in zip(self.entries, other.entries))

    def __hash__(self):
        return hash((len(self.entries),))

    def is_zero(self):
        return all(self.ring.is_zero(a) for a in self.entries)

    def truncate(self, M):
        if M > len(self):
            raise LengthMismatch(f"cannot extend length {len(self)} to {M}")
        return WittVector(self.ring, self.entries[:M])

    def __repr__(self):
        return f"W{list(self.entries)!r}"


def witt_zero(ring, N):
    return WittVector(ring, (ring.zero(),) * N)


def witt_one(ring, N):
    return teichmuller(ring, ring.one(), N)


def teichmuller(ring, x, N):
    """The multiplicative representative (x, 0, .., 0)."""
    return WittVector(ring, (x,) + (ring.zero(),) * (N - 1))


def _eval_poly(poly, ring, values):
    """Evaluate an integer polynomial at ring elements, caching powers."""
    acc = ring.zero()
    powers = [{} for _ in values]
    for exps, c in poly.terms.items():
        if ring.char_p is not None:
            c %= ring.char_p
            if c == 0:
                continue
        term = ring.from_int(c)
        for v, e in enumerate(exps):
            if e == 0:
                continue
            cache = powers[v]
            got = cache.get(e)
            if got is None:
                got = ring.pow(values[v], e)
                cache[e] = got
            term = ring.mul(term, got)
        acc = ring.add(acc, term)
    return acc


def _binary_op(u, v, polys):
    if len(u) != len(v):
        raise LengthMismatch(f"Witt lengths {len(u)} and {len(v)} differ")
    if u.ring != v.ring:
        raise LengthMismatch("Witt vectors over different rings")
    values = list(u.entries) + list(v.entries)
    return WittVector(u.ring, tuple(_eval_poly(q, u.ring, values) for q in polys))


def _select(ring, sp, which):
    if ring.char_p is not None:
        return sp.reduced_mod_p()[which]
    return (sp.sums, sp.prods, sp.negs, sp.frobs)[which]


def witt_add(u, v):
    sp = structure_polys(_prime_of(u.ring), len(u))
    return _binary_op(u, v, _select(u.ring, sp, 0))


def witt_mul(u, v):
    sp = structure_polys(_prime_of(u.ring), len(u))
    return _binary_op(u, v, _select(u.ring, sp, 1))


def witt_neg(u):
    sp = structure_polys(_prime_of(u.ring), len(u))
    values = list(u.entries) + [u.ring.zero()] * len(u)
    polys = _select(u.ring, sp, 2)
    return WittVector(u.ring, tuple(_eval_poly(q, u.ring, values) for q in polys))


def witt_sub(u, v):
    return witt_add(u, witt_neg(v))


_ambient_prime = {}


def set_ambient_prime(ring, p):
    """Declare the prime for a ring where it is not intrinsic (integers)."""
    _ambient_prime[id(ring)] = p


def _prime_of(ring):
    if ring.char_p is not None:
        return ring.char_p
    got = _ambient_prime.get(id(ring))
    if got is None:
        raise InternalError("integer Witt vectors need set_ambient_prime(ring, p)")
    return got


def ghost(r, w):
    """The r-th ghost component a_0^{p^r} + p a_1^{p^(r-1)} + ... + p^r a_r."""
    if not 0 <= r < len(w):
        raise IndexOutOfRange(f"ghost index {r} outside [0, {len(w) - 1}]")
    ring = w.ring
    p = _prime_of(ring)
    acc = ring.zero()
    for i in range(r + 1):
        term = ring.mul(ring.from_int(p**i), ring.pow(w[i], p ** (r - i)))
        acc = ring.add(acc, term)
    return acc


def verschiebung(w, shifts=1):
    """Prepend zeros: length N becomes N + shifts."""
    return WittVector(w.ring, (w.ring.zero(),) * shifts + w.entries)


def frobenius(w):
    """Over an F_p-algebra: the entrywise p-th power (same length).

    Over other rings the Frobenius polynomials apply and the result is one
    entry shorter, as the top polynomial needs entry N of the input.
    """
    ring = w.ring
    if ring.char_p is not None:
        return WittVector(ring, tuple(ring.pth_power(a) for a in w.entries))
    sp = structure_polys(_prime_of(ring), len(w))
    values = list(w.entries) + [ring.zero()] * len(w)
    return WittVector(ring, tuple(_eval_poly(q, ring, values) for q in sp.frobs))


def frobenius_shift(w):
    """The Frobenius operator W_N -> W_{N-1}."""
    ring = w.ring
    if ring.char_p is not None:
        return WittVector(ring, tuple(ring.pth_power(a) for a in w.entries[:-1]))
    return frobenius(w)


def p_times(w):
    """Multiplication by p; over F_p-algebras this is V(F(w)) = the shifted
    entrywise p-th power."""
    ring = w.ring
    if ring.char_p is not None:
        shifted = (ring.zero(),) + tuple(ring.pth_power(a) for a in w.entries[:-1])
        return WittVector(ring, shifted)
    return int_times(_prime_of(ring), w)


def int_times(n, w):
    """n-fold sum of w (binary doubling)."""
    if n < 0:
        return witt_neg(int_times(-n, w))
    acc = witt_zero(w.ring, len(w))
    base = w
    while n:
        if n & 1:
            acc = witt_add(acc, base)
        n >>= 1
        if n:
            base = witt_add(base, base)
    return acc


def vn_decompose(y, N, ring):
    """Write y = sum x_i * y_i^{p^N} with x_i the monomials t^m,
    m in [0, p^N - 1]^d; pairs with y_i = 0 are dropped."""
    params = ring.params
    out = []
    for m, v in sorted(ring.digits_iter(y, N).items()):
        out.append((params.monomial(m), v))
    return out
