"""Sparse multivariate polynomials over a pluggable coefficient domain.

A polynomial is a dict mapping exponent tuples (one entry per variable) to
nonzero coefficients.  The same core drives three instantiations:

* ``FpDomain`` -- coefficients in the prime field F_p (ints in [0, p)),
* ``IntDomain`` -- integer coefficients (universal Witt structure polynomials),
* ``ElemDomain`` -- coefficients in an exact field given by Python objects
  with arithmetic dunders (rational function fields, etale algebras).

Monomial order is graded lexicographic throughout: compare total degree,
then the exponent tuple.
"""

from .errors import InternalError, NotAPthPower, ResourceLimit


class FpDomain:
    """Arithmetic of F_p on plain ints reduced to [0, p)."""

    def __init__(self, p):
        self.p = p
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise InternalError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def from_int(self, n):
        return n % self.p

    def is_zero(self, a):
        return a % self.p == 0

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def __eq__(self, other):
        return isinstance(other, FpDomain) and other.p == self.p

    def __hash__(self):
        return hash(("FpDomain", self.p))


class IntDomain:
    zero = 0
    one = 1

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def from_int(self, n):
        return n

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def __eq__(self, other):
        return isinstance(other, IntDomain)

    def __hash__(self):
        return hash("IntDomain")


class ElemDomain:
    """Coefficients taken from an exact field object (dunder arithmetic)."""

    def __init__(self, zero, one):
        self.zero = zero
        self.one = one

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inverse()

    def from_int(self, n):
        return self.one.scale_int(n) if hasattr(self.one, "scale_int") else self.one * n

    def is_zero(self, a):
        return a == self.zero

    def eq(self, a, b):
        return a == b

    def __eq__(self, other):
        return isinstance(other, ElemDomain) and other.zero == self.zero

    def __hash__(self):
        return hash("ElemDomain")


def grlex_key(exps):
    return (sum(exps), exps)


class SparsePoly:
    __slots__ = ("domain", "nvars", "terms")

    def __init__(self, domain, nvars, terms):
        self.domain = domain
        self.nvars = nvars
        self.terms = terms  # exponent tuple -> nonzero coefficient

    @classmethod
    def zero(cls, domain, nvars):
        return cls(domain, nvars, {})

    @classmethod
    def constant(cls, domain, nvars, c):
        if domain.is_zero(c):
            return cls(domain, nvars, {})
        return cls(domain, nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, domain, nvars, index, exp=1):
        e = [0] * nvars
        e[index] = exp
        return cls(domain, nvars, {tuple(e): domain.one})

    @classmethod
    def from_terms(cls, domain, nvars, items):
        terms = {}
        for exps, c in items:
            if not domain.is_zero(c):
                prev = terms.get(exps)
                c = domain.add(prev, c) if prev is not None else c
                if domain.is_zero(c):
                    terms.pop(exps, None)
                else:
                    terms[exps] = c
        return cls(domain, nvars, terms)

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(all(e == 0 for e in exps) for exps in self.terms)

    def constant_value(self):
        return self.terms.get((0,) * self.nvars, self.domain.zero)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, v):
        return max((e[v] for e in self.terms), default=0)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items(), key=lambda kv: kv[0]))))

    def __add__(self, other):
        dom = self.domain
        terms = dict(self.terms)
        for e, c in other.terms.items():
            prev = terms.get(e)
            s = dom.add(prev, c) if prev is not None else c
            if dom.is_zero(s):
                terms.pop(e, None)
            else:
                terms[e] = s
        return SparsePoly(dom, self.nvars, terms)

    def __neg__(self):
        dom = self.domain
        return SparsePoly(dom, self.nvars, {e: dom.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def mul(self, other, cap=None):
        dom = self.domain
        if not self.terms or not other.terms:
            return SparsePoly(dom, self.nvars, {})
        if isinstance(dom, FpDomain) and (len(self.terms) + len(other.terms)) > 16:
            ok, v = _single_var(self, other)
            if ok and v is not None:
                da, db = self.degree_in(v), other.degree_in(v)
                if da + db <= 8 * (len(self.terms) + len(other.terms)):
                    out = _dense_mul(_to_dense(self, v), _to_dense(other, v), dom.p)
                    return _from_dense(out, dom, self.nvars, v)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        terms = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                c = dom.mul(c1, c2)
                prev = terms.get(e)
                s = dom.add(prev, c) if prev is not None else c
                if dom.is_zero(s):
                    terms.pop(e, None)
                else:
                    terms[e] = s
            if cap is not None and len(terms) > cap:
                raise ResourceLimit(
                    f"intermediate polynomial exceeded {cap} monomials"
                )
        return SparsePoly(dom, self.nvars, terms)

    def __mul__(self, other):
        return self.mul(other)

    def scale(self, c):
        dom = self.domain
        if dom.is_zero(c):
            return SparsePoly(dom, self.nvars, {})
        return SparsePoly(dom, self.nvars, {e: dom.mul(k, c) for e, k in self.terms.items()})

    def pow(self, n, cap=None):
        if n < 0:
            raise InternalError("negative polynomial power")
        result = SparsePoly.constant(self.domain, self.nvars, self.domain.one)
        base = self
        while n:
            if n & 1:
                result = result.mul(base, cap=cap)
            n >>= 1
            if n:
                base = base.mul(base, cap=cap)
        return result

    def __pow__(self, n):
        return self.pow(n)

    def leading(self):
        """Leading (exponent, coefficient) in graded-lex order."""
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]), reverse=True)

    def map_coeffs(self, fn):
        dom = self.domain
        terms = {}
        for e, c in self.terms.items():
            v = fn(c)
            if not dom.is_zero(v):
                terms[e] = v
        return SparsePoly(dom, self.nvars, terms)

    def substitute(self, mapping, cap=None):
        """Substitute whole polynomials for variables.

        ``mapping`` maps a variable index to a SparsePoly over the same
        domain; unmapped variables stay themselves.
        """
        dom = self.domain
        out = SparsePoly.zero(dom, self.nvars)
        power_cache = {}
        for exps, c in self.sorted_terms():
            factor = SparsePoly.constant(dom, self.nvars, c)
            for v, e in enumerate(exps):
                if e == 0:
                    continue
                if v in mapping:
                    key = (v, e)
                    if key not in power_cache:
                        power_cache[key] = mapping[v].pow(e, cap=cap)
                    factor = factor.mul(power_cache[key], cap=cap)
                else:
                    factor = factor.mul(
                        SparsePoly.variable(dom, self.nvars, v, e), cap=cap
                    )
            out = out + factor
        return out


# ---------------------------------------------------------------------------
# F_p-specific helpers: exact division, gcd, p-th roots.
#
# Fractions over F_p(t) drive everything, so the univariate case gets dense
# integer-list fast paths; the generic sparse code handles d >= 2.
# ---------------------------------------------------------------------------


def _active_vars(f):
    out = set()
    for exps in f.terms:
        for v, e in enumerate(exps):
            if e:
                out.add(v)
    return out


def _single_var(f, g):
    """The unique active variable of both polynomials, if there is at most
    one; returns (found, var or None)."""
    if f.nvars == 1:
        if (f.terms and f.degree_in(0)) or (g.terms and g.degree_in(0)):
            return True, 0
        return True, None
    active = _active_vars(f) | _active_vars(g)
    if not active:
        return True, None
    if len(active) == 1:
        return True, next(iter(active))
    return False, None


def _to_dense(f, v):
    deg = f.degree_in(v)
    out = [0] * (deg + 1)
    for exps, c in f.terms.items():
        out[exps[v]] = c
    return out


def _from_dense(coeffs, domain, nvars, v):
    terms = {}
    base = [0] * nvars
    for i, c in enumerate(coeffs):
        if c:
            e = list(base)
            if v is not None:
                e[v] = i
            terms[tuple(e)] = c
    return SparsePoly(domain, nvars, terms)


def _dense_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


_KRONECKER_WIDTH = 8  # bytes per packed coefficient


def _dense_mul(a, b, p):
    """Univariate product via Kronecker substitution: pack coefficients
    into one big integer each, multiply once, unpack mod p.  Coefficient
    sums stay far below 2^64 for the supported primes and degrees."""
    w = _KRONECKER_WIDTH
    pa = int.from_bytes(
        b"".join(c.to_bytes(w, "little") for c in a), "little"
    )
    pb = int.from_bytes(
        b"".join(c.to_bytes(w, "little") for c in b), "little"
    )
    raw = (pa * pb).to_bytes(w * (len(a) + len(b)), "little")
    out = []
    for i in range(len(a) + len(b) - 1):
        out.append(int.from_bytes(raw[i * w : (i + 1) * w], "little") % p)
    return _dense_trim(out)


def _dense_rem(a, b, p):
    """Remainder only (for gcd chains)."""
    a = list(a)
    db = len(b) - 1
    inv = pow(b[db], p - 2, p)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            q = c * inv % p
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - q * b[j]) % p
    del a[db:]
    return _dense_trim(a)


def _dense_divmod(a, b, p):
    a = list(a)
    db = len(b) - 1
    inv = pow(b[db], p - 2, p)
    quot = [0] * max(len(a) - db, 0)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] % p
        if c:
            q = c * inv % p
            quot[i - db] = q
            for j in range(db + 1):
                a[i - db + j] = (a[i - db + j] - q * b[j]) % p
    return quot, _dense_trim([c % p for c in a])


def _dense_gcd(a, b, p):
    a, b = _dense_trim([c % p for c in a]), _dense_trim([c % p for c in b])
    while b:
        a, b = b, _dense_rem(a, b, p)
    if a:
        inv = pow(a[-1], p - 2, p)
        a = [c * inv % p for c in a]
    return a


def exact_div(f, g):
    """Quotient f/g when the division is exact (graded-lex long division)."""
    dom = f.domain
    if g.is_zero():
        raise InternalError("exact division by zero polynomial")
    if isinstance(dom, FpDomain):
        ok, v = _single_var(f, g)
        if ok:
            if v is None:
                return f.scale(dom.inv(g.constant_value()))
            quot, rem = _dense_divmod(_to_dense(f, v), _to_dense(g, v), dom.p)
            if rem:
                raise InternalError("inexact polynomial division")
            return _from_dense(quot, dom, f.nvars, v)
    quot = {}
    rem = dict(f.terms)
    ge, gc = g.leading()
    gc_inv = dom.inv(gc)
    while rem:
        e = max(rem, key=grlex_key)
        c = rem[e]
        qe = tuple(a - b for a, b in zip(e, ge))
        if any(x < 0 for x in qe):
            raise InternalError("inexact polynomial division")
        qc = dom.mul(c, gc_inv)
        quot[qe] = qc
        for e2, c2 in g.terms.items():
            te = tuple(a + b for a, b in zip(qe, e2))
            prev = rem.get(te, dom.zero)
            s = dom.add(prev, dom.neg(dom.mul(qc, c2)))
            if dom.is_zero(s):
                rem.pop(te, None)
            else:
                rem[te] = s
    return SparsePoly(dom, f.nvars, quot)


def _coeffs_in_var(f, v):
    """View f as univariate in variable v: degree -> coefficient polynomial."""
    out = {}
    for exps, c in f.terms.items():
        d = exps[v]
        e2 = exps[:v] + (0,) + exps[v + 1 :]
        coeff = out.setdefault(d, {})
        prev = coeff.get(e2)
        s = f.domain.add(prev, c) if prev is not None else c
        if f.domain.is_zero(s):
            coeff.pop(e2, None)
        else:
            coeff[e2] = s
    return {
        d: SparsePoly(f.domain, f.nvars, terms) for d, terms in out.items() if terms
    }


def _from_var_coeffs(domain, nvars, v, coeffs):
    terms = {}
    for d, poly in coeffs.items():
        for exps, c in poly.terms.items():
            e = exps[:v] + (d,) + exps[v + 1 :]
            terms[e] = c
    return SparsePoly(domain, nvars, terms)


def _max_var(f):
    best = -1
    for exps in f.terms:
        for v in range(f.nvars - 1, best, -1):
            if exps[v] > 0 and v > best:
                best = v
    return best


def _content_in_var(f, v):
    coeffs = list(_coeffs_in_var(f, v).values())
    g = coeffs[0]
    for c in coeffs[1:]:
        g = poly_gcd(g, c)
    return g


def _pseudo_rem(a, b, v):
    """Pseudo-remainder of a by b as univariate polynomials in variable v."""
    ca = _coeffs_in_var(a, v)
    cb = _coeffs_in_var(b, v)
    db = max(cb)
    lb = cb[db]
    while ca:
        da = max(ca)
        if da < db:
            break
        la = ca.pop(da)
        # a <- lb*a - la*x^(da-db)*b
        new = {}
        for d, c in ca.items():
            new[d] = c * lb
        for d, c in cb.items():
            if d == db:
                continue
            shift = d + da - db
            prev = new.get(shift)
            t = la * c
            new[shift] = (prev - t) if prev is not None else -t
        ca = {d: c for d, c in new.items() if not c.is_zero()}
    return _from_var_coeffs(a.domain, a.nvars, v, ca)


def monic(f):
    """Scale so the graded-lex leading coefficient is 1."""
    if f.is_zero():
        return f
    _, lc = f.leading()
    if f.domain.eq(lc, f.domain.one):
        return f
    return f.scale(f.domain.inv(lc))


def poly_gcd(f, g):
    """GCD over F_p[x_1..x_d]: dense Euclid when univariate, primitive
    pseudo-remainder sequences otherwise.

    The result is normalized to leading coefficient 1.
    """
    if f.is_zero():
        return monic(g)
    if g.is_zero():
        return monic(f)
    if f.is_constant() or g.is_constant():
        return SparsePoly.constant(f.domain, f.nvars, f.domain.one)
    ok, uv = _single_var(f, g)
    if ok:
        p = f.domain.p
        out = _dense_gcd(_to_dense(f, uv), _to_dense(g, uv), p)
        return _from_dense(out, f.domain, f.nvars, uv)
    v = max(_max_var(f), _max_var(g))
    if f.degree_in(v) == 0 or g.degree_in(v) == 0:
        # v occurs in only one of them: gcd cannot involve v.
        if f.degree_in(v) == 0:
            return poly_gcd(f, _content_in_var(g, v))
        return poly_gcd(_content_in_var(f, v), g)
    cf = _content_in_var(f, v)
    cg = _content_in_var(g, v)
    a = exact_div(f, cf)
    b = exact_div(g, cg)
    if a.degree_in(v) < b.degree_in(v):
        a, b = b, a
    while not b.is_zero() and b.degree_in(v) > 0:
        r = _pseudo_rem(a, b, v)
        if not r.is_zero():
            r = exact_div(r, _content_in_var(r, v))
        a, b = b, r
    if b.is_zero():
        head = exact_div(a, _content_in_var(a, v))
    else:
        # nonzero remainder free of v: the primitive parts are coprime
        head = SparsePoly.constant(f.domain, f.nvars, f.domain.one)
    return monic(poly_gcd(cf, cg) * head)


def poly_pth_root(f, p):
    """p-th root of a polynomial over F_p (F_p coefficients are fixed points)."""
    terms = {}
    for exps, c in f.terms.items():
        if any(e % p for e in exps):
            raise NotAPthPower(f"monomial {exps} has exponent not divisible by {p}")
        terms[tuple(e // p for e in exps)] = c
    return SparsePoly(f.domain, f.nvars, terms)
