"""Coefficient-ring adapters.

Witt-vector arithmetic is generic over a minimal ring interface: exact
+, -, *, equality, integer embedding, and (for F_p-algebras) an entrywise
p-th power.  The same core then serves four coefficient rings:

* plain integers (the ghost-component oracle),
* the base field k,
* monogenic etale extensions of k,
* polynomial rings over k in named symbols (Greenberg expansion).

Ambient rings used by the Cohen-ring layer additionally expose the n-fold
Frobenius twist and digit expansion; for a symbolic ring the twist raises
k-coefficients to the p^n-th power and fixes the symbols.
"""

import itertools

from .basefield import EtaleAlgebra, PrimeParams
from .errors import NotAPthPower, TypeMismatch
from .polys import ElemDomain, SparsePoly


class IntegerRing:
    """Plain integers; p is not a zero divisor, so ghost maps are faithful."""

    char_p = None

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, n):
        return a**n

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == 0

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("IntegerRing")

    def __repr__(self):
        return "<ring Z>"


class _AmbientRing:
    """Shared behavior of the rings the Cohen layer can live over."""

    def digits_iter(self, x, n):
        """n-fold digit expansion: sparse map [0,p^n-1]^d -> element."""
        p, d = self.char_p, self.params.d
        if n == 0:
            return {(0,) * d: x} if not self.is_zero(x) else {}
        out = {}
        for i, xi in self.digits1(x).items():
            for m, v in self.digits_iter(xi, n - 1).items():
                out[tuple(a + p * b for a, b in zip(i, m))] = v
        return out

    def pth_root(self, x):
        zero_idx = (0,) * self.params.d
        dig = self.digits1(x)
        for i, v in dig.items():
            if i != zero_idx:
                raise NotAPthPower(f"digit at index {i} is nonzero")
        return dig.get(zero_idx, self.zero())


class FieldRing(_AmbientRing):
    """k itself as a coefficient ring."""

    def __init__(self, params: PrimeParams):
        self.params = params
        self.char_p = params.p

    def zero(self):
        return self.params.zero()

    def one(self):
        return self.params.one()

    def from_int(self, n):
        return self.params.from_int(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, n):
        return a**n

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a.is_zero()

    def pth_power(self, a, n=1):
        return a.pth_power(n)

    def scalar(self, c):
        return c

    def twist(self, a, n):
        return a.pth_power(n)

    def digits1(self, a):
        return {i: v for i, v in a.digits().items() if not v.is_zero()}

    def to_string(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, FieldRing) and other.params == self.params

    def __hash__(self):
        return hash(("FieldRing", self.params))

    def __repr__(self):
        return f"<ring k, p={self.params.p}, d={self.params.d}>"


class EtaleRing(_AmbientRing):
    """A monogenic etale extension as a coefficient ring."""

    def __init__(self, algebra: EtaleAlgebra):
        self.algebra = algebra
        self.params = algebra.params
        self.char_p = self.params.p

    def zero(self):
        return self.algebra.zero()

    def one(self):
        return self.algebra.one()

    def from_int(self, n):
        return self.algebra.from_k(self.params.from_int(n))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def pow(self, a, n):
        return a**n

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a.is_zero()

    def pth_power(self, a, n=1):
        return a.pth_power(n)

    def scalar(self, c):
        return self.algebra.from_k(c)

    def twist(self, a, n):
        return a.pth_power(n)

    def digits1(self, a):
        return {i: v for i, v in a.digits().items() if not v.is_zero()}

    def to_string(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, EtaleRing) and other.algebra == self.algebra

    def __hash__(self):
        return hash(("EtaleRing", self.algebra))

    def __repr__(self):
        return f"<ring {self.algebra!r}>"


class SymbolicRing(_AmbientRing):
    """k[z_1..z_e]: polynomials over k in named symbols.

    The monomial cap guards intermediate blowup during Greenberg expansion;
    exceeding it raises ResourceLimit.
    """

    def __init__(self, params: PrimeParams, symbols, monomial_cap=None):
        self.params = params
        self.char_p = params.p
        self.symbols = tuple(symbols)
        self.index = {s: i for i, s in enumerate(self.symbols)}
        if len(self.index) != len(self.symbols):
            raise TypeMismatch("duplicate symbol names")
        self.monomial_cap = monomial_cap
        self.domain = ElemDomain(params.zero(), params.one())
        self.nvars = len(self.symbols)

    def zero(self):
        return SparsePoly.zero(self.domain, self.nvars)

    def one(self):
        return SparsePoly.constant(self.domain, self.nvars, self.params.one())

    def from_int(self, n):
        return SparsePoly.constant(self.domain, self.nvars, self.params.from_int(n))

    def variable(self, name):
        return SparsePoly.variable(self.domain, self.nvars, self.index[name])

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a.mul(b, cap=self.monomial_cap)

    def pow(self, a, n):
        return a.pow(n, cap=self.monomial_cap)

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a.is_zero()

    def pth_power(self, a, n=1):
        """Absolute Frobenius of the polynomial ring (symbols included)."""
        q = self.params.p**n
        terms = {
            tuple(e * q for e in exps): c.pth_power(n) for exps, c in a.terms.items()
        }
        return SparsePoly(self.domain, self.nvars, terms)

    def scalar(self, c):
        return SparsePoly.constant(self.domain, self.nvars, c)

    def twist(self, a, n):
        """Frobenius twist: p^n-th powers on k-coefficients, symbols fixed."""
        return a.map_coeffs(lambda c: c.pth_power(n))

    def digits1(self, a):
        out = {}
        for exps, c in a.terms.items():
            for i, ci in c.digits().items():
                if ci.is_zero():
                    continue
                poly = out.get(i)
                term = SparsePoly(self.domain, self.nvars, {exps: ci})
                out[i] = term if poly is None else poly + term
        return {i: v for i, v in out.items() if not v.is_zero()}

    def to_string(self, a):
        return format_sym_poly(a, self.symbols)

    def __eq__(self, other):
        return (
            isinstance(other, SymbolicRing)
            and other.params == self.params
            and other.symbols == self.symbols
        )

    def __hash__(self):
        return hash(("SymbolicRing", self.params, self.symbols))

    def __repr__(self):
        return f"<ring k[{', '.join(self.symbols)}]>"


def format_sym_poly(poly, symbols):
    if poly.is_zero():
        return "0"
    parts = []
    for exps, c in poly.sorted_terms():
        factors = []
        cs = str(c)
        if cs != "1" or all(e == 0 for e in exps):
            if "+" in cs or "-" in cs[1:] or "/" in cs:
                cs = f"({cs})"
            factors.append(cs)
        for name, e in zip(symbols, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        parts.append("*".join(factors))
    return " + ".join(parts)


def multi_indices(bound, d):
    """All multi-indices in [0, bound-1]^d in lexicographic order."""
    return list(itertools.product(range(bound), repeat=d))
