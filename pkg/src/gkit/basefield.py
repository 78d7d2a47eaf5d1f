"""The base field k = F_p(t_1..t_d), its monogenic etale extensions, and
digit expansion along the p-basis {t_1, .., t_d}.

Every element of k (or of an etale extension Q) has a unique expansion

    f = sum over i in [0,p-1]^d of  f_i^p * t^i,

and the map f -> (f_i) is the fundamental primitive everything else builds
on: p-th roots, Cohen-ring extraction, and the splitting of the additive
group along Frobenius all reduce to it.  All arithmetic is exact; equality
of values coincides with equality of representations.
"""

import itertools

from . import linalg
from .errors import DivisionByZero, NotAPthPower, NotAUnit, TypeMismatch
from .polys import FpDomain, SparsePoly, exact_div, poly_gcd, poly_pth_root

_SMALL_PRIMES = {2, 3, 5, 7, 11, 13}


def _is_prime(n):
    if n < 2:
        return False
    if n in _SMALL_PRIMES:
        return True
    return all(n % q for q in range(2, int(n**0.5) + 1))


class PrimeParams:
    """The ambient data (p, d, variable names) fixed for a session."""

    def __init__(self, p, d, names=None):
        if not _is_prime(p):
            raise TypeMismatch(f"{p} is not prime")
        if d < 0:
            raise TypeMismatch("d must be >= 0")
        if names is None:
            names = ["t"] if d == 1 else [f"t{i + 1}" for i in range(d)]
        if len(names) != d or len(set(names)) != d:
            raise TypeMismatch("need d distinct p-basis names")
        self.p = p
        self.d = d
        self.names = tuple(names)
        self.domain = FpDomain(p)

    def __eq__(self, other):
        return (
            isinstance(other, PrimeParams)
            and (self.p, self.d, self.names) == (other.p, other.d, other.names)
        )

    def __hash__(self):
        return hash((self.p, self.d, self.names))

    def __repr__(self):
        return f"PrimeParams(p={self.p}, d={self.d}, names={list(self.names)})"

    # -- element constructors -------------------------------------------------

    def zero(self):
        return BaseFieldElem(self, SparsePoly.zero(self.domain, self.d), self._one_poly())

    def one(self):
        return self.from_int(1)

    def from_int(self, n):
        return BaseFieldElem(
            self,
            SparsePoly.constant(self.domain, self.d, n % self.p),
            self._one_poly(),
        )

    def gen(self, index, exp=1):
        """The p-basis element t_{index+1} (to the given power)."""
        return BaseFieldElem(
            self, SparsePoly.variable(self.domain, self.d, index, exp), self._one_poly()
        )

    def monomial(self, exps):
        """t_1^e1 * ... * t_d^ed for an exponent tuple."""
        return BaseFieldElem(
            self,
            SparsePoly(self.domain, self.d, {tuple(exps): self.domain.one}),
            self._one_poly(),
        )

    def _one_poly(self):
        return SparsePoly.constant(self.domain, self.d, self.domain.one)

    def digit_indices(self):
        """All multi-indices in [0, p-1]^d, lexicographically."""
        return list(itertools.product(range(self.p), repeat=self.d))


class BaseFieldElem:
    """A normalized fraction of polynomials over F_p in t_1..t_d.

    Normalization: numerator and denominator are coprime and the
    denominator's graded-lex leading coefficient is 1; the zero element
    is 0/1.  This makes representations canonical, so == is value equality.
    """

    __slots__ = ("params", "num", "den")

    def __init__(self, params, num, den, normalize=True):
        if den.is_zero():
            raise DivisionByZero("zero denominator")
        if normalize:
            num, den = _normalize_fraction(num, den)
        self.params = params
        self.num = num
        self.den = den

    # -- ring structure -------------------------------------------------------
    #
    # Operands are kept in lowest terms, which lets sums and products avoid
    # gcds on large polynomials: products cross-cancel against the small
    # inputs, and a sum only needs cancellation against gcd(den1, den2).

    def _combine(self, other, sign):
        self._check(other)
        if self.den == other.den and self.den.is_constant():
            num = self.num + other.num if sign > 0 else self.num - other.num
            return _lowest_terms(self.params, num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.is_constant():
            num = self.num * other.den
            num = num + other.num * self.den if sign > 0 else num - other.num * self.den
            return _lowest_terms(self.params, num, self.den * other.den)
        e1 = exact_div(self.den, g)
        e2 = exact_div(other.den, g)
        num = self.num * e2
        num = num + other.num * e1 if sign > 0 else num - other.num * e1
        h = poly_gcd(num, g)
        if not h.is_constant():
            num = exact_div(num, h)
        den = e1 * exact_div(other.den, h)
        return _lowest_terms(self.params, num, den)

    def __add__(self, other):
        return self._combine(other, +1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return BaseFieldElem(self.params, -self.num, self.den, normalize=False)

    def __mul__(self, other):
        self._check(other)
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        g1 = poly_gcd(n1, d2)
        if not g1.is_constant():
            n1, d2 = exact_div(n1, g1), exact_div(d2, g1)
        g2 = poly_gcd(n2, d1)
        if not g2.is_constant():
            n2, d1 = exact_div(n2, g2), exact_div(d1, g2)
        return _lowest_terms(self.params, n1 * n2, d1 * d2)

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return self.params.one()
        # coprime numerator and denominator stay coprime under powers
        return _lowest_terms(self.params, self.num.pow(n), self.den.pow(n))

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return _lowest_terms(self.params, self.den, self.num)

    def scale_int(self, n):
        return BaseFieldElem(
            self.params, self.num.scale(n % self.params.p), self.den, normalize=False
        )

    def is_zero(self):
        return self.num.is_zero()

    def __eq__(self, other):
        if not isinstance(other, BaseFieldElem):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((hash(self.num), hash(self.den)))

    def _check(self, other):
        if not isinstance(other, BaseFieldElem) or other.params != self.params:
            raise TypeMismatch("mixed base-field operands")

    # -- Frobenius structure --------------------------------------------------

    def pth_power(self, iterations=1):
        q = self.params.p**iterations
        return _lowest_terms(self.params, self.num.pow(q), self.den.pow(q))

    def pth_root(self):
        """The g with g^p = self; raises NotAPthPower otherwise."""
        p = self.params.p
        num = self.num.mul(self.den.pow(p - 1))
        return BaseFieldElem(self.params, poly_pth_root(num, p), self.den)

    def digits(self):
        """The unique map i -> f_i with self = sum f_i^p t^i (dense dict)."""
        p, d = self.params.p, self.params.d
        u = self.num.mul(self.den.pow(p - 1))
        parts = {i: {} for i in self.params.digit_indices()}
        for exps, c in u.terms.items():
            idx = tuple(e % p for e in exps)
            rest = tuple(e // p for e in exps)
            parts[idx][rest] = c  # F_p coefficients are their own p-th roots
        dom = self.params.domain
        return {
            idx: BaseFieldElem(self.params, SparsePoly(dom, d, terms), self.den)
            for idx, terms in parts.items()
        }

    # -- display --------------------------------------------------------------

    def __str__(self):
        num = _poly_str(self.num, self.params.names)
        if self.den == self.params._one_poly():
            return num
        den = _poly_str(self.den, self.params.names)
        if "+" in num or "-" in num[1:]:
            num = f"({num})"
        if "+" in den or "-" in den[1:] or "*" in den or "^" in den:
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"<k {self}>"


def _normalize_fraction(num, den):
    if num.is_zero():
        return num, SparsePoly.constant(den.domain, den.nvars, den.domain.one)
    if not den.is_constant():
        g = poly_gcd(num, den)
        if not g.is_constant():
            num = exact_div(num, g)
            den = exact_div(den, g)
    _, lc = den.leading()
    if not den.domain.eq(lc, den.domain.one):
        inv = den.domain.inv(lc)
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


def _lowest_terms(params, num, den):
    """Fraction already in lowest terms: only enforce the leading-1
    denominator convention (and the canonical zero)."""
    if num.is_zero():
        return BaseFieldElem(params, num, params._one_poly(), normalize=False)
    _, lc = den.leading()
    if not den.domain.eq(lc, den.domain.one):
        inv = den.domain.inv(lc)
        num = num.scale(inv)
        den = den.scale(inv)
    return BaseFieldElem(params, num, den, normalize=False)


def _poly_str(poly, names):
    if poly.is_zero():
        return "0"
    out = []
    for exps, c in poly.sorted_terms():
        factors = []
        if c != 1 or all(e == 0 for e in exps):
            factors.append(str(c))
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        out.append("*".join(factors))
    return " + ".join(out)


# ---------------------------------------------------------------------------
# Etale extensions k[y]/(g)
# ---------------------------------------------------------------------------


class EtaleAlgebra:
    """A monogenic etale extension Q = k[y]/(g), g monic separable.

    Elements are coordinate vectors in the power basis {1, y, .., y^(deg-1)};
    separability is validated via gcd(g, g') = 1.  Etale extensions are
    relatively perfect over k, so digit expansion stays available: it is
    computed by solving the semilinear system attached to the Frobenius
    matrix on the power basis.
    """

    def __init__(self, params, coeffs, name="y"):
        coeffs = tuple(coeffs)
        params_one = params.one()
        if len(coeffs) < 2 or coeffs[-1] != params_one:
            raise TypeMismatch("defining polynomial must be monic of degree >= 1")
        self.params = params
        self.coeffs = coeffs
        self.deg = len(coeffs) - 1
        self.name = name
        if not _univar_coprime(coeffs, _univar_derivative(coeffs, params), params):
            raise TypeMismatch("defining polynomial is not separable")
        self._reduction = self._power_table()
        self._frob = None
        self._digit_matrix = None

    def _power_table(self):
        """Coordinates of y^deg .. y^(2deg-2) modulo g."""
        table = []
        row = [-c for c in self.coeffs[:-1]]
        table.append(tuple(row))
        for _ in range(self.deg - 2):
            shifted = [self.params.zero()] + row[:-1]
            top = row[-1]
            row = [a + top * b for a, b in zip(shifted, table[0])]
            table.append(tuple(row))
        return table

    def zero(self):
        return EtaleElem(self, (self.params.zero(),) * self.deg)

    def one(self):
        return self.from_k(self.params.one())

    def from_k(self, c):
        return EtaleElem(self, (c,) + (self.params.zero(),) * (self.deg - 1))

    def gen(self):
        coords = [self.params.zero()] * self.deg
        if self.deg == 1:
            return EtaleElem(self, tuple(self._reduction[0]) if self._reduction else ())
        coords[1] = self.params.one()
        return EtaleElem(self, tuple(coords))

    def from_coords(self, coords):
        coords = tuple(coords)
        if len(coords) != self.deg:
            raise TypeMismatch("coordinate vector has wrong length")
        return EtaleElem(self, coords)

    def frobenius_matrix(self):
        """Column j holds the coordinates of (y^j)^p modulo g."""
        if self._frob is None:
            y = self.gen()
            cols = [self.one().coords]
            power = self.one()
            yp = y**self.params.p
            for _ in range(1, self.deg):
                power = power * yp
                cols.append(power.coords)
            self._frob = cols
        return self._frob

    def digit_matrix(self):
        """The k-linear system expressing digit expansion on Q.

        Unknowns are c[(i, j)] (digit index i, power-basis slot j), ordered
        by digit_indices then j; row ((m, kappa)) says: the kappa-digit of
        the m-th coordinate of sum c[(i,j)]^p * Frob(y^j) * t^i matches.
        """
        if self._digit_matrix is None:
            idxs = self.params.digit_indices()
            frob = self.frobenius_matrix()
            cols = []
            for i in idxs:
                ti = self.params.monomial(i)
                for j in range(self.deg):
                    col = []
                    for m in range(self.deg):
                        entry = frob[j][m] * ti
                        dig = entry.digits()
                        for kappa in idxs:
                            col.append(dig[kappa])
                    cols.append(col)
            self._digit_matrix = [
                [cols[c][r] for c in range(len(cols))] for r in range(len(cols))
            ]
        return self._digit_matrix

    def __eq__(self, other):
        return (
            isinstance(other, EtaleAlgebra)
            and other.params == self.params
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.params, self.coeffs))

    def __repr__(self):
        g = _univar_str(self.coeffs, self.name)
        return f"<etale k[{self.name}]/({g})>"


class EtaleElem:
    __slots__ = ("algebra", "coords")

    def __init__(self, algebra, coords):
        self.algebra = algebra
        self.coords = tuple(coords)

    @property
    def params(self):
        return self.algebra.params

    def __add__(self, other):
        self._check(other)
        return EtaleElem(self.algebra, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        return EtaleElem(self.algebra, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return EtaleElem(self.algebra, tuple(-a for a in self.coords))

    def __mul__(self, other):
        self._check(other)
        deg = self.algebra.deg
        zero = self.params.zero()
        conv = [zero] * (2 * deg - 1)
        for i, a in enumerate(self.coords):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coords):
                if not b.is_zero():
                    conv[i + j] = conv[i + j] + a * b
        out = list(conv[:deg])
        for excess, coeffs in enumerate(self.algebra._reduction):
            c = conv[deg + excess] if deg + excess < len(conv) else zero
            if not c.is_zero():
                out = [a + c * b for a, b in zip(out, coeffs)]
        return EtaleElem(self.algebra, tuple(out))

    def __pow__(self, n):
        out = self.algebra.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def scale_int(self, n):
        return EtaleElem(self.algebra, tuple(c.scale_int(n) for c in self.coords))

    def inverse(self):
        """Extended Euclid against g; NotAUnit when a factor is shared."""
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        params = self.params
        g = list(self.algebra.coeffs)
        f = list(self.coords)
        r0, r1 = g, _univar_trim(f, params)
        s0, s1 = [params.zero()], [params.one()]
        while _univar_deg(r1, params) > 0:
            q, r = _univar_divmod(r0, r1, params)
            r0, r1 = r1, r
            s0, s1 = s1, _univar_sub(s0, _univar_mul(q, s1, params), params)
            if _univar_deg(r1, params) < 0:
                raise NotAUnit("element shares a factor with the defining polynomial")
        c = r1[0]
        if c.is_zero():
            raise NotAUnit("element shares a factor with the defining polynomial")
        inv_c = c.inverse()
        coords = [params.zero()] * self.algebra.deg
        for i, v in enumerate(s1):
            if i < len(coords):
                coords[i] = v * inv_c
        return EtaleElem(self.algebra, tuple(coords))

    def pth_power(self, iterations=1):
        out = self
        for _ in range(iterations):
            frob = self.algebra.frobenius_matrix()
            zero = self.params.zero()
            acc = [zero] * self.algebra.deg
            for j, c in enumerate(out.coords):
                if c.is_zero():
                    continue
                cp = c.pth_power()
                acc = [a + cp * m for a, m in zip(acc, frob[j])]
            out = EtaleElem(self.algebra, tuple(acc))
        return out

    def digits(self):
        """Digit expansion in Q: the semilinear solve on the power basis."""
        params = self.params
        idxs = params.digit_indices()
        matrix = self.algebra.digit_matrix()
        rhs = []
        for m in range(self.algebra.deg):
            dig = self.coords[m].digits()
            for kappa in idxs:
                rhs.append(dig[kappa])
        sol = linalg.solve_square(matrix, rhs, params.zero())
        out = {}
        pos = 0
        for i in idxs:
            coords = tuple(sol[pos : pos + self.algebra.deg])
            pos += self.algebra.deg
            out[i] = EtaleElem(self.algebra, coords)
        return out

    def pth_root(self):
        dig = self.digits()
        zero_idx = (0,) * self.params.d
        for i, v in dig.items():
            if i != zero_idx and not v.is_zero():
                raise NotAPthPower(f"digit at index {i} is nonzero")
        return dig[zero_idx]

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def __eq__(self, other):
        if not isinstance(other, EtaleElem):
            return NotImplemented
        return self.algebra == other.algebra and self.coords == other.coords

    def __hash__(self):
        return hash((self.algebra, self.coords))

    def _check(self, other):
        if not isinstance(other, EtaleElem) or other.algebra != self.algebra:
            raise TypeMismatch("mixed etale operands")

    def __str__(self):
        name = self.algebra.name
        parts = []
        for j in reversed(range(self.algebra.deg)):
            c = self.coords[j]
            if c.is_zero():
                continue
            if j == 0:
                parts.append(str(c))
                continue
            var = name if j == 1 else f"{name}^{j}"
            cs = str(c)
            if cs == "1":
                parts.append(var)
            else:
                if "+" in cs or "-" in cs[1:] or "/" in cs:
                    cs = f"({cs})"
                parts.append(f"{cs}*{var}")
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        return f"<Q {self}>"


# -- dense univariate helpers over k (lists of BaseFieldElem) ----------------


def _univar_deg(f, params):
    for i in reversed(range(len(f))):
        if not f[i].is_zero():
            return i
    return -1


def _univar_trim(f, params):
    d = _univar_deg(f, params)
    return list(f[: d + 1]) if d >= 0 else [params.zero()]


def _univar_sub(a, b, params):
    n = max(len(a), len(b))
    zero = params.zero()
    out = [
        (a[i] if i < len(a) else zero) - (b[i] if i < len(b) else zero)
        for i in range(n)
    ]
    return _univar_trim(out, params)


def _univar_mul(a, b, params):
    zero = params.zero()
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return _univar_trim(out, params)


def _univar_divmod(a, b, params):
    a = _univar_trim(a, params)
    db = _univar_deg(b, params)
    if db < 0:
        raise DivisionByZero("univariate division by zero")
    lead_inv = b[db].inverse()
    zero = params.zero()
    quot = [zero] * max(len(a) - db, 1)
    rem = list(a)
    while _univar_deg(rem, params) >= db:
        dr = _univar_deg(rem, params)
        c = rem[dr] * lead_inv
        quot[dr - db] = c
        for i in range(db + 1):
            rem[dr - db + i] = rem[dr - db + i] - c * b[i]
    return _univar_trim(quot, params), _univar_trim(rem, params)


def _univar_derivative(f, params):
    out = [f[i].scale_int(i) for i in range(1, len(f))]
    return _univar_trim(out, params) if out else [params.zero()]


def _univar_coprime(a, b, params):
    r0, r1 = _univar_trim(a, params), _univar_trim(b, params)
    while _univar_deg(r1, params) > 0:
        _, r = _univar_divmod(r0, r1, params)
        r0, r1 = r1, r
    return _univar_deg(r1, params) == 0 and not r1[0].is_zero()


def _univar_str(coeffs, name):
    parts = []
    for j in reversed(range(len(coeffs))):
        c = coeffs[j]
        if c.is_zero():
            continue
        if j == 0:
            parts.append(str(c))
        else:
            var = name if j == 1 else f"{name}^{j}"
            cs = str(c)
            parts.append(var if cs == "1" else f"{cs}*{var}")
    return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# Digit expansion front end
# ---------------------------------------------------------------------------


class DigitExpansion:
    """The digits f_i of f = sum f_i^p t^i, indexed by [0,p-1]^d."""

    def __init__(self, params, digits):
        self.params = params
        self.digits = digits

    def __getitem__(self, idx):
        return self.digits[tuple(idx)]

    def items(self):
        return [(i, self.digits[i]) for i in self.params.digit_indices()]

    def reconstruct(self):
        total = None
        for i, f_i in self.digits.items():
            term = f_i.pth_power() * _embed_monomial(f_i, i)
            total = term if total is None else total + term
        return total


def _embed_monomial(sample, idx):
    params = sample.params
    mono = params.monomial(idx)
    if isinstance(sample, EtaleElem):
        return sample.algebra.from_k(mono)
    return mono


def pbasis_expand(f):
    """Digit expansion of an element of k or of an EtaleAlgebra."""
    if isinstance(f, BaseFieldElem):
        return DigitExpansion(f.params, f.digits())
    if isinstance(f, EtaleElem):
        return DigitExpansion(f.params, f.digits())
    raise TypeMismatch(f"cannot expand {type(f).__name__}")


def pth_root(f):
    """Inverse of Frobenius on its image; NotAPthPower off the image."""
    if isinstance(f, (BaseFieldElem, EtaleElem)):
        return f.pth_root()
    raise TypeMismatch(f"cannot take p-th root of {type(f).__name__}")
