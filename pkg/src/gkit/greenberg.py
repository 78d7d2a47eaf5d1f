"""The twisted Greenberg transform of affine schemes over a supported base,
as explicit polynomial systems over k.

Given X = Spec A[x_1..x_v]/(f_1..f_w), each variable is replaced by the
generic point of the scheme of elements of A: one Cohen component per
module summand, with a fresh symbol for every canonical coordinate slot.
Evaluating each f in base-ring arithmetic over the symbolic polynomial
ring and reading off canonical coordinates yields one k-equation per
coordinate.  The k-solutions of the output system biject with X(A);
`point_to_coords` and `coords_to_point` transport points both ways.

Weil restriction along the absolute Frobenius expands a system over k into
p^d times as many variables by substituting z = sum z_i T^i in
Q^(p) = Q[T_1..T_d]/(T_j^p - t_j) and collecting on the T-basis; iterating
it realizes finite stages of relative perfection.
"""

from concurrent.futures import ThreadPoolExecutor

from . import cohen
from .base import ArtinianBase
from .basefield import pbasis_expand
from .errors import NotASolution, ResourceLimit, TypeMismatch, UnsupportedBase
from .polys import SparsePoly
from .rings import SymbolicRing, format_sym_poly, multi_indices

DEFAULT_MONOMIAL_CAP = 20_000
DEFAULT_SYMBOL_CAP = 5_000


class AffinePresentation:
    """An affine scheme over A: variables and equations with BaseElem
    coefficients (as dicts exponent-tuple -> coefficient)."""

    def __init__(self, base: ArtinianBase, variables, equations):
        self.base = base
        self.variables = tuple(variables)
        self.equations = [dict(eq) for eq in equations]

    def evaluate(self, eq_index, algebra, values):
        eq = self.equations[eq_index]
        acc = algebra.zero()
        for exps, coeff in sorted(eq.items()):
            term = algebra.embed(coeff)
            for v, e in enumerate(exps):
                if e:
                    term = term * values[v] ** e
            acc = acc + term
        return acc

    def evaluate_all(self, algebra, values):
        return [self.evaluate(i, algebra, values) for i in range(len(self.equations))]

    def conjunction(self, other):
        """The fiber product over the ambient affine space: same variables,
        union of equations."""
        if other.base != self.base or other.variables != self.variables:
            raise TypeMismatch("conjunction needs matching base and variables")
        return AffinePresentation(
            self.base, self.variables, self.equations + other.equations
        )


class GreenbergPresentation:
    """The emitted polynomial system over k.

    symbols: ordered coordinate names (stage 0:
    z<var>.<position>.<i1_.._id>.<component>; each restriction stage
    appends .s<i1_.._id>).  equations: SparsePoly over k in those symbols,
    one per canonical coordinate of each input equation (position, then
    multi-index, then component), then split p^d-fold per stage.
    """

    def __init__(self, base, variables, symbols, equations, stage, layout, stages):
        self.base = base
        self.params = base.params
        self.variables = variables
        self.symbols = tuple(symbols)
        self.equations = equations
        self.stage = stage
        self.layout = layout  # var -> list of (symbol index, w, j, i), stage-0
        self.stages = stages  # per stage: list of child-index lists per parent

    def equation_strings(self):
        return [format_sym_poly(q, self.symbols) for q in self.equations]

    def to_json(self):
        return {
            "symbols": list(self.symbols),
            "equations": self.equation_strings(),
            "stage": self.stage,
        }

    def substitute_values(self, values):
        """Evaluate every equation at a full symbol assignment (k-elements)."""
        zero = self.params.zero()
        out = []
        for q in self.equations:
            acc = zero
            for exps, c in q.terms.items():
                term = c
                for v, e in enumerate(exps):
                    if e:
                        term = term * values[v] ** e
                acc = acc + term
            out.append(acc)
        return out

    def is_solution(self, values):
        return all(v.is_zero() for v in self.substitute_values(values))

    def stage0_symbol_count(self):
        return sum(len(slots) for slots in self.layout.values())


def _slot_symbols(base, variables, symbol_cap):
    ring_k = base.field_ring
    symbols = []
    layout = {}
    for var in variables:
        slots = []
        for j, i in cohen.slot_indices(ring_k, base.m):
            for w in range(base.e):
                if j >= base.component_bound(w):
                    continue
                iword = "_".join(str(c) for c in i) if i else "0"
                name = f"z{var}.{j}.{iword}.{w}"
                slots.append((len(symbols), w, j, i))
                symbols.append(name)
        layout[var] = slots
    if symbol_cap is not None and len(symbols) > symbol_cap:
        raise ResourceLimit(f"{len(symbols)} symbols exceed the cap {symbol_cap}")
    return symbols, layout


def greenberg_transform(
    X: AffinePresentation,
    stage=0,
    jobs=1,
    monomial_cap=DEFAULT_MONOMIAL_CAP,
    symbol_cap=DEFAULT_SYMBOL_CAP,
):
    base = X.base
    if base.kind not in ("unramified", "eisenstein"):
        raise UnsupportedBase(base.kind)
    symbols, layout = _slot_symbols(base, X.variables, symbol_cap)
    ring = SymbolicRing(base.params, symbols, monomial_cap=monomial_cap)
    algebra = base.algebra(ring)

    generic = []
    for var in X.variables:
        comps = [dict() for _ in range(base.e)]
        for idx, w, j, i in layout[var]:
            comps[w][(j, i)] = ring.variable(symbols[idx])
        generic.append(
            algebra.from_components(
                [cohen.CohenElem(ring, base.m, c) for c in comps]
            )
        )

    def expand(eq_index):
        value = X.evaluate(eq_index, algebra, generic)
        eqs = []
        for j, i in cohen.slot_indices(base.field_ring, base.m):
            for w in range(base.e):
                if j >= base.component_bound(w):
                    continue
                eqs.append(value.components[w].coords.get((j, i), ring.zero()))
        return eqs

    if jobs > 1 and len(X.equations) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            groups = list(pool.map(expand, range(len(X.equations))))
    else:
        groups = [expand(i) for i in range(len(X.equations))]
    equations = [q for group in groups for q in group]
    pres = GreenbergPresentation(base, X.variables, symbols, equations, 0, layout, [])
    for _ in range(stage):
        pres = weil_restrict_presentation(pres, monomial_cap, symbol_cap)
    return pres


# ---------------------------------------------------------------------------
# Point transfer
# ---------------------------------------------------------------------------


def point_to_coords(X: AffinePresentation, pres: GreenbergPresentation, point):
    """Coordinates of an A-valued solution; verifies the equations first."""
    algebra = X.base.algebra()
    values = [algebra.embed(v) if v.algebra is not algebra else v for v in point]
    for idx, res in enumerate(X.evaluate_all(algebra, values)):
        if not res.is_zero():
            raise NotASolution(f"equation {idx} does not vanish at the point")
    zero = X.base.params.zero()
    coords = [zero] * pres.stage0_symbol_count()
    for var, value in zip(X.variables, values):
        for idx, w, j, i in pres.layout[var]:
            coords[idx] = value.components[w].coords.get((j, i), zero)
    for record in pres.stages:
        nxt = [zero] * sum(len(children) for children in record)
        for parent, children in enumerate(record):
            digits = pbasis_expand(coords[parent])
            for child, idx in zip(children, multi_indices(X.base.params.p, X.base.params.d)):
                nxt[child] = digits[idx]
        coords = nxt
    if not pres.is_solution(coords):
        raise NotASolution("transported coordinates fail the emitted system")
    return coords


def coords_to_point(X: AffinePresentation, pres: GreenbergPresentation, coords):
    """Rebuild the A-valued point from coordinates; inverse of
    point_to_coords on solutions."""
    coords = list(coords)
    params = X.base.params
    for record in reversed(pres.stages):
        prev = [params.zero()] * len(record)
        for parent, children in enumerate(record):
            acc = params.zero()
            for child, idx in zip(children, multi_indices(params.p, params.d)):
                acc = acc + coords[child].pth_power() * params.monomial(idx)
            prev[parent] = acc
        coords = prev
    algebra = X.base.algebra()
    point = []
    for var in X.variables:
        comps = [dict() for _ in range(X.base.e)]
        for idx, w, j, i in pres.layout[var]:
            if not coords[idx].is_zero():
                comps[w][(j, i)] = coords[idx]
        point.append(
            algebra.from_components(
                [cohen.CohenElem(X.base.field_ring, X.base.m, c) for c in comps]
            )
        )
    for idx, res in enumerate(X.evaluate_all(algebra, point)):
        if not res.is_zero():
            raise NotASolution(f"equation {idx} does not vanish at the rebuilt point")
    return point


# ---------------------------------------------------------------------------
# Weil restriction along the absolute Frobenius
# ---------------------------------------------------------------------------


def weil_restrict(params, symbols, equations, monomial_cap=None, symbol_cap=None):
    """One restriction stage for a polynomial system over k.

    Substitute z = sum_{i in [0,p-1]^d} z_i T^i inside Q[T]/(T_j^p - t_j),
    reduce T-powers, and emit the p^d coefficient equations per input
    equation.  Returns (new symbols, new equations, children) where
    children[v] lists the indices of the p^d refinements of old symbol v
    in digit order.
    """
    p, d = params.p, params.d
    idxs = multi_indices(p, d)
    new_symbols = []
    children = []
    for name in symbols:
        row = []
        for i in idxs:
            iword = "_".join(str(c) for c in i) if i else "0"
            row.append(len(new_symbols))
            new_symbols.append(f"{name}.s{iword}")
        children.append(row)
    if symbol_cap is not None and len(new_symbols) > symbol_cap:
        raise ResourceLimit(f"{len(new_symbols)} symbols exceed the cap {symbol_cap}")

    # extended ring: refined symbols then the d auxiliary T variables
    ext_names = new_symbols + [f"__T{j}" for j in range(d)]
    ext = SymbolicRing(params, ext_names, monomial_cap=monomial_cap)
    nvars_ext = len(ext_names)
    substitution = {}
    for v in range(len(symbols)):
        acc = ext.zero()
        for pos, i in enumerate(idxs):
            mono = [0] * nvars_ext
            mono[children[v][pos]] = 1
            for j, c in enumerate(i):
                mono[len(new_symbols) + j] = c
            acc = acc + SparsePoly(ext.domain, nvars_ext, {tuple(mono): params.one()})
        substitution[v] = acc

    out_ring = SymbolicRing(params, new_symbols, monomial_cap=monomial_cap)
    new_equations = []
    for q in equations:
        lifted = SparsePoly(
            ext.domain,
            nvars_ext,
            {e + (0,) * d: c for e, c in q.terms.items()},
        )
        expanded = lifted.substitute(substitution, cap=monomial_cap)
        buckets = {i: {} for i in idxs}
        for exps, c in expanded.terms.items():
            sym_part = exps[: len(new_symbols)]
            t_part = exps[len(new_symbols) :]
            residue = tuple(e % p for e in t_part)
            carry = tuple(e // p for e in t_part)
            coeff = c * params.monomial(carry)
            bucket = buckets[residue]
            prev = bucket.get(sym_part)
            s = prev + coeff if prev is not None else coeff
            if s.is_zero():
                bucket.pop(sym_part, None)
            else:
                bucket[sym_part] = s
        for i in idxs:
            new_equations.append(
                SparsePoly(out_ring.domain, len(new_symbols), buckets[i])
            )
    return new_symbols, new_equations, children


def eval_sym_poly(poly, values, from_k):
    """Evaluate a polynomial over k at ring elements; ``from_k`` embeds the
    coefficients.  Used to transport solutions into twisted algebras."""
    acc = None
    for exps, c in poly.sorted_terms():
        term = from_k(c)
        for v, e in enumerate(exps):
            if e:
                term = term * values[v] ** e
        acc = term if acc is None else acc + term
    if acc is None:
        return from_k(poly.domain.zero)
    return acc


def weil_restrict_presentation(pres, monomial_cap=None, symbol_cap=None):
    symbols, equations, children = weil_restrict(
        pres.params, pres.symbols, pres.equations, monomial_cap, symbol_cap
    )
    return GreenbergPresentation(
        pres.base,
        pres.variables,
        symbols,
        equations,
        pres.stage + 1,
        pres.layout,
        pres.stages + [children],
    )


# ---------------------------------------------------------------------------
# The additive group along Frobenius
# ---------------------------------------------------------------------------


def ga_frob_section(f):
    """Left inverse to Frobenius on the additive group: the digit at 0."""
    return pbasis_expand(f)[(0,) * f.params.d]


def ga_frob_coker_coords(f):
    """The p^d - 1 complementary digits (lexicographic nonzero indices)."""
    dig = pbasis_expand(f)
    zero_idx = (0,) * f.params.d
    return [dig[i] for i in multi_indices(f.params.p, f.params.d) if i != zero_idx]


# ---------------------------------------------------------------------------
# Graded kernel of the tower
# ---------------------------------------------------------------------------


def graded_kernel_check(base: ArtinianBase, group, i, samples, rng=None):
    """Compare the kernel of the transform over A/I^{i+2} -> A/I^{i+1} with
    the rank-one graded piece I^{i+1}/I^{i+2}, on points and on symbols.

    ``samples`` is a list of k-elements used as test coordinates; the report
    records the explicit isomorphism and what was verified.
    """
    from .base import graded_unit

    if group not in ("additive", "multiplicative"):
        raise TypeMismatch(f"unsupported group {group!r}")
    level = i + 1
    j2 = min(i + 2, base.trunc)
    j1 = min(i + 1, base.trunc)
    A2 = base.quotient(j2)
    A1 = base.quotient(j1)
    alg2 = A2.algebra()
    report = {
        "group": group,
        "i": i,
        "quotients": [j2, j1],
        "trivial": j2 == j1,
        "checked": 0,
        "pass": True,
    }
    freed = _freed_slots(A2, A1)
    report["freed_slots"] = [
        {"component": w, "position": j, "index": list(ix)} for w, j, ix in freed
    ]
    if j2 == j1:
        report["kernel"] = "trivial"
        _symbolic_kernel_report(A2, A1, group, report)
        return report

    e = base.e
    w0, s = level % e, level // e
    report["kernel"] = f"I^{level}/I^{level + 1} = k via pi^{w0} p^{s} teich(-)"
    ok = True
    seen = []
    for c in samples:
        rep = graded_unit(A2, level, c).reduce_mod(j2)
        elem = rep if group == "additive" else alg2.one() + rep
        # lands in the kernel: trivial in A/I^{i+1}
        down = elem.reduce_mod(j1)
        if group == "additive":
            ok &= down.is_zero()
        else:
            ok &= (down - down.algebra.one()).is_zero()
        if not c.is_zero():
            ok &= not rep.is_zero()
            ok &= rep.graded_coefficient(level) == c
        seen.append(rep)
        report["checked"] += 1
    # group law matches addition of graded coefficients
    for a, b in zip(seen, seen[1:]):
        ca, cb = a.graded_coefficient(level), b.graded_coefficient(level)
        if group == "additive":
            ok &= (a + b).graded_coefficient(level) == ca + cb
        else:
            prod = (alg2.one() + a) * (alg2.one() + b)
            ok &= (prod - alg2.one()).graded_coefficient(level) == ca + cb
    report["pass"] = bool(ok)
    _symbolic_kernel_report(A2, A1, group, report)
    return report


def _freed_slots(A2, A1):
    out = []
    for w in range(A2.e):
        b2, b1 = A2.component_bound(w), A1.component_bound(w)
        for j in range(b1, b2):
            for ix in multi_indices(A2.params.p ** (A2.m - 1 - j), A2.params.d):
                out.append((w, j, ix))
    return out


def _symbolic_kernel_report(A2, A1, group, report):
    """One symbolic stage: the freed coordinates cut out the kernel."""
    from . import linalg

    params = A2.params
    if group == "additive":
        X2 = AffinePresentation(A2, ["x"], [])
        pres2 = greenberg_transform(X2)
        pres1 = greenberg_transform(AffinePresentation(A1, ["x"], []))
        report["symbolic"] = {
            "stage_symbols": len(pres2.symbols),
            "shared_symbols": len(pres1.symbols),
            "kernel_symbols": len(pres2.symbols) - len(pres1.symbols),
            "linear": True,
        }
        report["pass"] = report["pass"] and (
            len(pres2.symbols) - len(pres1.symbols) == len(report["freed_slots"])
        )
        return
    X2 = AffinePresentation(
        A2,
        ["x", "y"],
        [{(1, 1): A2.algebra().one(), (0, 0): -A2.algebra().one()}],
    )
    pres2 = greenberg_transform(X2)
    one = A2.algebra().one()
    identity_coords = point_to_coords(X2, pres2, [one, one])
    freed = {(w, j, tuple(ix)) for w, j, ix in
             [(f["component"], f["position"], tuple(f["index"])) for f in report["freed_slots"]]}
    pinned = {}
    free_indices = []
    for var in X2.variables:
        for idx, w, j, ix in pres2.layout[var]:
            if (w, j, ix) in freed:
                free_indices.append(idx)
            else:
                pinned[idx] = identity_coords[idx]
    # substitute pinned values, keep freed symbols formal
    ring = SymbolicRing(params, [pres2.symbols[i] for i in free_indices])
    zero = params.zero()
    rows = []
    rhs = []
    linear = True
    for q in pres2.equations:
        row = [zero] * len(free_indices)
        const = zero
        for exps, c in q.terms.items():
            coeff = c
            free_part = []
            for v, e in enumerate(exps):
                if e == 0:
                    continue
                if v in pinned:
                    coeff = coeff * pinned[v] ** e
                else:
                    free_part.extend([v] * e)
            if len(free_part) == 0:
                const = const + coeff
            elif len(free_part) == 1:
                pos = free_indices.index(free_part[0])
                row[pos] = row[pos] + coeff
            else:
                if not coeff.is_zero():
                    linear = False
        if any(not v.is_zero() for v in row) or not const.is_zero():
            rows.append(row)
            rhs.append(-const)
    solution_dim = None
    if linear and rows:
        solution_dim = linalg.nullity(rows, zero)
    elif linear:
        solution_dim = len(free_indices)
    report["symbolic"] = {
        "kernel_symbols": len(free_indices),
        "linear": linear,
        "solution_dim": solution_dim,
    }
    if linear and solution_dim is not None and free_indices:
        report["pass"] = report["pass"] and solution_dim * 2 == len(free_indices)


# ---------------------------------------------------------------------------
# Localization compatibility
# ---------------------------------------------------------------------------


def unit_locus_agrees(X: AffinePresentation, pres, g_equation, point):
    """g(P) is a unit in A iff the level-0 digit vector of its canonical
    coordinates is nonzero; returns (unit?, digit-vector-nonzero?)."""
    algebra = X.base.algebra()
    value = AffinePresentation(X.base, X.variables, [g_equation]).evaluate(
        0, algebra, point
    )
    is_unit = not value.algebra.ring.is_zero(value.residue())
    level0 = [
        x for (j, _), x in value.components[0].coords.items() if j == 0
    ]
    return is_unit, bool(level0)
