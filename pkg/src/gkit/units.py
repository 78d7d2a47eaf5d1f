"""The unit filtration U^n = 1 + I^n on a supported base and the p-power
map between its stages.

For n > e/(p-1) the p-th power map sends level-n units onto level-(n+e)
units, and the graded correction at each step is uniquely determined: the
solver peels v = u^p level by level, dividing the defect by p exactly
(componentwise on the pi-basis) and multiplying the correction in.  At a
finite truncation depth I^{me} = 0 the p-th power map has the unavoidable
kernel 1 + I^{me-e}, so solutions are canonical representatives, unique
modulo that tail; below the bound n > e/(p-1) uniqueness genuinely fails
(witness: p = 2, e = 1, (1 + p x)^2 = 1 + p^2 (x + x^2) kills x = 1).
"""

from . import cohen
from .base import ArtinianBase, BaseElem
from .errors import LevelTooLow, NotAUnit, NotInTargetFiltration


def unit_level(u: BaseElem):
    """The largest n with u in 1 + I^n; None encodes infinity (u = 1)."""
    if not u.is_unit():
        raise NotAUnit("element has zero residue")
    return (u - u.algebra.one()).val()


def p_power(u: BaseElem) -> BaseElem:
    return u ** u.base.params.p


def _exact_p_division(x: BaseElem) -> BaseElem:
    """x / p for x in I^lambda with lambda > e: componentwise on pi-powers."""
    return BaseElem(
        x.algebra, [cohen.solve_p_division(c, 1) for c in x.components]
    )


def p_power_solve(v: BaseElem, n: int) -> BaseElem:
    """The canonical u with u^p = v and level(u) >= n, for v of level
    >= n + e and n > e/(p-1).

    Iteration: while w = v * u^{-p} differs from 1, its defect w - 1 sits
    in I^lambda with lambda > e; the exact division b = (w - 1)/p gives the
    next correction u <- u * (1 + b), and the defect level strictly rises.
    Terminates within the nilpotency bound with u^p = v exactly.
    """
    base = v.base
    p, e = base.params.p, base.e
    if n * (p - 1) <= e:
        raise LevelTooLow(f"need n > e/(p-1) = {e}/{p - 1}, got n = {n}")
    lv = unit_level(v)
    if lv is not None and lv < n + e:
        raise NotInTargetFiltration(f"target has level {lv} < n + e = {n + e}")
    algebra = v.algebra
    one = algebra.one()
    u = one
    guard = base.trunc + 2
    while guard:
        guard -= 1
        w = v * (u.inverse() ** p)
        defect = w - one
        if defect.is_zero():
            return u
        u = u * (one + _exact_p_division(defect))
    raise NotInTargetFiltration("p-power solve did not close within the truncation")


def p_power_kernel_witness(base: ArtinianBase):
    """A pair u != u' of level >= 1 with u^p = u'^p, exhibiting failure of
    injectivity when n = 1 does not exceed e/(p-1) (p = 2, e = 1)."""
    algebra = base.algebra()
    one = algebra.one()
    u = one
    u2 = one + algebra.p()
    return u, u2
