import pytest

from gkit import cohen as C
from gkit import witt as W
from gkit.errors import LevelMismatch, NotInCohen, NotInImage
from gkit.rings import multi_indices
from gkit.sampling import rand_ambient_elem, rand_cohen
from gkit.witt import WittVector


def test_to_witt_examples(params2, k2):
    t, one, zero = params2.gen(0), params2.one(), params2.zero()
    a = t + one
    assert C.to_witt(C.CohenElem.single(k2, 2, 0, (1,), one)).entries == (t, zero)
    assert C.to_witt(C.CohenElem.single(k2, 2, 0, (0,), a)).entries == (a * a, zero)
    assert C.to_witt(C.CohenElem.single(k2, 2, 1, (0,), a)).entries == (zero, a * a)


def test_extract_examples(params2, k2):
    t, one, zero = params2.gen(0), params2.one(), params2.zero()
    assert C.extract(WittVector(k2, (t, zero))) == C.CohenElem.single(k2, 2, 0, (1,), one)
    assert C.extract(WittVector(k2, (t * t, zero))) == C.CohenElem.single(k2, 2, 0, (0,), t)
    with pytest.raises(NotInCohen):
        C.extract(WittVector(k2, (zero, t)))


def test_ring_op_examples(params2, k2):
    t, one = params2.gen(0), params2.one()
    tau = C.CohenElem.single(k2, 2, 0, (1,), one)
    assert C.cohen_mul(tau, tau) == C.CohenElem.single(k2, 2, 0, (0,), t)
    assert C.cohen_add(tau, tau) == C.CohenElem.single(k2, 2, 1, (0,), t)
    assert C.cohen_add(tau, C.cohen_neg(tau)).is_zero()


@pytest.mark.parametrize("fixture,level", [("k2", 2), ("k2", 3), ("k3", 2), ("k3", 3)])
def test_roundtrip_random(fixture, level, rng, request):
    ring = request.getfixturevalue(fixture)
    for _ in range(40):
        c = rand_cohen(rng, ring, level)
        assert C.extract(C.to_witt(c)) == c


def test_roundtrip_random_d2(params22, rng):
    from gkit.rings import FieldRing

    ring = FieldRing(params22)
    for _ in range(20):
        c = rand_cohen(rng, ring, 2)
        assert C.extract(C.to_witt(c)) == c


def test_closure_random(k2, rng):
    for _ in range(25):
        a = rand_cohen(rng, k2, 3)
        b = rand_cohen(rng, k2, 3)
        # never raises NotInCohen: the canonical forms are a subring
        s = C.cohen_add(a, b)
        m = C.cohen_mul(a, b)
        assert C.cohen_sub(s, b) == a
        assert C.extract(C.to_witt(m)) == m


def test_etale_ambient_roundtrip(etale_ring, rng):
    for _ in range(20):
        c = rand_cohen(rng, etale_ring, 2)
        assert C.extract(C.to_witt(c)) == c


def test_ver_embed(params2, k2, rng):
    a = params2.gen(0) + params2.one()
    c1 = C.CohenElem.single(k2, 1, 0, (0,), a)
    assert C.ver_embed(c1, 2) == C.CohenElem.single(k2, 2, 1, (0,), a)
    assert C.ver_embed(C.CohenElem.zero(k2, 1), 3).is_zero()
    with pytest.raises(LevelMismatch):
        C.ver_embed(C.CohenElem.zero(k2, 3), 2)
    # additive on random pairs
    for _ in range(20):
        x = rand_cohen(rng, k2, 2)
        y = rand_cohen(rng, k2, 2)
        lhs = C.ver_embed(C.cohen_add(x, y), 3)
        rhs = C.cohen_add(C.ver_embed(x, 3), C.ver_embed(y, 3))
        assert lhs == rhs


def test_p_division_examples(params2, k2):
    t, one = params2.gen(0), params2.one()
    target = C.CohenElem.single(k2, 2, 1, (0,), t)
    assert C.solve_p_division(target, 1) == C.CohenElem.single(k2, 2, 0, (1,), one)
    assert C.solve_p_division(C.CohenElem.zero(k2, 2), 1).is_zero()
    a = t + one
    target2 = C.CohenElem.single(k2, 2, 1, (0,), a * a)
    got = C.solve_p_division(target2, 1)
    assert C.p_pow_times(got, 1) == target2
    with pytest.raises(NotInImage):
        C.solve_p_division(C.CohenElem.single(k2, 2, 0, (0,), one), 1)


def test_p_division_carries(params2, k2):
    # the dividend whose digits interact through Witt carries
    t = params2.gen(0)
    x = t**3 + t**2
    target = C.CohenElem.single(k2, 3, 1, (0,), x)
    got = C.solve_p_division(target, 1)
    assert C.p_pow_times(got, 1) == target
    deep = C.CohenElem.single(k2, 3, 2, (0,), t)
    got2 = C.solve_p_division(deep, 2)
    assert C.p_pow_times(got2, 2) == deep


@pytest.mark.parametrize("ring_fixture", ["k2", "etale_ring"])
def test_p_division_random(ring_fixture, rng, request):
    ring = request.getfixturevalue(ring_fixture)
    for _ in range(25):
        low = rand_cohen(rng, ring, 2)
        target = C.ver_embed(low, 3)
        got = C.solve_p_division(target, 1)
        assert C.p_pow_times(got, 1) == target


def test_residue(params2, k2, rng):
    t, one = params2.gen(0), params2.one()
    assert C.residue(C.CohenElem.single(k2, 2, 0, (1,), one)) == t
    a = t + one
    assert C.residue(C.CohenElem.single(k2, 2, 0, (0,), a)) == a.pth_power(1)
    # residue is a ring homomorphism with kernel p C
    for _ in range(20):
        x = rand_cohen(rng, k2, 2)
        y = rand_cohen(rng, k2, 2)
        assert C.residue(C.cohen_add(x, y)) == C.residue(x) + C.residue(y)
        assert C.residue(C.cohen_mul(x, y)) == C.residue(x) * C.residue(y)
        assert C.residue(C.p_pow_times(x, 1)).is_zero()


def test_residue_kernel_is_p_image(params2, k2, rng):
    for _ in range(20):
        x = rand_cohen(rng, k2, 3)
        killed = C.CohenElem(
            k2, 3, {(j, i): v for (j, i), v in x.coords.items() if j >= 1}
        )
        assert C.residue(killed).is_zero()
        div = C.solve_p_division(killed, 1)
        assert C.p_pow_times(div, 1) == killed


def test_exact_sequence_shadow(params2, k2, rng):
    """Subtracting the canonical representative of the position-0 digits
    lands every element of C_{n+2} in the embedded C_{n+1}."""
    for _ in range(20):
        x = rand_cohen(rng, k2, 3)
        rep = C.CohenElem(
            k2, 3, {(j, i): v for (j, i), v in x.coords.items() if j == 0}
        )
        tail = C.cohen_sub(x, rep)
        assert tail.support_min_position() >= 1
        back = C.ver_embed(C.ver_project(tail, 2), 3)
        assert back == tail


def test_witt_span_fills_cohen(params2, k2, rng):
    """Every canonical form is a W_{n+1}(k)-combination of the Teichmuller
    lifts of the p-basis monomials t^m, m in [0, p^n - 1]^d."""
    level = 3
    n = level - 1
    p, d = params2.p, params2.d
    for _ in range(10):
        c = rand_cohen(rng, k2, level)
        total = W.witt_zero(k2, level)
        for mono in multi_indices(p**n, d):
            entries = []
            for j in range(level):
                bound = p ** (n - j)
                ok = all(comp < bound for comp in mono)
                entries.append(c.coords.get((j, mono), params2.zero()) if ok else params2.zero())
            w = WittVector(k2, tuple(entries))
            image = WittVector(k2, tuple(e.pth_power(n) for e in w.entries))
            gen = W.teichmuller(k2, params2.monomial(mono), level)
            total = W.witt_add(total, W.witt_mul(image, gen))
        assert total == C.to_witt(c)


def test_teich_lift(params2, k2, rng):
    t = params2.gen(0)
    for _ in range(10):
        v = rand_ambient_elem(rng, k2)
        lifted = C.teich_lift(k2, 3, v)
        assert C.residue(lifted) == v
    # multiplicative on p-basis monomials
    assert C.cohen_mul(C.teich_lift(k2, 3, t), C.teich_lift(k2, 3, t)) == C.teich_lift(
        k2, 3, t * t
    )


def test_d0_is_plain_witt():
    from gkit.basefield import PrimeParams
    from gkit.rings import FieldRing

    params = PrimeParams(3, 0)
    ring = FieldRing(params)
    two = params.from_int(2)
    c = C.extract(WittVector(ring, (two, params.one(), two)))
    assert c.coords == {
        (0, ()): two.pth_root().pth_root(),
        (1, ()): params.one(),
        (2, ()): two,
    }
    assert C.to_witt(c).entries == (two, params.one(), two)
