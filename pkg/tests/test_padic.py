import itertools

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from psverify.coeff import CycloNum
from psverify.padic import (CosetDomain, FieldContext, IntegrandTable, PrecisionError, ResidueRing,
                            enumerate_unit_characters, haar_integrate, unit_group)

from conftest import unramified

SUPPORTED = [(2, 1, 1), (2, 1, 2), (2, 1, 3), (3, 1, 1), (3, 1, 2), (2, 2, 1), (2, 2, 2), (5, 1, 1)]


def test_uniformizer_powers_multiply():
    ctx = FieldContext(3)
    prod = ctx.uniformizer_power(1) * ctx.uniformizer_power(2)
    assert prod.val == 3 and prod.unit == 1


def test_cancellation_gives_flagged_zero():
    ctx = FieldContext(3)
    s = ctx.scalar(1, prec=3) + ctx.scalar(-1, prec=3)
    assert s.is_zero() and s.approx_zero and not s.is_exact_zero()
    assert s.absprec == 3
    with pytest.raises(PrecisionError):
        s.valuation()


def test_unit_product_mod_p_cubed():
    ctx = FieldContext(3)
    x = ctx.scalar(4, prec=3) * ctx.scalar(-2, prec=3)
    assert x.val == 0 and x.unit == (1 - 9) % 27


def test_to_ring_needs_precision():
    ctx = FieldContext(2)
    with pytest.raises(PrecisionError):
        ctx.scalar(3, prec=2).to_ring(3)


@given(st.integers(-10 ** 6, 10 ** 6).filter(bool), st.integers(-10 ** 6, 10 ** 6).filter(bool),
       st.sampled_from([2, 3, 5]))
def test_scalar_arithmetic_matches_integers(a, b, p):
    ctx = FieldContext(p)
    m = 6
    sa, sb = ctx.scalar(a), ctx.scalar(b)
    assert (sa * sb).to_ring(m) == (a * b) % p ** m
    assert (sa + sb).equals(ctx.scalar(a + b))
    q = sa / sb
    assert (q * sb).equals(sa)
    assert q.lift() is not None


@pytest.mark.parametrize("p, f, m", SUPPORTED)
def test_residue_ring_units_and_inverses(p, f, m):
    R = ResidueRing(p, f, m)
    units = list(R.units())
    assert R.size == (p ** f) ** m
    assert len(units) == (p ** f - 1) * (p ** f) ** (m - 1)
    for u in units:
        assert R.mul(u, R.inv(u)) == R.one()
    assert [R.index(x) for x in R.elements()] == list(range(R.size))


def test_unit_character_counts():
    assert len(enumerate_unit_characters(ResidueRing(3, 1, 1), 1)) == 2
    assert len(enumerate_unit_characters(ResidueRing(2, 1, 2), 2)) == 2
    for p, f, m in SUPPORTED:
        chars = enumerate_unit_characters(ResidueRing(p, f, m), 0)
        assert len(chars) == 1 and chars[0].is_trivial()


@pytest.mark.parametrize("p, f, c", [(2, 1, 3), (3, 1, 2), (5, 1, 1), (2, 2, 2), (7, 1, 1)])
def test_unit_group_is_a_faithful_basis(p, f, c):
    g = unit_group(p, f, c)
    assert len(g) == (p ** f - 1) * (p ** f) ** (c - 1)
    product = 1
    for d in g.orders:
        product *= d
    assert product == len(g)
    seen = set()
    for exps in itertools.product(*[range(d) for d in g.orders]):
        x = g.ring.one()
        for gen, e in zip(g.gens, exps):
            for _ in range(e):
                x = g.ring.mul(x, gen)
        seen.add(x)
        assert tuple(g.dlog(x)) == exps
    assert len(seen) == len(g)


@pytest.mark.parametrize("p, f, c", [(3, 1, 2), (2, 1, 3), (5, 1, 2)])
def test_unit_characters_are_characters(p, f, c):
    R = ResidueRing(p, f, c)
    units = list(R.units())
    for chi in enumerate_unit_characters(R, c):
        for u in units[:6]:
            for v in units[-6:]:
                assert chi(R.mul(u, v)) == chi(u) * chi(v)


def test_integral_of_one_and_units():
    for p, f, m in SUPPORTED:
        R = ResidueRing(p, f, m)
        q = p ** f
        one = IntegrandTable.from_function(R, lambda x: CycloNum.rational(1))
        assert haar_integrate(one) == CycloNum.rational(1)
        assert haar_integrate(one, CosetDomain.units()) == CycloNum.rational(mpq(q - 1, q))


def test_integral_of_unramified_character_on_annulus():
    eta2 = unramified(3, 2)
    R = ResidueRing(3, 1, 2)
    table = IntegrandTable.from_function(
        R, lambda x: eta2.on_ring(x, 2) if R.valuation(x) < 2 else CycloNum.rational(0))
    assert haar_integrate(table, CosetDomain.minus_ideal(2)) == CycloNum.rational(mpq(10, 9))


def test_domain_finer_than_table_is_refused():
    R = ResidueRing(2, 1, 1)
    one = IntegrandTable.from_function(R, lambda x: CycloNum.rational(1))
    with pytest.raises(PrecisionError):
        haar_integrate(one, CosetDomain.ideal(2))


def _random_tables(rng, R, count=50):
    for _ in range(count):
        yield IntegrandTable(R, [CycloNum.rational(mpq(rng.randint(-9, 9), rng.randint(1, 4)))
                                 for _ in range(R.size)])


@pytest.mark.parametrize("p, f, m", SUPPORTED)
def test_haar_additivity_translation_scaling(rng, p, f, m):
    R = ResidueRing(p, f, m)
    q = p ** f
    elements = list(R.elements())
    for table in _random_tables(rng, R):
        whole = haar_integrate(table)
        assert whole == haar_integrate(table, CosetDomain.units()) + haar_integrate(table, CosetDomain.ideal(1))
        a = rng.choice(elements)
        shifted = IntegrandTable.from_function(R, lambda x: table(R.add(x, a)))
        assert haar_integrate(shifted) == whole
        for j in range(m + 1):
            pj = R.gr.times_p(R.one(), j, m)
            scaled = IntegrandTable.from_function(R, lambda t: table(R.mul(pj, t)))
            assert haar_integrate(table, CosetDomain.ideal(j)) == haar_integrate(scaled) * mpq(1, q ** j)
