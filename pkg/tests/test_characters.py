import itertools

import pytest
from gmpy2 import mpq

from psverify.characters import (AlgebraicPart, CharDatum, SmoothChar, is_non_positive_algebraic, parse_value,
                                 unit_characters)
from psverify.coeff import CycloNum
from psverify.padic import FieldContext, ResidueRing

from conftest import unramified

ONE = CycloNum.rational(1)


def _quadratic(p):
    return next(c for c in unit_characters(p, 1, 1) if c.conductor == 1 and (c * c).is_trivial())


def test_norm_at_uniformizer():
    ctx = FieldContext(3)
    assert SmoothChar.norm(3)(ctx.uniformizer_power(1)) == CycloNum.rational(mpq(1, 3))
    assert SmoothChar.norm(2, 2)(FieldContext(2, 2).uniformizer_power(1)) == CycloNum.rational(mpq(1, 4))


def test_unramified_ignores_units():
    ctx = FieldContext(5)
    eta = unramified(5, 7)
    assert eta(ctx.scalar(3 * 25)) == CycloNum.rational(49)


def test_quadratic_character_at_non_square():
    ctx = FieldContext(3)
    quad = _quadratic(3)
    assert quad(ctx.scalar(2)) == CycloNum.rational(-1)
    assert quad(ctx.scalar(4)) == ONE


def test_inverse_and_square_are_trivial():
    for chi in unit_characters(3, 1, 2):
        chi = chi * unramified(3, mpq(2, 5))
        prod = chi * chi.inverse()
        assert prod.is_trivial() and prod.conductor == 0
    quad = _quadratic(3)
    assert quad.conductor == 1 and (quad * quad).conductor == 0


def _brute_conductor(chi, level):
    """Smallest c with chi trivial on units congruent to 1 mod p^c, by evaluation at level."""
    R = ResidueRing(chi.p, chi.f, level)
    units = list(R.units())
    for c in range(level + 1):
        if all(chi.on_ring(u, level) == ONE for u in units if c == 0 or R.valuation(R.sub(u, R.one())) >= c):
            return c
    raise AssertionError("conductor exceeds level")


def test_ratio_of_conductor_two_characters_can_drop_to_one():
    top = [c for c in unit_characters(3, 1, 2) if c.conductor == 2]
    pairs = [(a, b) for a, b in itertools.permutations(top, 2) if (a / b).conductor == 1]
    assert pairs
    for a, b in pairs:
        assert _brute_conductor(a / b, 2) == 1


@pytest.mark.parametrize("p, f, level", [(2, 1, 3), (3, 1, 2), (2, 2, 2), (5, 1, 1)])
def test_conductor_of_products(p, f, level):
    chars = unit_characters(p, f, level)
    for chi in chars:
        assert chi.conductor == _brute_conductor(chi, level)
    for a, b in itertools.product(chars, repeat=2):
        c = (a * b).conductor
        assert c <= max(a.conductor, b.conductor)
        if a.conductor != b.conductor:
            assert c == max(a.conductor, b.conductor)


def _fixture_characters():
    yield unramified(3, 2)
    yield _quadratic(3) * unramified(3, mpq(-1, 2))
    yield [c for c in unit_characters(3, 1, 2) if c.conductor == 2][1]
    yield [c for c in unit_characters(2, 1, 3) if c.conductor == 3][0] * unramified(2, 3)
    yield [c for c in unit_characters(2, 2, 1) if c.conductor == 1][0]


@pytest.mark.parametrize("chi", list(_fixture_characters()), ids=lambda c: repr(c))
def test_multiplicativity(rng, chi):
    ctx = FieldContext(chi.p, chi.f)
    for _ in range(200):
        def draw():
            coords = [rng.randint(-500, 500) for _ in range(chi.f)]
            if not any(coords):
                coords[0] = 1
            return ctx.scalar(coords[0] if chi.f == 1 else tuple(coords)) * ctx.uniformizer_power(rng.randint(-3, 3))
        x, y = draw(), draw()
        assert chi(x * y) == chi(x) * chi(y)


def test_non_positive_algebraic_examples():
    triv = CharDatum(SmoothChar.trivial(3, 2))
    assert is_non_positive_algebraic(triv) == (True, (0, 0))
    assert is_non_positive_algebraic(CharDatum(SmoothChar.trivial(3, 2), (-1, -1)))[0]
    assert not is_non_positive_algebraic(CharDatum(SmoothChar.norm(3)))[0]
    assert not is_non_positive_algebraic(CharDatum(SmoothChar.trivial(3, 2), (-1, 1)))[0]


@pytest.mark.parametrize("exps", list(itertools.product((-1, 0, 1), repeat=2)))
@pytest.mark.parametrize("smooth", [SmoothChar.trivial(2, 2), SmoothChar.norm(2, 2)])
def test_non_positive_both_ways_iff_trivial(exps, smooth):
    d = CharDatum(smooth, AlgebraicPart(exps))
    both = is_non_positive_algebraic(d)[0] and is_non_positive_algebraic(d.inverse())[0]
    assert both == d.is_trivial()


@pytest.mark.parametrize("text, expected", [
    ("3", CycloNum.rational(3)),
    ("-1/2", CycloNum.rational(mpq(-1, 2))),
    ("zeta(4)", CycloNum.root_of_unity(4)),
    ("2*zeta(6)^5", CycloNum.root_of_unity(6, 5) * CycloNum.rational(2)),
    ("1 + zeta(3)", ONE + CycloNum.root_of_unity(3)),
    (5, CycloNum.rational(5)),
])
def test_parse_value(text, expected):
    assert parse_value(text) == expected


@pytest.mark.parametrize("text", ["", "abc", "zeta(0)", "1/2/3", "*zeta(3)", True])
def test_parse_value_rejects(text):
    with pytest.raises(ValueError):
        parse_value(text)
