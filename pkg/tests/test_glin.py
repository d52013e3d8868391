import itertools

import pytest

from psverify.glin import (CELL_NAMES, MatF, int_matmul, iwahori_cell, iwasawa_decompose, ring_det, ring_matmul,
                           weyl_reps)
from psverify.padic import FieldContext, PrecisionError, ResidueRing

CELL_LENGTHS = {"e": 0, "s1": 1, "s2": 1, "s1s2": 2, "s2s1": 2, "w0": 3}


def test_braid_relation_and_square():
    reps = weyl_reps()
    s1, s2 = reps["s1"], reps["s2"]
    assert int_matmul(int_matmul(s1, s2), s1) == int_matmul(int_matmul(s2, s1), s2) == reps["w0"]
    assert int_matmul(s1, s1) == ((-1, 0, 0), (0, -1, 0), (0, 0, 1))


def test_representatives_lie_in_their_own_cells():
    R = ResidueRing(3, 1, 1)
    labels = {name: iwahori_cell(tuple(tuple(R.from_int(x) for x in row) for row in m), R)
              for name, m in weyl_reps().items()}
    assert labels == {name: name for name in CELL_NAMES}


def test_iwasawa_of_integral_matrix_has_trivial_torus_part():
    ctx = FieldContext(3)
    g = MatF.from_values(ctx, [[1, 2, 0], [3, 1, 1], [0, 4, 2]])
    fac = iwasawa_decompose(g)
    assert fac.valuations == (0, 0, 0)
    assert (fac.k @ fac.b).equals(g)
    assert fac.b.is_integral() and fac.k.is_integral() and fac.k.det().val == 0


def test_iwasawa_of_torus_element():
    ctx = FieldContext(2)
    g = MatF.from_values(ctx, [[2, 0, 0], [0, 1, 0], [0, 0, 1]])
    fac = iwasawa_decompose(g)
    assert fac.k.equals(MatF.identity(ctx))
    assert fac.b.equals(g)


def test_iwasawa_of_lower_unipotent_with_pole():
    ctx = FieldContext(2)
    g = MatF.from_values(ctx, [[1, 0, 0], [(1, 2), 1, 0], [0, 0, 1]])
    fac = iwasawa_decompose(g)
    assert sorted(fac.valuations) == [-1, 0, 1] and fac.valuations[0] == -1
    assert fac.k[1, 0].val == 0
    assert (fac.k @ fac.b).equals(g)
    # 2x2 oracle: (1 0; x 1) = (1/x 1; 1 0)(x 1; 0 -1/x) for val(x) < 0
    x = ctx.rational(1, 2)
    k2 = MatF(ctx, [[x.inverse(), ctx.one()], [ctx.one(), ctx.zero()]])
    b2 = MatF(ctx, [[x, ctx.one()], [ctx.zero(), -x.inverse()]])
    assert (k2 @ b2).equals(MatF.from_values(ctx, [[1, 0], [(1, 2), 1]]))


def _random_scalar(rng, ctx, depth):
    n = rng.randint(-ctx.p ** depth, ctx.p ** depth)
    if ctx.f > 1:
        return ctx.scalar(tuple(rng.randint(-9, 9) for _ in range(ctx.f))) * ctx.uniformizer_power(rng.randint(-1, 2))
    return ctx.scalar(n) * ctx.uniformizer_power(rng.randint(-1, 2)) if n else ctx.zero()


@pytest.mark.parametrize("p, f, level", [(2, 1, 1), (2, 1, 2), (3, 1, 2), (2, 2, 2), (5, 1, 1)])
def test_iwasawa_round_trip(rng, p, f, level):
    ctx = FieldContext(p, f, cap=level + 6)
    done = 0
    while done < 500:
        g = MatF(ctx, [[_random_scalar(rng, ctx, level + 2) for _ in range(3)] for _ in range(3)])
        try:
            if g.det().is_zero():
                continue
            fac = iwasawa_decompose(g)
        except PrecisionError:
            continue
        assert (fac.k @ fac.b).equals(g)
        assert fac.k.is_integral() and fac.k.det().val == 0
        b = fac.b
        assert all(b[i, j].is_exact_zero() for i in range(3) for j in range(i))
        assert tuple(b[i, i].val for i in range(3)) == fac.valuations
        done += 1


def _gl3_over_f2():
    R = ResidueRing(2, 1, 1)
    for entries in itertools.product(range(2), repeat=9):
        rows = (entries[0:3], entries[3:6], entries[6:9])
        if ring_det(R, rows) % 2:
            yield rows


def test_cell_partition_of_gl3_f2():
    R = ResidueRing(2, 1, 1)
    group = list(_gl3_over_f2())
    assert len(group) == 168
    borel = [g for g in group if g[1][0] == g[2][0] == g[2][1] == 0]
    assert len(borel) == 8
    counts = dict.fromkeys(CELL_NAMES, 0)
    reps = weyl_reps()
    double_cosets = {}
    for name, w in reps.items():
        wr = tuple(tuple(x % 2 for x in row) for row in w)
        double_cosets[name] = {ring_matmul(R, ring_matmul(R, b1, wr), b2) for b1 in borel for b2 in borel}
    for g in group:
        label = iwahori_cell(g, R)
        counts[label] += 1
        assert g in double_cosets[label]
    assert sum(counts.values()) == 168
    assert counts == {name: 8 * 2 ** CELL_LENGTHS[name] for name in CELL_NAMES}
    assert {name: len(s) for name, s in double_cosets.items()} == counts


def test_cell_invariance_under_iwahori_and_borel(rng):
    R = ResidueRing(3, 1, 2)
    elements = list(R.elements())
    units = list(R.units())
    ideal = [x for x in elements if x % 3 == 0]

    def draw_iwahori():
        return tuple(tuple(rng.choice(units) if i == j else (rng.choice(elements) if j > i else rng.choice(ideal))
                           for j in range(3)) for i in range(3))

    def draw_borel():
        return tuple(tuple(rng.choice(units) if i == j else (rng.choice(elements) if j > i else 0)
                           for j in range(3)) for i in range(3))

    for name, w in weyl_reps().items():
        wr = tuple(tuple(R.from_int(x) for x in row) for row in w)
        for _ in range(40):
            g = ring_matmul(R, ring_matmul(R, draw_iwahori(), wr), draw_borel())
            assert iwahori_cell(g, R) == name
