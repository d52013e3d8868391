import itertools

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from psverify.characters import CharDatum, SmoothChar, unit_characters
from psverify.criterion import (CharTuple, blocks, breakpoints, decide_gl2, decide_gl3, decide_gln,
                                final_case_hypotheses, iota_transform, jacquet_constituents, q_parabolic, twist)

P = 3
VALUES = [mpq(1), mpq(3), mpq(1, 3), mpq(-1), mpq(2)]
UNITS = unit_characters(P, 1, 1)  # the two characters of (Z/3)^x


def datum(value_index, unit_index, exps):
    smooth = SmoothChar(VALUES[value_index], UNITS[unit_index].unit_char)
    return CharDatum(smooth, exps)


# a character is described by raw parameters; the oracles below compare parameters only
params_f1 = st.tuples(st.integers(0, len(VALUES) - 1), st.integers(0, len(UNITS) - 1),
                      st.tuples(st.integers(-2, 2)))


def build(params):
    return CharTuple([datum(v, u, e) for v, u, e in params])


def ratio_is_non_positive(x, y):
    return x[0] == y[0] and x[1] == y[1] and all(a - b <= 0 for a, b in zip(x[2], y[2]))


@given(st.lists(params_f1, min_size=2, max_size=2))
def test_gl2_matches_parameter_oracle(params):
    verdict = decide_gl2(build(params))
    expected = ratio_is_non_positive(params[0], params[1])
    assert verdict.decision == ("reducible" if expected else "irreducible")
    if expected:
        assert verdict.witness == (1, tuple(a - b for a, b in zip(params[0][2], params[1][2])))


@given(st.lists(params_f1, min_size=3, max_size=3))
def test_gl3_matches_parameter_oracle(params):
    verdict = decide_gl3(build(params))
    hits = [i for i in (1, 2) if ratio_is_non_positive(params[i - 1], params[i])]
    assert verdict.decision == ("reducible" if hits else "irreducible")
    if hits:
        assert verdict.witness[0] == hits[0]


def test_gl2_examples():
    norm = SmoothChar.norm(P)
    one = SmoothChar.trivial(P)
    assert decide_gl2([CharDatum(one, (0,)), CharDatum(one, (0,))]).decision == "reducible"
    assert decide_gl2([CharDatum(one, (-1,)), CharDatum(one, (0,))]).decision == "reducible"
    assert decide_gl2([CharDatum(one, (1,)), CharDatum(one, (0,))]).decision == "irreducible"
    assert decide_gl2([CharDatum(norm, (0,)), CharDatum(one, (0,))]).decision == "irreducible"
    with pytest.raises(ValueError):
        decide_gl2([CharDatum(one)] * 3)


def test_gl3_examples_and_f2():
    one = SmoothChar.trivial(2, 2)
    v = decide_gl3([CharDatum(one, (1, 1)), CharDatum(one, (0, 2)), CharDatum(one, (0, 1))])
    assert v.decision == "irreducible"
    v = decide_gl3([CharDatum(one, (1, 1)), CharDatum(one, (0, 2)), CharDatum(one, (1, 2))])
    assert v.decision == "reducible" and v.witness == (2, (-1, 0))
    with pytest.raises(ValueError):
        CharTuple([CharDatum(one), CharDatum(SmoothChar.trivial(3))])


def _parabolic_oracle(exps):
    cuts = [i for i in (1, 2) if exps[i - 1] > exps[i]]
    return {(): "G", (1,): "1+2", (2,): "2+1", (1, 2): "B"}[tuple(cuts)]


def test_q_parabolic_exhaustive():
    one = SmoothChar.trivial(P)
    for exps in itertools.product(range(-2, 3), repeat=3):
        t = [CharDatum(one, (e,)) for e in exps]
        assert q_parabolic(t) == _parabolic_oracle(exps), exps
        assert [i for b in blocks(t) for i in b] == [1, 2, 3]
        assert breakpoints(t)[-1] == 3


def test_q_parabolic_f2_needs_some_positive_component():
    one = SmoothChar.trivial(2, 2)
    t = [CharDatum(one, (1, -1)), CharDatum(one, (0, 0)), CharDatum(one, (-1, -1))]
    assert q_parabolic(t) == "B"
    t = [CharDatum(one, (0, -1)), CharDatum(one, (0, 0)), CharDatum(one, (0, 0))]
    assert q_parabolic(t) == "G"


def test_gln_examples():
    norm = SmoothChar.norm(P)
    one = SmoothChar.trivial(P)
    # chi_i / chi_j = |.|^(k_i - k_j) never equals |.|^(j - i - 1) here
    four = [CharDatum(one.twist_norm(k)) for k in (5, 0, 9, 30)]
    assert decide_gln(four).decision == "irreducible"
    # chi_1 / chi_4 = |.|^2
    repeated = [CharDatum(one), CharDatum(norm), CharDatum(SmoothChar.unramified(P, 1, 5)), CharDatum(one.twist_norm(-2))]
    v = decide_gln(repeated)
    assert v.decision == "inconclusive" and v.witness == (1, 4)
    # chi_1 / chi_3 = |.|
    spaced = [CharDatum(norm), CharDatum(SmoothChar.unramified(P, 1, 7)), CharDatum(one), CharDatum(one.twist_norm(4))]
    v = decide_gln(spaced)
    assert v.decision == "inconclusive" and v.witness == (1, 3)


def test_gln_size_three_block_only_uses_neighbours():
    one = SmoothChar.trivial(P)
    norm = SmoothChar.norm(P)
    t = [CharDatum(norm), CharDatum(SmoothChar.unramified(P, 1, 7)), CharDatum(one)]
    assert decide_gln(t).decision == "irreducible"
    t4 = t + [CharDatum(SmoothChar.unramified(P, 1, 11))]
    assert decide_gln(t4).decision == "inconclusive"


@given(st.lists(params_f1, min_size=2, max_size=2))
def test_gln_agrees_with_gl2(params):
    t = build(params)
    a, b = decide_gl2(t).decision, decide_gln(t).decision
    assert (a == "reducible") == (b == "inconclusive")


@given(st.lists(params_f1, min_size=3, max_size=3))
def test_gln_never_contradicts_gl3(params):
    t = build(params)
    if decide_gl3(t).decision == "reducible":
        assert decide_gln(t).decision == "inconclusive"


@given(st.lists(params_f1, min_size=3, max_size=3))
def test_iota_is_an_involution_and_preserves_gl3(params):
    t = build(params)
    assert tuple(iota_transform(iota_transform(t))) == tuple(t)
    v, w = decide_gl3(t), decide_gl3(iota_transform(t))
    assert v.decision == w.decision
    if v.decision == "reducible" and not ratio_is_non_positive(params[1], params[2]):
        assert v.witness[0] == 1 and w.witness[0] == 2


@given(st.lists(params_f1, min_size=3, max_size=3), params_f1)
def test_twist_invariance(params, by):
    t = build(params)
    c = datum(*by)
    assert decide_gl3(twist(t, c)).decision == decide_gl3(t).decision
    assert q_parabolic(twist(t, c)) == q_parabolic(t)


def test_jacquet_flags():
    chi3 = SmoothChar.unramified(P, 1, 5)
    chi1 = SmoothChar.unramified(P, 1, 2)
    j = jacquet_constituents((chi1, chi3.twist_norm(1), chi3))
    assert not j.differs_from_prime and j.differs_from_double_prime
    assert j.chi_prime[1] == chi3.twist_norm(1) and j.chi_prime[2] == chi3
    j = jacquet_constituents((chi3.twist_norm(2), chi1, chi3))
    assert j.differs_from_prime and not j.differs_from_double_prime
    j = jacquet_constituents((chi1, chi1, chi3))
    assert j.differs_from_prime and j.differs_from_double_prime


def test_final_case_hypotheses():
    one = SmoothChar.trivial(P)
    h = final_case_hypotheses((SmoothChar.unramified(P, 1, 2), one, SmoothChar.unramified(P, 1, 5)))
    assert all(h.values())
    h = final_case_hypotheses((one, one, SmoothChar.unramified(P, 1, 9)))
    assert not h["chi1_ne_chi2"] and not h["eta2_at_p_larger_than_q"]
