"""Decision procedures for the irreducibility of continuous principal series of GL_n(F).

Characters are CharDatum values: a smooth character times t -> prod_kappa kappa(t)^(a_kappa).
The derivative d chi of such a character is its algebraic exponent tuple.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .characters import AlgebraicPart, CharDatum, SmoothChar, is_non_positive_algebraic
from .coeff import padic_valuation


class CharTuple(tuple):
    """(chi_1, ..., chi_n) with n >= 2 over a common field."""

    def __new__(cls, entries: Sequence[CharDatum]):
        entries = tuple(e if isinstance(e, CharDatum) else CharDatum(e) for e in entries)
        if len(entries) < 2:
            raise ValueError("need at least two characters")
        first = entries[0].smooth
        if any((e.smooth.p, e.smooth.f) != (first.p, first.f) for e in entries):
            raise ValueError("characters of different fields")
        return super().__new__(cls, entries)

    @property
    def n(self) -> int:
        return len(self)

    def ratio(self, i: int, j: int) -> CharDatum:
        """chi_i chi_j^-1 with 1-based indices."""
        return self[i - 1] / self[j - 1]


@dataclass(frozen=True)
class Verdict:
    """decision is 'reducible', 'irreducible' or 'inconclusive'."""

    decision: str
    witness: tuple | None = None

    def to_json(self):
        out = {"decision": self.decision}
        if self.witness is not None:
            out["witness"] = _witness_json(self.witness)
        return out


def _witness_json(w):
    if isinstance(w, tuple):
        return [_witness_json(x) for x in w]
    return w


def _as_tuple(t) -> CharTuple:
    return t if isinstance(t, CharTuple) else CharTuple(t)


def decide_gl2(t) -> Verdict:
    """Reducible iff chi_1 chi_2^-1 = prod kappa^(k_kappa) with all k_kappa <= 0."""
    t = _as_tuple(t)
    if t.n != 2:
        raise ValueError("decide_gl2 needs two characters")
    ok, exps = is_non_positive_algebraic(t.ratio(1, 2))
    if ok:
        return Verdict("reducible", (1, exps))
    return Verdict("irreducible")


def decide_gl3(t) -> Verdict:
    """Reducible iff chi_1 chi_2^-1 or chi_2 chi_3^-1 is non-positive algebraic; the witness
    is (index i, exponents) for the first such ratio chi_i chi_(i+1)^-1."""
    t = _as_tuple(t)
    if t.n != 3:
        raise ValueError("decide_gl3 needs three characters")
    for i in (1, 2):
        ok, exps = is_non_positive_algebraic(t.ratio(i, i + 1))
        if ok:
            return Verdict("reducible", (i, exps))
    return Verdict("irreducible")


def _difference_is_non_positive(a: AlgebraicPart, b: AlgebraicPart) -> bool:
    return all(x - y <= 0 for x, y in zip(a.exponents, b.exponents))


def breakpoints(t) -> tuple:
    """n_1 < ... < n_r = n: i is a breakpoint iff some component of a_i - a_(i+1) is positive."""
    t = _as_tuple(t)
    out = [i for i in range(1, t.n) if not _difference_is_non_positive(t[i - 1].algebraic, t[i].algebraic)]
    return tuple(out + [t.n])


def blocks(t) -> list:
    """Consecutive 1-based index ranges between breakpoints."""
    out, start = [], 1
    for b in breakpoints(t):
        out.append(tuple(range(start, b + 1)))
        start = b + 1
    return out


PARABOLIC_NAMES = {(1, 2, 3): "B", (2, 3): "2+1", (1, 3): "1+2", (3,): "G"}


def q_parabolic(t) -> str:
    """Standard parabolic of GL_3 cut out by the algebraic parts: 'B', '2+1', '1+2' or 'G'."""
    t = _as_tuple(t)
    if t.n != 3:
        raise ValueError("q_parabolic is defined for three characters")
    return PARABOLIC_NAMES[breakpoints(t)]


def decide_gln(t) -> Verdict:
    """Irreducible unless some i < j inside one block satisfies (i) and (ii):

    (i) blocks of size 3 only admit j = i + 1;
    (ii) chi_i chi_j^-1 = |.|^(j - i - 1) prod kappa^(a_i - a_j).
    Otherwise inconclusive with witness (i, j).
    """
    t = _as_tuple(t)
    p, f = t[0].smooth.p, t[0].smooth.f
    norm = SmoothChar.norm(p, f)
    for block in blocks(t):
        for x, i in enumerate(block):
            for j in block[x + 1:]:
                if len(block) == 3 and j - i != 1:
                    continue
                ratio = t.ratio(i, j)
                alg = t[i - 1].algebraic - t[j - 1].algebraic
                if ratio.smooth == norm ** (j - i - 1) and ratio.algebraic == alg:
                    return Verdict("inconclusive", (i, j))
    return Verdict("irreducible")


def iota_transform(t) -> CharTuple:
    """(chi_1, ..., chi_n) -> (chi_n^-1, ..., chi_1^-1)."""
    t = _as_tuple(t)
    return CharTuple([c.inverse() for c in reversed(t)])


def twist(t, by: CharDatum) -> CharTuple:
    t = _as_tuple(t)
    return CharTuple([c * by for c in t])


@dataclass(frozen=True)
class JacquetConstituents:
    chi_prime: tuple
    chi_double_prime: tuple
    differs_from_prime: bool
    differs_from_double_prime: bool


def jacquet_constituents(chis: Sequence[SmoothChar]) -> JacquetConstituents:
    """chi' = chi_1 x chi_3|.| x chi_2|.|^-1 and chi'' = chi_2|.| x chi_3|.| x chi_1|.|^-2.

    The flags are chi_2 != chi_3|.| and chi_1 != chi_3|.|^2.
    """
    c1, c2, c3 = chis
    prime = (c1, c3.twist_norm(1), c2.twist_norm(-1))
    double = (c2.twist_norm(1), c3.twist_norm(1), c1.twist_norm(-2))
    return JacquetConstituents(prime, double, c2 != c3.twist_norm(1), c1 != c3.twist_norm(2))


def final_case_hypotheses(chis: Sequence[SmoothChar]) -> dict:
    """Hypotheses of the remaining smooth case, each as a boolean."""
    c1, c2, c3 = chis
    eta2 = c2.inverse() * c3
    q_val = c1.f  # v_p(q)
    return {
        "chi1_ne_chi2": c1 != c2,
        "chi2_ne_chi3": c2 != c3,
        "chi1_chi3_inv_ne_norm_sq": (c1 / c3) != SmoothChar.norm(c1.p, c1.f) ** 2,
        "eta2_at_p_larger_than_q": padic_valuation(eta2.at_uniformizer, c1.p) < q_val,
    }
