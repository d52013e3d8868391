"""Smooth characters of F^x = p^Z x O^x and symbolic smooth-times-algebraic character data."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from gmpy2 import mpq

from .coeff import CycloNum, ONE
from .padic import FScalar, PrecisionError, ResidueRing, UnitChar, unit_group


def _lift_unit_char(chi: UnitChar, level: int) -> UnitChar:
    """The same character viewed on (O/p^level)^x, composing with reduction."""
    src = chi.group
    if level == src.level:
        return chi
    tgt = unit_group(src.p, src.f, level)
    if level < src.level:
        # descent: only valid when the character factors through the smaller quotient
        exps = []
        E = src.exponent
        for g, d in zip(tgt.gens, tgt.orders):
            lifted = _lift_element(g, src)
            log = chi.log(lifted)
            if (log * d) % E:
                raise ValueError("character does not factor through the requested level")
            exps.append(log * d // E)
        out = UnitChar(tgt, exps)
        E2 = tgt.exponent
        for u in src.elements():
            # zeta_E^a == zeta_E2^b  iff  a*E2 == b*E mod E*E2
            if (chi.log(u) * E2 - out.log(src.ring.gr.reduce(u, level)) * E) % (E * E2):
                raise ValueError("character does not factor through the requested level")
        return out
    E = src.exponent
    exps = []
    for g, d in zip(tgt.gens, tgt.orders):
        log = chi.log(src.ring.gr.reduce(g, src.level))
        if (log * d) % E:
            raise AssertionError("inconsistent lift")
        exps.append(log * d // E)
    return UnitChar(tgt, exps)


def _lift_element(u, group):
    """Any lift of a residue-class unit to group.ring (coordinates are already integers)."""
    return group.ring.reduce(u)


class SmoothChar:
    """Smooth character chi of F^x: chi(p^v u) = at_uniformizer^v * unit_char(u mod p^c).

    The unit part is stored on (O/p^c)^x with c the exact conductor.
    """

    __slots__ = ("p", "f", "at_uniformizer", "unit_char", "conductor")

    def __init__(self, at_uniformizer, unit_char: UnitChar):
        at_uniformizer = CycloNum.coerce(at_uniformizer)
        if at_uniformizer.is_zero():
            raise ValueError("value at the uniformizer must be nonzero")
        g = unit_char.group
        c = unit_char.conductor()
        self.p, self.f = g.p, g.f
        self.at_uniformizer = at_uniformizer
        self.unit_char = _lift_unit_char(unit_char, c) if c != g.level else unit_char
        self.conductor = c

    # constructors
    @classmethod
    def unramified(cls, p: int, f: int, value) -> "SmoothChar":
        return cls(value, UnitChar.trivial(unit_group(p, f, 0)))

    @classmethod
    def trivial(cls, p: int, f: int = 1) -> "SmoothChar":
        return cls.unramified(p, f, 1)

    @classmethod
    def norm(cls, p: int, f: int = 1) -> "SmoothChar":
        """|.|_F, with |p| = 1/q."""
        return cls.unramified(p, f, mpq(1, p ** f))

    @property
    def q(self) -> int:
        return self.p ** self.f

    def _unit_log(self, u) -> tuple:
        """(exponent E, log) with unit_char(u) = zeta_E^log."""
        g = self.unit_char.group
        if self.conductor == 0:
            return 1, 0
        return g.exponent, self.unit_char.log(g.ring.gr.reduce(u, self.conductor))

    def on_unit(self, u) -> CycloNum:
        """Value on a unit given as a ring element known modulo at least p^conductor."""
        E, log = self._unit_log(u)
        return CycloNum.root_of_unity(E, log) if E > 1 else ONE

    def on_ring(self, x, level: int) -> CycloNum:
        """Value at a nonzero element of O/p^level, certified only if enough digits are known."""
        gr = self.unit_char.group.ring.gr
        v = gr.valuation(x, level)
        if v >= level:
            raise ZeroDivisionError("character evaluated at zero")
        if level - v < self.conductor:
            raise PrecisionError(f"unit part known mod p^{level - v}, conductor is {self.conductor}")
        unit = gr.divide_p(gr.reduce(x, level), v)
        return self.at_uniformizer ** v * self.on_unit(unit)

    def __call__(self, x: FScalar) -> CycloNum:
        if x.is_zero():
            raise ZeroDivisionError("character evaluated at zero")
        if x.prec < self.conductor:
            raise PrecisionError(f"unit part known mod p^{x.prec}, conductor is {self.conductor}")
        return self.at_uniformizer ** x.val * self.on_unit(x.unit)

    def at_power(self, v: int) -> CycloNum:
        """chi(p^v)"""
        return self.at_uniformizer ** v

    # arithmetic
    def _common_level(self, other):
        level = max(self.conductor, other.conductor)
        return _lift_unit_char(self.unit_char, level), _lift_unit_char(other.unit_char, level)

    def __mul__(self, other: "SmoothChar") -> "SmoothChar":
        self._check(other)
        a, b = self._common_level(other)
        return SmoothChar(self.at_uniformizer * other.at_uniformizer, a * b)

    def inverse(self) -> "SmoothChar":
        return SmoothChar(self.at_uniformizer.inverse(), self.unit_char.inverse())

    def __truediv__(self, other: "SmoothChar") -> "SmoothChar":
        return self * other.inverse()

    def __pow__(self, k: int) -> "SmoothChar":
        out = SmoothChar.trivial(self.p, self.f)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            out = out * base
        return out

    def twist_norm(self, k: int) -> "SmoothChar":
        """chi * |.|^k"""
        return self * SmoothChar.norm(self.p, self.f) ** k

    def _check(self, other):
        if (self.p, self.f) != (other.p, other.f):
            raise ValueError("characters of different fields")

    def __eq__(self, other):
        if not isinstance(other, SmoothChar):
            return NotImplemented
        return ((self.p, self.f) == (other.p, other.f) and self.at_uniformizer == other.at_uniformizer
                and self.conductor == other.conductor and self.unit_char.exps == other.unit_char.exps)

    __hash__ = None

    def is_trivial(self) -> bool:
        return self.conductor == 0 and self.at_uniformizer == ONE

    def is_unramified(self) -> bool:
        return self.conductor == 0

    def rebase(self, unit) -> "SmoothChar":
        """Same character, recorded relative to the uniformizer unit * p."""
        return SmoothChar(self.at_uniformizer * self.on_unit(unit), self.unit_char)

    def __repr__(self):
        return f"SmoothChar(at_p={self.at_uniformizer!r}, unit={self.unit_char.exps}, c={self.conductor})"

    def to_json(self):
        return {
            "uniformizer_value": self.at_uniformizer.to_json(),
            "unit_char": list(self.unit_char.exps),
            "conductor": self.conductor,
        }


def unit_characters(p: int, f: int, level: int) -> list:
    """All smooth unit characters of conductor <= level, as SmoothChar with value 1 at p."""
    from .padic import enumerate_unit_characters
    R = ResidueRing(p, f, level)
    return [SmoothChar(1, u) for u in enumerate_unit_characters(R, level)]


# symbolic character data

@dataclass(frozen=True)
class AlgebraicPart:
    """t -> prod_kappa kappa(t)^(a_kappa), one exponent per embedding label."""

    exponents: tuple

    def __post_init__(self):
        object.__setattr__(self, "exponents", tuple(int(a) for a in self.exponents))

    @classmethod
    def zero(cls, f: int):
        return cls((0,) * f)

    def __mul__(self, other):
        return AlgebraicPart(tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    def inverse(self):
        return AlgebraicPart(tuple(-a for a in self.exponents))

    def __sub__(self, other):
        return self * other.inverse()

    def is_zero(self):
        return not any(self.exponents)


class CharDatum:
    """chi = smooth * algebraic, in the unique factorisation used by the criteria."""

    __slots__ = ("smooth", "algebraic")

    def __init__(self, smooth: SmoothChar, algebraic: AlgebraicPart | Sequence[int] | None = None):
        if algebraic is None:
            algebraic = AlgebraicPart.zero(smooth.f)
        if not isinstance(algebraic, AlgebraicPart):
            algebraic = AlgebraicPart(tuple(algebraic))
        if len(algebraic.exponents) != smooth.f:
            raise ValueError("need one algebraic exponent per embedding")
        self.smooth = smooth
        self.algebraic = algebraic

    @property
    def f(self):
        return self.smooth.f

    def __mul__(self, other):
        return CharDatum(self.smooth * other.smooth, self.algebraic * other.algebraic)

    def inverse(self):
        return CharDatum(self.smooth.inverse(), self.algebraic.inverse())

    def __truediv__(self, other):
        return self * other.inverse()

    def __eq__(self, other):
        if not isinstance(other, CharDatum):
            return NotImplemented
        return self.smooth == other.smooth and self.algebraic == other.algebraic

    __hash__ = None

    def is_trivial(self):
        return self.smooth.is_trivial() and self.algebraic.is_zero()

    def __repr__(self):
        return f"CharDatum({self.smooth!r}, alg={self.algebraic.exponents})"

    def to_json(self):
        out = self.smooth.to_json()
        out["algebraic_exponents"] = list(self.algebraic.exponents)
        return out


def is_non_positive_algebraic(d: CharDatum) -> tuple:
    """(True, exponents) iff d is t -> prod kappa(t)^(a_kappa) with every a_kappa <= 0."""
    ok = d.smooth.is_trivial() and all(a <= 0 for a in d.algebraic.exponents)
    return ok, (d.algebraic.exponents if ok else None)


# parsing of character values written as text

_TERM = re.compile(r"([+-])?([0-9]+(?:/[0-9]+)?)?(\*?zeta\(([0-9]+)\)(?:\^([0-9]+))?)?")


def parse_value(text) -> CycloNum:
    """Parse '3', '-1/2', 'zeta(4)', '2*zeta(6)^5' or a sum of such terms."""
    if isinstance(text, bool):
        raise ValueError(f"cannot parse character value {text!r}")
    if isinstance(text, int):
        return CycloNum.rational(text)
    if not isinstance(text, str):
        raise ValueError(f"cannot parse character value {text!r}")
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty character value")
    total = CycloNum.rational(0)
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        sign, num, root, n, k = m.groups()
        if m.end() == pos or (num is None and root is None) or (pos > 0 and sign is None):
            raise ValueError(f"cannot parse character value {text!r}")
        if root is not None and root.startswith("*") and num is None:
            raise ValueError(f"cannot parse character value {text!r}")
        coef = mpq(num) if num else mpq(1)
        if sign == "-":
            coef = -coef
        if root is not None:
            if int(n) == 0:
                raise ValueError("root of unity of order 0")
            total = total + CycloNum.root_of_unity(int(n), int(k or 1)) * coef
        else:
            total = total + coef
        pos = m.end()
    return total
