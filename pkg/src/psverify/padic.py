"""Residue rings O_F/p^m of unramified extensions F/Q_p, p-adic scalars, Haar sums.

Ring elements are plain ints when f = 1 and tuples of f ints (coordinates in
the basis 1, alpha, ..., alpha^(f-1)) otherwise.  The uniformizer is p.
"""
from __future__ import annotations

import itertools
import math
from functools import lru_cache
from typing import Callable, Sequence

from .coeff import CycloNum, ZERO

INF = math.inf


class PrecisionError(ArithmeticError):
    """Not enough p-adic precision to certify a result."""


# Galois ring arithmetic

@lru_cache(maxsize=None)
def defining_polynomial(p: int, f: int) -> tuple:
    """Smallest monic irreducible polynomial of degree f over F_p (low-to-high coefficients)."""
    if f == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=f):
        poly = tuple(tail) + (1,)
        if poly[0] == 0:
            continue
        if _irreducible_mod_p(poly, p):
            return poly
    raise ValueError("no irreducible polynomial found")


def _poly_mod(a, m, p):
    a = list(a)
    dm = len(m) - 1
    inv_lead = pow(m[-1], -1, p)
    while len(a) - 1 >= dm and any(a):
        if a[-1] % p == 0:
            a.pop()
            continue
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        a.pop()
    while a and a[-1] % p == 0:
        a.pop()
    return a


def _irreducible_mod_p(poly, p):
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            cand = tuple(tail) + (1,)
            if not _poly_mod(poly, cand, p):
                return False
    return True


class GaloisRing:
    """Arithmetic in W(F_q)/p^k for varying k; shared by all precisions."""

    def __init__(self, p: int, f: int = 1):
        self.p = p
        self.f = f
        self.q = p ** f
        self.poly = defining_polynomial(p, f)

    # conversions
    def from_int(self, n: int, k: int):
        mod = self.p ** k
        if self.f == 1:
            return n % mod
        return (n % mod,) + (0,) * (self.f - 1)

    def zero(self):
        return 0 if self.f == 1 else (0,) * self.f

    def one(self):
        return 1 if self.f == 1 else (1,) + (0,) * (self.f - 1)

    def reduce(self, x, k: int):
        mod = self.p ** k
        if self.f == 1:
            return x % mod
        return tuple(c % mod for c in x)

    def is_zero(self, x) -> bool:
        return x == 0 if self.f == 1 else not any(x)

    # ring operations mod p^k
    def add(self, x, y, k: int):
        mod = self.p ** k
        if self.f == 1:
            return (x + y) % mod
        return tuple((a + b) % mod for a, b in zip(x, y))

    def sub(self, x, y, k: int):
        mod = self.p ** k
        if self.f == 1:
            return (x - y) % mod
        return tuple((a - b) % mod for a, b in zip(x, y))

    def neg(self, x, k: int):
        mod = self.p ** k
        if self.f == 1:
            return (-x) % mod
        return tuple((-a) % mod for a in x)

    def scale(self, x, n: int, k: int):
        mod = self.p ** k
        if self.f == 1:
            return (x * n) % mod
        return tuple((a * n) % mod for a in x)

    def mul(self, x, y, k: int):
        mod = self.p ** k
        if self.f == 1:
            return (x * y) % mod
        f = self.f
        prod = [0] * (2 * f - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        prod[i + j] += a * b
        poly = self.poly
        for d in range(2 * f - 2, f - 1, -1):
            c = prod[d]
            if c:
                prod[d] = 0
                for i in range(f):
                    prod[d - f + i] -= c * poly[i]
        return tuple(c % mod for c in prod[:f])

    def valuation(self, x, k: int):
        """Valuation of x viewed mod p^k; returns k for zero."""
        p = self.p
        coords = (x,) if self.f == 1 else x
        best = k
        for c in coords:
            c %= p ** k
            if c:
                v = 0
                while c % p == 0:
                    c //= p
                    v += 1
                best = min(best, v)
        return best

    def is_unit(self, x) -> bool:
        p = self.p
        if self.f == 1:
            return x % p != 0
        return any(c % p for c in x)

    def divide_p(self, x, e: int):
        """x / p^e assuming divisibility."""
        d = self.p ** e
        if self.f == 1:
            return x // d
        return tuple(c // d for c in x)

    def times_p(self, x, e: int, k: int):
        return self.scale(x, self.p ** e, k)

    def inv(self, x, k: int):
        """Inverse of a unit mod p^k."""
        p = self.p
        if self.f == 1:
            return pow(x, -1, p ** k)
        if not self.is_unit(x):
            raise ZeroDivisionError("not a unit")
        y = self._inv_residue(x)
        prec = 1
        two = self.from_int(2, k)
        while prec < k:
            prec = min(2 * prec, k)
            y = self.mul(y, self.sub(two, self.mul(x, y, prec), prec), prec)
        return self.reduce(y, k)

    def _inv_residue(self, x):
        # brute force in F_q; q is small for every supported configuration
        p, f = self.p, self.f
        x1 = self.reduce(x, 1)
        for cand in itertools.product(range(p), repeat=f):
            if self.mul(x1, cand, 1) == self.one():
                return tuple(cand)
        raise ZeroDivisionError("not a unit")

    def elements(self, k: int):
        mod = self.p ** k
        if self.f == 1:
            return range(mod)
        return [tuple(c) for c in itertools.product(range(mod), repeat=self.f)]

    def index(self, x, k: int) -> int:
        if self.f == 1:
            return x
        mod = self.p ** k
        idx = 0
        for c in x:
            idx = idx * mod + c
        return idx

    def basis(self, k: int):
        """Z/p^k-module basis 1, alpha, ..., alpha^(f-1)."""
        if self.f == 1:
            return [1]
        return [tuple(int(i == j) for j in range(self.f)) for i in range(self.f)]


@lru_cache(maxsize=None)
def galois_ring(p: int, f: int = 1) -> GaloisRing:
    return GaloisRing(p, f)


class ResidueRing:
    """O_F / p^m for F unramified of degree f over Q_p."""

    def __init__(self, p: int, f: int, m: int):
        if m < 0:
            raise ValueError("level must be non-negative")
        self.p, self.f, self.m = p, f, m
        self.gr = galois_ring(p, f)
        self.q = p ** f
        self.size = self.q ** m

    def __repr__(self):
        return f"ResidueRing(p={self.p}, f={self.f}, m={self.m})"

    def __eq__(self, other):
        return isinstance(other, ResidueRing) and (self.p, self.f, self.m) == (other.p, other.f, other.m)

    def __hash__(self):
        return hash((self.p, self.f, self.m))

    def elements(self):
        return self.gr.elements(self.m)

    def index(self, x) -> int:
        return self.gr.index(x, self.m)

    def add(self, x, y):
        return self.gr.add(x, y, self.m)

    def sub(self, x, y):
        return self.gr.sub(x, y, self.m)

    def mul(self, x, y):
        return self.gr.mul(x, y, self.m)

    def neg(self, x):
        return self.gr.neg(x, self.m)

    def inv(self, x):
        return self.gr.inv(x, self.m)

    def is_unit(self, x) -> bool:
        return self.m > 0 and self.gr.is_unit(x)

    def valuation(self, x):
        return self.gr.valuation(x, self.m)

    def from_int(self, n: int):
        return self.gr.from_int(n, self.m)

    def reduce(self, x):
        return self.gr.reduce(x, self.m)

    def zero(self):
        return self.gr.zero()

    def one(self):
        return self.gr.reduce(self.gr.one(), self.m)

    def units(self):
        return [x for x in self.elements() if self.is_unit(x)]


# p-adic scalars

class FieldContext:
    """Parameters of F: p, residue degree f, and the session precision cap."""

    def __init__(self, p: int, f: int = 1, cap: int = 40):
        self.p, self.f, self.cap = p, f, cap
        self.q = p ** f
        self.gr = galois_ring(p, f)

    def __repr__(self):
        return f"FieldContext(p={self.p}, f={self.f}, cap={self.cap})"

    def __eq__(self, other):
        return isinstance(other, FieldContext) and (self.p, self.f) == (other.p, other.f)

    def __hash__(self):
        return hash((self.p, self.f))

    def scalar(self, x, prec: int | None = None) -> "FScalar":
        """Exact integer (or Galois ring tuple with integer coordinates) as an FScalar."""
        prec = self.cap if prec is None else prec
        if self.f == 1 and isinstance(x, int):
            return FScalar.from_integer(self, x, prec)
        if isinstance(x, int):
            x = (x,) + (0,) * (self.f - 1)
        return FScalar.from_ring(self, tuple(x), prec)

    def rational(self, num: int, den: int = 1, prec: int | None = None) -> "FScalar":
        return self.scalar(num, prec) / self.scalar(den, prec)

    def uniformizer_power(self, e: int) -> "FScalar":
        return FScalar(self, e, self.gr.one(), self.cap)

    def zero(self) -> "FScalar":
        return FScalar.exact_zero(self)

    def one(self) -> "FScalar":
        return FScalar(self, 0, self.gr.one(), self.cap)


class FScalar:
    """p^val * unit, with the unit known modulo p^prec.

    Zero comes in two kinds: exact zero (val = inf) and zero known only modulo
    p^val (flag ``approx_zero``).
    """

    __slots__ = ("ctx", "val", "unit", "prec", "approx_zero")

    def __init__(self, ctx: FieldContext, val, unit, prec: int, approx_zero: bool = False):
        self.ctx = ctx
        self.val = val
        self.unit = unit
        self.prec = prec
        self.approx_zero = approx_zero

    @classmethod
    def exact_zero(cls, ctx):
        return cls(ctx, INF, None, 0)

    @classmethod
    def zero_at(cls, ctx, absprec: int):
        return cls(ctx, absprec, None, 0, approx_zero=True)

    @classmethod
    def from_integer(cls, ctx, n: int, prec: int):
        if n == 0:
            return cls.exact_zero(ctx)
        p = ctx.p
        v = 0
        while n % p == 0:
            n //= p
            v += 1
        return cls(ctx, v, ctx.gr.from_int(n, prec), prec)

    @classmethod
    def from_ring(cls, ctx, x, prec: int, absolute: bool = False):
        """Element of the Galois ring with integer coordinates.

        With absolute=True, x is only known modulo p^prec (absolute precision).
        """
        gr = ctx.gr
        if absolute:
            v = gr.valuation(x, prec)
            if v >= prec:
                return cls.zero_at(ctx, prec)
            return cls(ctx, v, gr.reduce(gr.divide_p(gr.reduce(x, prec), v), prec - v), prec - v)
        coords = (x,) if ctx.f == 1 else x
        if not any(coords):
            return cls.exact_zero(ctx)
        v = min(_vp_int(c, ctx.p) for c in coords if c)
        return cls(ctx, v, gr.reduce(gr.divide_p(x, v), prec), prec)

    # predicates
    def is_exact_zero(self) -> bool:
        return self.unit is None and not self.approx_zero

    def is_zero(self) -> bool:
        return self.unit is None

    @property
    def absprec(self):
        if self.unit is None:
            return self.val
        return self.val + self.prec

    def __repr__(self):
        if self.is_exact_zero():
            return "FScalar(0)"
        if self.approx_zero:
            return f"FScalar(O(p^{self.val}))"
        return f"FScalar(p^{self.val}*{self.unit} + O(p^{self.absprec}))"

    # arithmetic
    def __mul__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        if self.unit is None or other.unit is None:
            if self.is_exact_zero() or other.is_exact_zero():
                return FScalar.exact_zero(self.ctx)
            lo = (self.val if self.unit is None else self.val) + (other.val if other.unit is None else other.val)
            if self.unit is None and other.unit is None:
                return FScalar.zero_at(self.ctx, self.val + other.val)
            return FScalar.zero_at(self.ctx, lo)
        prec = min(self.prec, other.prec)
        gr = self.ctx.gr
        return FScalar(self.ctx, self.val + other.val, gr.mul(self.unit, other.unit, prec), prec)

    __rmul__ = __mul__

    def __neg__(self):
        if self.unit is None:
            return self
        return FScalar(self.ctx, self.val, self.ctx.gr.neg(self.unit, self.prec), self.prec)

    def __add__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        absprec = min(self.absprec, other.absprec)
        lo = min(self.val, other.val)
        if lo >= absprec:
            return FScalar.zero_at(self.ctx, absprec)
        gr = self.ctx.gr
        k = absprec - lo
        acc = gr.zero()
        for term in (self, other):
            if term.unit is not None:
                shifted = gr.times_p(term.unit, term.val - lo, k)
                acc = gr.add(acc, shifted, k)
        v = gr.valuation(acc, k)
        if v >= k:
            return FScalar.zero_at(self.ctx, absprec)
        unit = gr.divide_p(gr.reduce(acc, k), v)
        newprec = k - v
        return FScalar(self.ctx, lo + v, gr.reduce(unit, newprec), newprec)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def inverse(self):
        if self.unit is None:
            raise ZeroDivisionError("inverse of a (possibly approximate) zero")
        return FScalar(self.ctx, -self.val, self.ctx.gr.inv(self.unit, self.prec), self.prec)

    def __truediv__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, int):
            other = self.ctx.scalar(other)
        return other * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        out = self.ctx.one()
        for _ in range(e):
            out = out * self
        return out

    def shift(self, e: int) -> "FScalar":
        """Multiply by p^e."""
        if self.unit is None:
            return self if self.is_exact_zero() else FScalar.zero_at(self.ctx, self.val + e)
        return FScalar(self.ctx, self.val + e, self.unit, self.prec)

    def valuation(self):
        """Valuation; raises if the element is only known to be zero."""
        if self.approx_zero:
            raise PrecisionError(f"valuation of zero known only mod p^{self.val}")
        return self.val

    def equals(self, other) -> bool:
        """Equality up to the common absolute precision."""
        d = self - other
        return d.is_zero()

    def to_ring(self, m: int):
        """Reduction modulo p^m of an integral element."""
        gr = self.ctx.gr
        if self.is_exact_zero():
            return gr.zero() if self.ctx.f > 1 else 0
        if self.absprec < m:
            raise PrecisionError(f"need absolute precision {m}, have {self.absprec}")
        if self.unit is None:
            return gr.zero()
        if self.val < 0:
            raise ValueError("element is not integral")
        if self.val >= m:
            return gr.zero()
        return gr.times_p(gr.reduce(self.unit, m - self.val), self.val, m)

    def unit_mod(self, c: int):
        """Unit part modulo p^c."""
        if self.unit is None:
            raise ZeroDivisionError("zero has no unit part")
        if self.prec < c:
            raise PrecisionError(f"unit known mod p^{self.prec}, need p^{c}")
        return self.ctx.gr.reduce(self.unit, c)

    def is_integral(self) -> bool:
        return self.val >= 0

    def lift(self):
        """A rational number (f=1) represented by this scalar; for tests and display."""
        from fractions import Fraction
        if self.unit is None:
            return Fraction(0)
        if self.ctx.f != 1:
            raise ValueError("lift only for f = 1")
        return Fraction(self.unit) * Fraction(self.ctx.p) ** self.val


def _vp_int(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


# Haar integration

class CosetDomain:
    """center + p^r O, or (with ``punctured``) the set O minus p^k O."""

    def __init__(self, center=0, radius: int = 0, punctured: int | None = None):
        self.center = center
        self.radius = radius
        self.punctured = punctured

    @classmethod
    def ring_of_integers(cls):
        return cls(0, 0)

    @classmethod
    def units(cls):
        return cls(0, 0, punctured=1)

    @classmethod
    def ideal(cls, k: int):
        return cls(0, k)

    @classmethod
    def minus_ideal(cls, k: int):
        """O minus p^k O."""
        return cls(0, 0, punctured=k)

    def volume(self, q: int):
        from gmpy2 import mpq
        if self.punctured is not None:
            return 1 - mpq(1, q ** self.punctured)
        return mpq(1, q ** self.radius)

    def contains(self, R: ResidueRing, x) -> bool:
        if self.punctured is not None:
            return R.valuation(x) < self.punctured
        if self.radius == 0:
            return True
        center = R.reduce(self.center) if not isinstance(self.center, int) or R.f == 1 else R.from_int(self.center)
        return R.valuation(R.sub(x, center)) >= self.radius

    def required_level(self) -> int:
        return self.punctured if self.punctured is not None else self.radius


class IntegrandTable:
    """Values of a locally constant function on O, tabulated on O/p^m."""

    def __init__(self, ring: ResidueRing, values: Sequence):
        if len(values) != ring.size:
            raise ValueError("table size must equal q^m")
        self.ring = ring
        self.values = list(values)

    @classmethod
    def from_function(cls, ring: ResidueRing, fn: Callable):
        return cls(ring, [fn(x) for x in ring.elements()])

    def __call__(self, x):
        return self.values[self.ring.index(x)]

    def __eq__(self, other):
        return self.ring == other.ring and all(a == b for a, b in zip(self.values, other.values))


def haar_integrate(fn: IntegrandTable, dom: CosetDomain | None = None) -> CycloNum:
    """Exact integral of a tabulated locally constant function over dom (vol O = 1)."""
    from gmpy2 import mpq
    R = fn.ring
    dom = dom or CosetDomain.ring_of_integers()
    if dom.required_level() > R.m:
        raise PrecisionError(f"domain needs level {dom.required_level()}, table has level {R.m}")
    acc = ZERO
    for x, v in zip(R.elements(), fn.values):
        if dom.contains(R, x):
            acc = acc + v
    return acc * mpq(1, R.size)


# unit groups and their characters

class UnitGroup:
    """(O/p^c)^x with an explicit basis and discrete-log table."""

    def __init__(self, p: int, f: int, level: int):
        self.p, self.f, self.level = p, f, level
        self.ring = ResidueRing(p, f, level)
        R = self.ring
        if level == 0:
            self.gens, self.orders, self.exponent = [], [], 1
            self._log = {R.zero(): ()}
            return
        gens = self._natural_generators()
        # relation lattice from a BFS over the group
        start = R.one()
        seen = {start: (0,) * len(gens)}
        frontier = [start]
        relations = []
        while frontier:
            nxt = []
            for x in frontier:
                ex = seen[x]
                for i, g in enumerate(gens):
                    y = R.mul(x, g)
                    ey = ex[:i] + (ex[i] + 1,) + ex[i + 1:]
                    if y in seen:
                        rel = tuple(a - b for a, b in zip(ey, seen[y]))
                        if any(rel):
                            relations.append(rel)
                    else:
                        seen[y] = ey
                        nxt.append(y)
            frontier = nxt
        order = len(seen)
        expected = (self.ring.q - 1) * self.ring.q ** (level - 1)
        if order != expected:
            raise AssertionError("unit group enumeration is incomplete")
        diag, new_gens = _smith_basis(relations, gens, R)
        keep = [(d, g) for d, g in zip(diag, new_gens) if d != 1]
        self.orders = [d for d, _ in keep]
        self.gens = [g for _, g in keep]
        self.exponent = math.lcm(*self.orders) if self.orders else 1
        # discrete log table by enumerating the product decomposition
        self._log = {}
        for exps in itertools.product(*[range(d) for d in self.orders]):
            x = R.one()
            for g, e in zip(self.gens, exps):
                x = R.mul(x, _ring_pow(R, g, e))
            self._log[x] = exps
        if len(self._log) != order:
            raise AssertionError("basis does not generate the unit group")

    def _natural_generators(self):
        R, gr = self.ring, self.ring.gr
        gens = []
        # a lift of a generator of F_q^x
        F1 = ResidueRing(self.p, self.f, 1)
        q = F1.q
        prim = None
        for x in F1.units():
            ok = True
            for r in _prime_factors(q - 1):
                if _ring_pow(F1, x, (q - 1) // r) == F1.one():
                    ok = False
                    break
            if ok:
                prim = x
                break
        gens.append(R.reduce(prim))
        gens.append(R.neg(R.one()))
        for j in range(1, self.level):
            for b in gr.basis(self.level):
                gens.append(R.add(R.one(), gr.times_p(b, j, self.level)))
        return gens

    def __len__(self):
        return len(self._log)

    def dlog(self, u) -> tuple:
        return self._log[self.ring.reduce(u)]

    def elements(self):
        return list(self._log)

    def __eq__(self, other):
        return isinstance(other, UnitGroup) and (self.p, self.f, self.level) == (other.p, other.f, other.level)

    def __hash__(self):
        return hash((self.p, self.f, self.level))


@lru_cache(maxsize=None)
def unit_group(p: int, f: int, level: int) -> UnitGroup:
    return UnitGroup(p, f, level)


def _ring_pow(R, x, e):
    out = R.one()
    base = x
    while e:
        if e & 1:
            out = R.mul(out, base)
        base = R.mul(base, base)
        e >>= 1
    return out


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _smith_basis(relations, gens, R):
    """Diagonalise the relation lattice; return invariant factors and matching generators.

    Column operations on the relation matrix are mirrored on the generators:
    adding c * column j to column i replaces gen_j by gen_j * gen_i^(-c).
    """
    n = len(gens)
    rows = [list(r) for r in relations]
    gens = list(gens)
    diag = []

    def col_op(i, j, c):  # col_i += c * col_j
        for r in rows:
            r[i] += c * r[j]
        gens[j] = R.mul(gens[j], _ring_pow(R, R.inv(gens[i]), c) if c > 0 else _ring_pow(R, gens[i], -c))

    def swap_cols(i, j):
        for r in rows:
            r[i], r[j] = r[j], r[i]
        gens[i], gens[j] = gens[j], gens[i]

    t = 0
    while t < n:
        active = [r for r in rows if any(r[t:])]
        if not active:
            diag.extend([0] * (n - t))
            break
        # bring the smallest nonzero entry to (t, t)
        while True:
            active = [r for r in rows if any(r[t:])]
            best = min(((abs(r[j]), ri, j) for ri, r in enumerate(rows) for j in range(t, n) if r[j]), default=None)
            _, ri, j = best
            rows[t], rows[ri] = rows[ri], rows[t]
            if j != t:
                swap_cols(t, j)
            piv = rows[t][t]
            done = True
            for j in range(t + 1, n):
                if rows[t][j]:
                    c = rows[t][j] // piv
                    col_op(j, t, -c)
                    if rows[t][j]:
                        done = False
            for ri in range(len(rows)):
                if ri != t and rows[ri][t]:
                    c = rows[ri][t] // piv
                    rows[ri] = [a - c * b for a, b in zip(rows[ri], rows[t])]
                    if rows[ri][t]:
                        done = False
            if done:
                break
        diag.append(abs(rows[t][t]))
        t += 1
    # invariant factors need not divide each other; only the diagonal shape matters here
    return diag, gens


class UnitChar:
    """Character of (O/p^c)^x: exponent e_i means basis generator i maps to zeta_{d_i}^{e_i}."""

    __slots__ = ("group", "exps")

    def __init__(self, group: UnitGroup, exps: Sequence[int]):
        self.group = group
        self.exps = tuple(e % d for e, d in zip(exps, group.orders))
        if len(self.exps) != len(group.orders):
            raise ValueError("wrong number of generator images")

    @classmethod
    def trivial(cls, group: UnitGroup):
        return cls(group, [0] * len(group.orders))

    def log(self, u) -> int:
        """chi(u) = zeta_E^log(u) with E the group exponent."""
        g = self.group
        E = g.exponent
        return sum(e * x * (E // d) for e, x, d in zip(self.exps, g.dlog(u), g.orders)) % E

    def __call__(self, u) -> CycloNum:
        return CycloNum.root_of_unity(self.group.exponent, self.log(u))

    def __mul__(self, other: "UnitChar") -> "UnitChar":
        self._check(other)
        return UnitChar(self.group, [a + b for a, b in zip(self.exps, other.exps)])

    def inverse(self) -> "UnitChar":
        return UnitChar(self.group, [-a for a in self.exps])

    def _check(self, other):
        if self.group != other.group:
            raise ValueError("characters live on different unit groups")

    def is_trivial(self) -> bool:
        return not any(self.exps)

    def __eq__(self, other):
        return isinstance(other, UnitChar) and self.group == other.group and self.exps == other.exps

    def __hash__(self):
        return hash((self.group, self.exps))

    def conductor(self) -> int:
        """Smallest c >= 0 with the character trivial on 1 + p^c O (all units when c = 0)."""
        g = self.group
        if self.is_trivial():
            return 0
        R, gr = g.ring, g.ring.gr
        for c in range(1, g.level + 1):
            gens = [R.add(R.one(), gr.times_p(b, j, g.level)) for j in range(c, g.level) for b in gr.basis(g.level)]
            if all(self.log(u) == 0 for u in gens):
                return c
        return g.level

    def __repr__(self):
        return f"UnitChar(level={self.group.level}, exps={self.exps})"


def enumerate_unit_characters(R: ResidueRing, c: int) -> list:
    """All characters of (O/p^c)^x, each given by images of the fixed basis."""
    if c > R.m:
        raise ValueError("level exceeds ring precision")
    g = unit_group(R.p, R.f, c)
    return [UnitChar(g, exps) for exps in itertools.product(*[range(d) for d in g.orders])]
