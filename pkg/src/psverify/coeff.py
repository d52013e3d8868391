"""Exact arithmetic in cyclotomic fields Q(zeta_N) and linear algebra over them.

Elements are stored in the power basis of Q[x]/Phi_N(x) with gmpy2 rationals.
Elements of different orders are combined in Q(zeta_lcm).
"""
from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpq
from sympy import cyclotomic_poly, totient
from sympy.abc import x as _x

N_MAX_DEFAULT = 1000

_n_max = N_MAX_DEFAULT


class OrderOverflow(ArithmeticError):
    """Raised when a cyclotomic order would exceed the configured cap."""


def set_order_cap(n_max: int) -> None:
    global _n_max
    _n_max = int(n_max)


def order_cap() -> int:
    return _n_max


@lru_cache(maxsize=None)
def _field_data(n: int):
    """Degree, and reductions of x^k mod Phi_n for 0 <= k < max(2*phi, n)."""
    phi = int(totient(n))
    cyc = [int(c) for c in reversed(cyclotomic_poly(n, _x, polys=True).all_coeffs())]
    # x^phi = -sum_{i<phi} cyc[i] x^i
    top = max(2 * phi, n + 1)
    powers = []
    cur = [0] * phi
    cur[0] = 1
    for _ in range(top):
        powers.append(tuple(cur))
        carry = cur[-1]
        cur = [0] + cur[:-1]
        if carry:
            for i in range(phi):
                cur[i] -= carry * cyc[i]
    return phi, tuple(powers)


def _reduce(n: int, poly: Sequence) -> tuple:
    phi, powers = _field_data(n)
    out = list(poly[:phi]) + [mpq(0)] * max(0, phi - len(poly))
    for k in range(phi, len(poly)):
        ck = poly[k]
        if ck:
            red = powers[k]
            for i in range(phi):
                if red[i]:
                    out[i] += ck * red[i]
    return tuple(mpq(c) for c in out)


class CycloNum:
    """Exact element of Q(zeta_N)."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Iterable):
        coeffs = tuple(mpq(c) for c in coeffs)
        phi = _field_data(order)[0]
        if len(coeffs) != phi:
            raise ValueError(f"expected {phi} coefficients for order {order}, got {len(coeffs)}")
        self.order = order
        self.coeffs = coeffs

    # constructors
    @classmethod
    def rational(cls, r, order: int = 1) -> "CycloNum":
        phi = _field_data(order)[0]
        return cls(order, (mpq(r),) + (mpq(0),) * (phi - 1))

    @classmethod
    def root_of_unity(cls, n: int, k: int = 1) -> "CycloNum":
        """zeta_n^k"""
        if n > _n_max:
            raise OrderOverflow(f"order {n} exceeds cap {_n_max}")
        k %= n
        g = math.gcd(n, k)
        n, k = n // g, k // g
        phi, powers = _field_data(n)
        return cls(n, powers[k])

    @classmethod
    def coerce(cls, v) -> "CycloNum":
        if isinstance(v, CycloNum):
            return v
        if isinstance(v, (int, type(mpq(0)))) or hasattr(v, "denominator"):
            return cls.rational(mpq(v))
        raise TypeError(f"cannot coerce {v!r} to CycloNum")

    # structure
    def embed(self, n: int) -> "CycloNum":
        """Image in Q(zeta_n) for a multiple n of the current order."""
        if n == self.order:
            return self
        if n % self.order:
            raise ValueError("target order must be a multiple")
        if n > _n_max:
            raise OrderOverflow(f"order {n} exceeds cap {_n_max}")
        step = n // self.order
        phi, powers = _field_data(n)
        out = [mpq(0)] * phi
        for i, c in enumerate(self.coeffs):
            if c:
                red = powers[(i * step) % n]
                for j in range(phi):
                    if red[j]:
                        out[j] += c * red[j]
        return CycloNum(n, out)

    def _common(self, other) -> tuple:
        other = CycloNum.coerce(other)
        if other.order == self.order:
            return self, other
        n = self.order * other.order // math.gcd(self.order, other.order)
        return self.embed(n), other.embed(n)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def to_rational(self):
        if not self.is_rational():
            raise ValueError("element is not rational")
        return self.coeffs[0]

    # arithmetic
    def __add__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return CycloNum(a.order, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycloNum(self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return CycloNum(a.order, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, CycloNum):
            try:
                r = mpq(other)
            except (TypeError, ValueError):
                return NotImplemented
            return CycloNum(self.order, [c * r for c in self.coeffs])
        a, b = self._common(other)
        if a.is_rational():
            r = a.coeffs[0]
            return CycloNum(b.order, [c * r for c in b.coeffs])
        if b.is_rational():
            r = b.coeffs[0]
            return CycloNum(a.order, [c * r for c in a.coeffs])
        phi = len(a.coeffs)
        prod = [mpq(0)] * (2 * phi - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        prod[i + j] += x * y
        return CycloNum(a.order, _reduce(a.order, prod))

    __rmul__ = __mul__

    def inverse(self) -> "CycloNum":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in Q(zeta_N)")
        if self.is_rational():
            return CycloNum.rational(1 / self.coeffs[0], self.order)
        # solve (multiplication-by-self) * y = e_0
        phi, powers = _field_data(self.order)
        cols = []
        for k in range(phi):
            basis = [mpq(0)] * phi
            basis[k] = mpq(1)
            cols.append((CycloNum(self.order, basis) * self).coeffs)
        mat = [[cols[k][i] for k in range(phi)] + [mpq(int(i == 0))] for i in range(phi)]
        sol = _solve_rational(mat, phi)
        return CycloNum(self.order, sol)

    def __truediv__(self, other):
        if not isinstance(other, CycloNum):
            other = CycloNum.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycloNum.coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CycloNum.rational(1, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        try:
            a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return a.coeffs == b.coeffs

    __hash__ = None

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        if self.is_rational():
            return f"CycloNum({self.coeffs[0]})"
        terms = [f"{c}*z{self.order}^{i}" for i, c in enumerate(self.coeffs) if c]
        return "CycloNum(" + " + ".join(terms) + ")"

    def to_json(self):
        """Stable serialisation: order plus coefficient strings."""
        return {"order": self.order, "coeffs": [str(c) for c in self.coeffs]}


ZERO = CycloNum.rational(0)
ONE = CycloNum.rational(1)


def _solve_rational(aug, n):
    """Gauss-Jordan on a square augmented rational system with unique solution."""
    rows = [list(r) for r in aug]
    for col in range(n):
        piv = next(r for r in range(col, n) if rows[r][col])
        rows[col], rows[piv] = rows[piv], rows[col]
        inv = 1 / rows[col][col]
        rows[col] = [v * inv for v in rows[col]]
        for r in range(n):
            if r != col and rows[r][col]:
                fac = rows[r][col]
                rows[r] = [v - fac * w for v, w in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


# valuations

INF = math.inf


class UnsupportedValuation(ValueError):
    """Element is not a rational multiple of a root of unity of order prime to p."""


def _vp_rational(r, p: int) -> int:
    r = mpq(r)
    return int(gmpy2.remove(r.numerator, p)[1]) - int(gmpy2.remove(r.denominator, p)[1])


def padic_valuation(a, p: int):
    """v_p on rational multiples of roots of unity of order prime to p.

    Returns math.inf for zero.
    """
    a = CycloNum.coerce(a)
    if a.is_zero():
        return INF
    if a.is_rational():
        return _vp_rational(a.coeffs[0], p)
    n = a.order
    phi, powers = _field_data(n)
    lead = next(i for i, c in enumerate(a.coeffs) if c)
    for j in range(n):
        vec = powers[j]
        if not vec[lead]:
            continue
        r = a.coeffs[lead] / vec[lead]
        if all(c == r * v for c, v in zip(a.coeffs, vec)):
            if (n // math.gcd(n, j)) % p:
                return _vp_rational(r, p)
    raise UnsupportedValuation(f"{a!r} is not a rational times a root of unity of order prime to {p}")


# linear algebra

class ExactMatrix:
    """Dense matrix of CycloNum entries."""

    def __init__(self, rows: Sequence[Sequence]):
        self.rows = [[CycloNum.coerce(v) for v in row] for row in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else 0
        if any(len(r) != self.ncols for r in self.rows):
            raise ValueError("ragged matrix")

    def apply(self, vec: Sequence) -> list:
        out = []
        for row in self.rows:
            acc = ZERO
            for a, b in zip(row, vec):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return out

    def _echelon(self):
        """Reduced row echelon form; pivot is the first nonzero entry in each column."""
        rows = [list(r) for r in self.rows]
        pivots = []
        r = 0
        for col in range(self.ncols):
            piv = next((i for i in range(r, len(rows)) if rows[i][col]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = rows[r][col].inverse()
            rows[r] = [v * inv if v else v for v in rows[r]]
            prow = rows[r]
            nz = [j for j in range(col, self.ncols) if prow[j]]
            for i in range(len(rows)):
                if i != r and rows[i][col]:
                    fac = rows[i][col]
                    row_i = rows[i]
                    for j in nz:
                        row_i[j] = row_i[j] - fac * prow[j]
            pivots.append(col)
            r += 1
            if r == len(rows):
                break
        return rows[:r], pivots

    def rank(self) -> int:
        return len(self._echelon()[1])

    def kernel_basis(self) -> list:
        return kernel_basis(self)


def kernel_basis(m: ExactMatrix) -> list:
    """Exact basis of the right kernel of m (one vector per free column)."""
    if m.nrows == 0:
        return [[ONE if i == j else ZERO for i in range(m.ncols)] for j in range(m.ncols)]
    rows, pivots = m._echelon()
    pivset = set(pivots)
    basis = []
    for free in range(m.ncols):
        if free in pivset:
            continue
        vec = [ZERO] * m.ncols
        vec[free] = ONE
        for row, pc in zip(rows, pivots):
            if row[free]:
                vec[pc] = -row[free]
        basis.append(vec)
    return basis
