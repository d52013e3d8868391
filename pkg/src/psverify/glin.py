"""2x2 and 3x3 matrices over F and over residue rings; Iwasawa factorisation and Iwahori cells."""
from __future__ import annotations

from typing import Sequence

from .padic import FieldContext, FScalar, PrecisionError, ResidueRing


# Weyl group representatives

def int_matmul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))


IDENTITY3 = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
S1 = ((0, -1, 0), (1, 0, 0), (0, 0, 1))
S2 = ((1, 0, 0), (0, 0, -1), (0, 1, 0))
W0 = int_matmul(int_matmul(S1, S2), S1)

IDENTITY2 = ((1, 0), (0, 1))
S1_GL2 = ((0, -1), (1, 0))

CELL_NAMES = ("e", "s1", "s2", "s1s2", "s2s1", "w0")

# pivot rows (1-based) of the column echelon form, per cell
CELL_PERMUTATIONS = {
    (1, 2, 3): "e",
    (2, 1, 3): "s1",
    (1, 3, 2): "s2",
    (2, 3, 1): "s1s2",
    (3, 1, 2): "s2s1",
    (3, 2, 1): "w0",
}
CELL_PERMUTATIONS_GL2 = {(1, 2): "e", (2, 1): "s1"}


def weyl_reps() -> dict:
    """Integer representatives of S_3: e, s1, s2, s1s2, s2s1, w0."""
    return {
        "e": IDENTITY3,
        "s1": S1,
        "s2": S2,
        "s1s2": int_matmul(S1, S2),
        "s2s1": int_matmul(S2, S1),
        "w0": W0,
    }


def embed_levi(m2) -> tuple:
    """A 2x2 block placed in the upper-left corner of GL_3, with 1 in position (3,3)."""
    return ((m2[0][0], m2[0][1], 0), (m2[1][0], m2[1][1], 0), (0, 0, 1))


# matrices over F

class MatF:
    """Square matrix (n = 2 or 3) with FScalar entries."""

    __slots__ = ("ctx", "rows", "n")

    def __init__(self, ctx: FieldContext, rows: Sequence[Sequence[FScalar]]):
        self.ctx = ctx
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        if self.n not in (2, 3) or any(len(r) != self.n for r in self.rows):
            raise ValueError("only 2x2 and 3x3 matrices are supported")

    @classmethod
    def from_values(cls, ctx: FieldContext, rows) -> "MatF":
        """Entries may be FScalar, int, or (numerator, denominator) pairs."""
        def conv(x):
            if isinstance(x, FScalar):
                return x
            if isinstance(x, tuple) and len(x) == 2 and ctx.f == 1:
                return ctx.rational(*x)
            if hasattr(x, "denominator") and not isinstance(x, int):
                return ctx.rational(int(x.numerator), int(x.denominator))
            return ctx.scalar(x)
        return cls(ctx, [[conv(x) for x in r] for r in rows])

    @classmethod
    def from_ring(cls, ctx: FieldContext, rows) -> "MatF":
        """Exact lift of a residue-ring matrix (integer coordinates taken literally)."""
        return cls(ctx, [[ctx.scalar(x) for x in r] for r in rows])

    @classmethod
    def identity(cls, ctx, n=3):
        return cls(ctx, [[ctx.one() if i == j else ctx.zero() for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, ctx, entries):
        n = len(entries)
        return cls(ctx, [[entries[i] if i == j else ctx.zero() for j in range(n)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other: "MatF") -> "MatF":
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.ctx.zero()
                for k in range(n):
                    a, b = self.rows[i][k], other.rows[k][j]
                    if a.is_exact_zero() or b.is_exact_zero():
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return MatF(self.ctx, out)

    def det(self) -> FScalar:
        r = self.rows
        if self.n == 2:
            return r[0][0] * r[1][1] - r[0][1] * r[1][0]
        return (r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1])
                - r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0])
                + r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]))

    def inverse(self) -> "MatF":
        d = self.det()
        if d.is_zero():
            raise PrecisionError("cannot certify invertibility at available precision")
        r = self.rows
        if self.n == 2:
            adj = [[r[1][1], -r[0][1]], [-r[1][0], r[0][0]]]
        else:
            def minor(i, j):
                rr = [[r[a][b] for b in range(3) if b != j] for a in range(3) if a != i]
                return rr[0][0] * rr[1][1] - rr[0][1] * rr[1][0]
            adj = [[minor(j, i) if (i + j) % 2 == 0 else -minor(j, i) for j in range(3)] for i in range(3)]
        dinv = d.inverse()
        return MatF(self.ctx, [[x * dinv for x in row] for row in adj])

    def is_integral(self) -> bool:
        return all(x.is_exact_zero() or x.val >= 0 for row in self.rows for x in row)

    def equals(self, other: "MatF") -> bool:
        """Entrywise equality at the guaranteed precision of both sides."""
        return all(a.equals(b) for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def to_ring(self, m: int):
        """Reduction of an integral matrix modulo p^m."""
        return tuple(tuple(x.to_ring(m) for x in row) for row in self.rows)

    def __repr__(self):
        return "MatF(" + repr([list(r) for r in self.rows]) + ")"


class IwasawaFactors:
    """g = k b with k in GL_n(O) and b upper triangular with diagonal p^(valuations)."""

    __slots__ = ("k", "b", "valuations", "pivots")

    def __init__(self, k: MatF, b: MatF, valuations: tuple, pivots: tuple):
        self.k, self.b, self.valuations, self.pivots = k, b, valuations, pivots


def iwasawa_decompose(g: MatF) -> IwasawaFactors:
    """Column reduction: in each column pick the entry of least valuation (lowest row index on ties)."""
    ctx, n = g.ctx, g.n
    cols = [[g.rows[i][j] for i in range(n)] for j in range(n)]
    kcols = []
    pivots = []
    vals = []
    b = [[ctx.zero() for _ in range(n)] for _ in range(n)]
    for j in range(n):
        col = cols[j]
        for i, (prow, kcol) in enumerate(zip(pivots, kcols)):
            entry = col[prow]
            if entry.is_exact_zero():
                continue
            c = entry / kcol[prow]
            b[i][j] = c
            col = [x - c * y if not y.is_exact_zero() else x for x, y in zip(col, kcol)]
            col[prow] = ctx.zero()
        free = [r for r in range(n) if r not in pivots]
        known = [(col[r].val, r) for r in free if not col[r].is_zero()]
        if not known:
            raise PrecisionError("column is zero at available precision")
        vmin, prow = min(known)
        for r in free:
            x = col[r]
            if x.approx_zero and x.val <= vmin:
                raise PrecisionError("cannot certify the pivot valuation; raise the precision")
        kcol = [x.shift(-vmin) for x in col]
        kcols.append(kcol)
        pivots.append(prow)
        vals.append(vmin)
        b[j][j] = ctx.uniformizer_power(vmin)
    k = MatF(ctx, [[kcols[j][i] for j in range(n)] for i in range(n)])
    return IwasawaFactors(k, MatF(ctx, b), tuple(vals), tuple(p + 1 for p in pivots))


def iwahori_cell(k, ring: ResidueRing | None = None) -> str:
    """Cell label w with k in I w B, for k in GL_n(O) given as a MatF or as rows over ``ring``."""
    if isinstance(k, MatF):
        ctx = k.ctx
        rows = k.to_ring(1)
        R = ResidueRing(ctx.p, ctx.f, 1)
    else:
        rows, R = k, ring
    perm = pivot_rows(R, rows)
    table = CELL_PERMUTATIONS if len(rows) == 3 else CELL_PERMUTATIONS_GL2
    return table[perm]


def pivot_rows(R: ResidueRing, rows) -> tuple:
    """Pivot rows (1-based) of the unit-pivot column echelon form over the residue field."""
    n = len(rows)
    gr = R.gr
    F1 = ResidueRing(R.p, R.f, 1)
    cols = [[F1.reduce(gr.reduce(rows[i][j], 1)) for i in range(n)] for j in range(n)]
    pivots = []
    for j in range(n):
        col = list(cols[j])
        for prow, pcol in pivots:
            if not F1.gr.is_zero(col[prow]):
                c = F1.mul(col[prow], F1.inv(pcol[prow]))
                col = [F1.sub(x, F1.mul(c, y)) for x, y in zip(col, pcol)]
        units = [r for r in range(n) if F1.is_unit(col[r]) and r not in [pr for pr, _ in pivots]]
        if not units:
            raise ValueError("matrix is singular modulo p")
        prow = max(units)
        pivots.append((prow, col))
    return tuple(pr + 1 for pr, _ in pivots)


# matrices over residue rings

def ring_matmul(R: ResidueRing, a, b):
    n = len(a)
    gr, m = R.gr, R.m
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = gr.zero()
            for k in range(n):
                acc = gr.add(acc, gr.mul(a[i][k], b[k][j], m), m)
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def ring_from_ints(R: ResidueRing, rows):
    return tuple(tuple(R.from_int(x) if isinstance(x, int) else R.reduce(x) for x in r) for r in rows)


def ring_det(R: ResidueRing, r):
    mul, add, sub = R.mul, R.add, R.sub
    if len(r) == 2:
        return sub(mul(r[0][0], r[1][1]), mul(r[0][1], r[1][0]))
    t0 = mul(r[0][0], sub(mul(r[1][1], r[2][2]), mul(r[1][2], r[2][1])))
    t1 = mul(r[0][1], sub(mul(r[1][0], r[2][2]), mul(r[1][2], r[2][0])))
    t2 = mul(r[0][2], sub(mul(r[1][0], r[2][1]), mul(r[1][1], r[2][0])))
    return add(sub(t0, t1), t2)


def ring_inverse(R: ResidueRing, r):
    d = ring_det(R, r)
    dinv = R.inv(d)
    n = len(r)
    if n == 2:
        adj = [[r[1][1], R.neg(r[0][1])], [R.neg(r[1][0]), r[0][0]]]
    else:
        def minor(i, j):
            rr = [[r[a][b] for b in range(3) if b != j] for a in range(3) if a != i]
            return R.sub(R.mul(rr[0][0], rr[1][1]), R.mul(rr[0][1], rr[1][0]))
        adj = [[minor(j, i) if (i + j) % 2 == 0 else R.neg(minor(j, i)) for j in range(3)] for i in range(3)]
    return tuple(tuple(R.mul(x, dinv) for x in row) for row in adj)
