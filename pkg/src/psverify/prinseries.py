"""Finite-level models of smooth principal series of GL_3(F) and of its Levi GL_2 x GL_1.

A vector is a function f on GL_3(O/p^M) with f(k b) = chi(b)^-1 f(k) for b in B(O/p^M); it is
stored by its values on normal-form representatives of GL_3(O/p^M)/B(O/p^M) and extended to
G = K B by f(k b) = chi(b)^-1 f(k).
"""
from __future__ import annotations

import itertools
import math
from typing import Sequence

from gmpy2 import mpq

from .coeff import CycloNum, ExactMatrix, ONE, ZERO, kernel_basis
from .characters import SmoothChar
from .glin import (MatF, CELL_PERMUTATIONS, CELL_PERMUTATIONS_GL2,
                   iwasawa_decompose, ring_from_ints, ring_matmul)
from .padic import FieldContext, ResidueRing, unit_group


class LevelOverflow(ArithmeticError):
    """The operation needs a finer level than the model provides."""


# normal forms for G/B over O/p^M

class _FlagBase:
    n = 3
    cell_table = CELL_PERMUTATIONS

    def __init__(self, p: int, f: int, level: int, precision_cap: int = 40):
        if level < 1:
            raise ValueError("level must be at least 1")
        self.p, self.f, self.level = p, f, level
        self.q = p ** f
        self.ring = ResidueRing(p, f, level)
        self.ctx = FieldContext(p, f, precision_cap)
        self.reps = self._enumerate()
        self.index = {r: i for i, r in enumerate(self.reps)}
        self._cells = [self.cell_table[self._pivots(r)] for r in self.reps]

    def __len__(self):
        return len(self.reps)

    def _pivots(self, rows):
        R = self.ring
        n = self.n
        pivots = []
        for j in range(n):
            units = [i for i in range(n) if i not in pivots and R.is_unit(rows[i][j])]
            pivots.append(max(units))
        return tuple(i + 1 for i in pivots)

    def _enumerate(self):
        R = self.ring
        n = self.n
        elements = list(R.elements())
        divisible = [x for x in elements if not R.is_unit(x)]
        out = []
        zero, one = R.zero(), R.one()
        for perm in self.cell_table:
            piv = [r - 1 for r in perm]
            choices = []  # per (row, col) position: candidate entries
            slots = []
            for j in range(n):
                for i in range(n):
                    if i == piv[j]:
                        continue
                    if i in piv[:j]:
                        continue
                    slots.append((i, j))
                    choices.append(elements if i < piv[j] else divisible)
            for combo in itertools.product(*choices):
                m = [[zero] * n for _ in range(n)]
                for j in range(n):
                    m[piv[j]][j] = one
                for (i, j), x in zip(slots, combo):
                    m[i][j] = x
                out.append(tuple(tuple(r) for r in m))
        return out

    def section(self, rows) -> tuple:
        """(representative index, diagonal of b) with rows = rep * b modulo p^M."""
        R = self.ring
        n = self.n
        cols = [[rows[i][j] for i in range(n)] for j in range(n)]
        pivots = []
        done = []
        diag = []
        for j in range(n):
            col = cols[j]
            for prow, pcol in zip(pivots, done):
                c = col[prow]
                if not R.gr.is_zero(c):
                    col = [R.sub(x, R.mul(c, y)) for x, y in zip(col, pcol)]
            units = [i for i in range(n) if i not in pivots and R.is_unit(col[i])]
            if not units:
                raise ValueError("matrix is not invertible modulo p")
            prow = max(units)
            d = col[prow]
            dinv = R.inv(d)
            col = [R.mul(x, dinv) for x in col]
            pivots.append(prow)
            done.append(col)
            diag.append(d)
        rep = tuple(tuple(done[j][i] for j in range(n)) for i in range(n))
        return self.index[rep], tuple(diag)

    def cell(self, idx: int) -> str:
        return self._cells[idx]

    def lift(self, idx: int) -> MatF:
        return MatF.from_ring(self.ctx, self.reps[idx])


class FlagModel(_FlagBase):
    """Representatives of GL_3(O/p^M)/B(O/p^M) in column normal form.

    Column j has a 1 in its pivot row, zeros in earlier pivot rows, arbitrary entries above the
    pivot and entries divisible by p below it.
    """

    n = 3
    cell_table = CELL_PERMUTATIONS

    def expected_size(self) -> int:
        q, M = self.q, self.level
        return (q * q + q + 1) * (q + 1) * q ** (3 * (M - 1))


class LeviModel(_FlagBase):
    """Representatives of GL_2(O/p^M)/B_2(O/p^M)."""

    n = 2
    cell_table = CELL_PERMUTATIONS_GL2

    def expected_size(self) -> int:
        return (self.q + 1) * self.q ** (self.level - 1)


# characters of the torus, with values as roots of unity times powers of chi_i(p)

class TorusCharacter:
    """chi = chi_1 x ... x chi_n restricted to the torus; unit values as exponents mod E."""

    def __init__(self, chis: Sequence[SmoothChar]):
        self.chis = tuple(chis)
        self.exponents = []
        for c in self.chis:
            E = c.unit_char.group.exponent if c.conductor else 1
            self.exponents.append(E)
        self.E = math.lcm(*self.exponents)
        self.roots = [CycloNum.root_of_unity(self.E, k) for k in range(self.E)]

    def conductor(self) -> int:
        return max(c.conductor for c in self.chis)

    def log_unit(self, i: int, u) -> int:
        E_i, log = self.chis[i]._unit_log(u)
        return log * (self.E // E_i) % self.E

    def log_diag(self, diag) -> int:
        """Exponent of chi(diag(u_1, ..., u_n)) for units u_i."""
        return sum(self.log_unit(i, u) for i, u in enumerate(diag)) % self.E

    def at_uniformizer_powers(self, vals) -> CycloNum:
        out = ONE
        for c, v in zip(self.chis, vals):
            if v:
                out = out * c.at_uniformizer ** v
        return out


# vectors

class PSVector:
    """f in (Ind_B^G chi)^sm at level M, stored on the representatives of a FlagModel."""

    __slots__ = ("model", "torus", "values")

    def __init__(self, model: FlagModel, torus: TorusCharacter, values: Sequence[CycloNum]):
        if len(values) != len(model):
            raise ValueError("one value per representative is required")
        self.model = model
        self.torus = torus
        self.values = list(values)

    @classmethod
    def zero(cls, model, torus):
        return cls(model, torus, [ZERO] * len(model))

    @property
    def chis(self):
        return self.torus.chis

    def eval_ring(self, rows) -> CycloNum:
        """f(k) for k in GL_n(O) given modulo p^M."""
        idx, diag = self.model.section(rows)
        v = self.values[idx]
        if not v:
            return ZERO
        return v * self.torus.roots[-self.torus.log_diag(diag) % self.torus.E]

    def __call__(self, g) -> CycloNum:
        return ps_eval(self, g)

    def _same(self, other):
        if self.model is not other.model:
            raise ValueError("vectors live on different models")

    def __add__(self, other):
        self._same(other)
        return type(self)(self.model, self.torus, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        self._same(other)
        return type(self)(self.model, self.torus, [a - b for a, b in zip(self.values, other.values)])

    def scale(self, c) -> "PSVector":
        c = CycloNum.coerce(c)
        return type(self)(self.model, self.torus, [v * c if v else v for v in self.values])

    def __eq__(self, other):
        return self.model is other.model and all(a == b for a, b in zip(self.values, other.values))

    __hash__ = None

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)


class LeviPSVector(PSVector):
    """f in (Ind_{B cap L}^L chi)^sm at level M; the GL_1 factor acts through chi_3."""

    __slots__ = ()

    def __init__(self, model: LeviModel, torus: TorusCharacter, values):
        super().__init__(model, torus, values)

    @property
    def gl2_torus(self):
        return TorusCharacter(self.torus.chis[:2])

    @classmethod
    def from_patches(cls, model: LeviModel, torus: TorusCharacter, lower_value, upper_value):
        """Vector with v(lower(a)) = lower_value(a) for a in pO and v(upper(a) s1) = upper_value(a)."""
        R = model.ring
        values = [None] * len(model)
        for a in R.elements():
            if R.is_unit(a):
                points = [(levi_upper_s1(R, a), upper_value)]
            else:
                points = [(levi_lower(R, a), lower_value), (levi_upper_s1(R, a), upper_value)]
            for rows, fn in points:
                idx, diag = model.section(rows)
                lg = (torus.log_unit(0, diag[0]) + torus.log_unit(1, diag[1])) % torus.E
                val = CycloNum.coerce(fn(a))
                values[idx] = val * torus.roots[lg] if val else ZERO
        if any(v is None for v in values):
            raise AssertionError("patches do not cover the Levi flag variety")
        return cls(model, torus, values)

    def eval_ring(self, rows) -> CycloNum:
        if len(rows) == 3:
            d = rows[2][2]
            block = (tuple(rows[0][:2]), tuple(rows[1][:2]))
            tail = self.torus.log_unit(2, d)
        else:
            block, tail = rows, 0
        idx, diag = self.model.section(block)
        v = self.values[idx]
        if not v:
            return ZERO
        lg = (self.torus.log_unit(0, diag[0]) + self.torus.log_unit(1, diag[1]) + tail) % self.torus.E
        return v * self.torus.roots[-lg % self.torus.E]


def ps_eval(f: PSVector, g) -> CycloNum:
    """f(g) = chi(b)^-1 f(k) for g = k b; g is a MatF or integral rows modulo p^M."""
    if not isinstance(g, MatF):
        return f.eval_ring(g)
    fac = iwasawa_decompose(g)
    k = fac.k.to_ring(f.model.level)
    val = f.eval_ring(k)
    if not val:
        return ZERO
    return val * f.torus.at_uniformizer_powers(fac.valuations).inverse()


def _min_val(g: MatF):
    return min(x.val for row in g.rows for x in row if not x.is_zero())


def group_act(gamma, f: PSVector) -> PSVector:
    """(gamma f)(g) = f(gamma^-1 g).

    gamma is either integral rows (an element of GL_n(O/p^M)) or a MatF.  Elements that do not
    normalise the level-M congruence subgroup raise LevelOverflow.
    """
    model = f.model
    if isinstance(gamma, MatF):
        ginv = gamma.inverse()
        if _min_val(gamma) + _min_val(ginv) < 0:
            raise LevelOverflow("the translate is not of level M; use a larger model")
        scale = _min_val(ginv)
        if scale:
            # gamma^-1 = p^scale * k with k in K
            unit = ginv.ctx.uniformizer_power(-scale)
            kinv = MatF(ginv.ctx, [[x * unit for x in row] for row in ginv.rows])
            central = f.torus.at_uniformizer_powers([scale] * model.n).inverse()
        else:
            kinv, central = ginv, ONE
        kinv_rows = kinv.to_ring(model.level)
        out = type(f)(model, f.torus, [f.eval_ring(ring_matmul(model.ring, kinv_rows, r)) * central for r in model.reps])
        return out
    R = model.ring
    gamma = ring_from_ints(R, gamma)
    from .glin import ring_inverse
    ginv = ring_inverse(R, gamma)
    return type(f)(model, f.torus, [f.eval_ring(ring_matmul(R, ginv, r)) for r in model.reps])


# orbits of N_0 and of the compact centre of the Levi

def _n0_generators(R: ResidueRing):
    gens = []
    one, zero = R.one(), R.zero()
    for b in R.gr.basis(R.m):
        b = R.reduce(b)
        gens.append(((one, zero, b), (zero, one, zero), (zero, zero, one)))
        gens.append(((one, zero, zero), (zero, one, b), (zero, zero, one)))
    return gens


def _centre_generators(R: ResidueRing):
    """diag(a, a, 1) and diag(1, 1, a) for a running over generators of the unit group."""
    G = unit_group(R.p, R.f, R.m)
    one, zero = R.one(), R.zero()
    out = []
    for a in G.gens:
        out.append((((a, zero, zero), (zero, a, zero), (zero, zero, one)), (a, a, one)))
        out.append((((one, zero, zero), (zero, one, zero), (zero, zero, a)), (one, one, a)))
    return out


class TwistedOrbits:
    """Orbits of H = N_0 (and optionally Z_L cap K) on the representatives, with phases.

    A function f with f(n g) = f(g) and f(u g) = chi(u)^-1 f(g) is determined by one value per
    orbit: f(r) = zeta_E^phase(r) * f(base).  Orbits on which the relations contradict each
    other carry only the zero function ("dead" orbits).
    """

    def __init__(self, model: FlagModel, torus: TorusCharacter, with_centre: bool = True):
        self.model = model
        self.torus = torus
        R = model.ring
        E = torus.E
        gens = [(g, 0) for g in _n0_generators(R)]
        if with_centre:
            for g, diag in _centre_generators(R):
                gens.append((g, torus.log_diag(diag)))
        n = len(model)
        self.orbit = [-1] * n
        self.phase = [0] * n
        self.bases = []
        self.live = []
        for start in range(n):
            if self.orbit[start] >= 0:
                continue
            oid = len(self.bases)
            self.bases.append(start)
            alive = True
            self.orbit[start] = oid
            self.phase[start] = 0
            stack = [start]
            while stack:
                i = stack.pop()
                r = model.reps[i]
                for g, lg_h in gens:
                    j, beta = model.section(ring_matmul(R, g, r))
                    ph = (self.phase[i] + torus.log_diag(beta) - lg_h) % E
                    if self.orbit[j] < 0:
                        self.orbit[j] = oid
                        self.phase[j] = ph
                        stack.append(j)
                    elif self.phase[j] != ph:
                        alive = False
            self.live.append(alive)
        self.live_ids = [o for o, a in enumerate(self.live) if a]
        self.column = {o: c for c, o in enumerate(self.live_ids)}

    def __len__(self):
        return len(self.bases)

    def expand(self, coords: Sequence[CycloNum]) -> list:
        """Values on all representatives from one value per live orbit."""
        roots = self.torus.roots
        out = []
        for i in range(len(self.model)):
            o = self.orbit[i]
            if not self.live[o]:
                out.append(ZERO)
                continue
            c = coords[self.column[o]]
            out.append(c * roots[self.phase[i]] if c else ZERO)
        return out

    def basis(self) -> list:
        vecs = []
        for c in range(len(self.live_ids)):
            coords = [ONE if k == c else ZERO for k in range(len(self.live_ids))]
            vecs.append(PSVector(self.model, self.torus, self.expand(coords)))
        return vecs

    def coefficient(self, idx: int) -> tuple:
        """(column, phase) with f(rep idx) = zeta^phase * coordinate[column], or None if dead."""
        o = self.orbit[idx]
        if not self.live[o]:
            return None
        return self.column[o], self.phase[idx]


def n0_invariants(model: FlagModel, chis) -> list:
    """Basis of the N_0-fixed vectors at level M."""
    torus = chis if isinstance(chis, TorusCharacter) else TorusCharacter(chis)
    return TwistedOrbits(model, torus, with_centre=False).basis()


# Hecke operators

def _levi_plus_data(ell: MatF):
    """For ell = diag(A, d) in L^+ return (v(det(A/d)), r) with r minimal such that p^r O^2 lies in (A/d) O^2."""
    r = ell.rows
    zero_block = [r[0][2], r[1][2], r[2][0], r[2][1]]
    if any(not x.is_exact_zero() for x in zero_block):
        raise ValueError("element is not in the Levi subgroup")
    d = r[2][2]
    A = [[r[0][0] / d, r[0][1] / d], [r[1][0] / d, r[1][1] / d]]
    if any(not x.is_exact_zero() and x.val < 0 for row in A for x in row):
        raise ValueError("element is not in L^+ (it does not contract N_0)")
    det = A[0][0] * A[1][1] - A[0][1] * A[1][0]
    v_det = det.valuation()
    # the elementary divisors of A are p^e1, p^e2 with e1 = min entry valuation and e1 + e2 = v(det)
    e1 = min(x.val for row in A for x in row if not x.is_exact_zero())
    return v_det, v_det - e1


def hecke_index(ell: MatF) -> int:
    """[N_0 : ell N_0 ell^-1] for ell in L^+."""
    q = ell.ctx.q
    return q ** _levi_plus_data(ell)[0]


def hecke_tau(ell: MatF, f: PSVector) -> PSVector:
    """tau_ell f = average over n in N_0/ell N_0 ell^-1 of n ell f, for N_0-invariant f.

    Evaluated as (tau_ell f)(x) = q^(-2r) sum over s, t in O/p^r of f(ell^-1 n(s,t) x).
    """
    model = f.model
    r = _levi_plus_data(ell)[1]
    if r > model.level:
        raise LevelOverflow(f"Hecke operator of depth {r} exceeds the model level {model.level}")
    ctx = model.ctx
    ellinv = ell.inverse()
    Rr = ResidueRing(model.p, model.f, r)
    shifts = list(Rr.elements())
    weight = mpq(1, model.q ** (2 * r))
    out = []
    for idx in range(len(model)):
        x = model.lift(idx)
        acc = ZERO
        for s in shifts:
            for t in shifts:
                n = MatF.from_ring(ctx, _nmat(Rr, s, t))
                val = ps_eval(f, ellinv @ n @ x)
                if val:
                    acc = acc + val
        out.append(acc * weight)
    return type(f)(model, f.torus, out)


def _nmat(R, s, t):
    one, zero = R.gr.one(), R.gr.zero()
    return ((one, zero, s), (zero, one, t), (zero, zero, one))


def z_element(ctx: FieldContext, r: int = 1) -> MatF:
    """diag(p^r, p^r, 1)"""
    return MatF.diagonal(ctx, [ctx.uniformizer_power(r), ctx.uniformizer_power(r), ctx.one()])


def unit_central(ctx: FieldContext, a, b) -> MatF:
    """diag(a, a, b) for units a, b given as ring elements."""
    return MatF.diagonal(ctx, [ctx.scalar(a), ctx.scalar(a), ctx.scalar(b)])


# the eigenspace

class Eigenspace:
    """pi^{N_0, Z_L^+ = chi} at level M, with its basis and the coordinates used to build it."""

    def __init__(self, model: FlagModel, chis):
        self.model = model
        self.torus = chis if isinstance(chis, TorusCharacter) else TorusCharacter(chis)
        self.orbits = TwistedOrbits(model, self.torus, with_centre=True)
        self.eigenvalue = self.torus.chis[0].at_uniformizer * self.torus.chis[1].at_uniformizer
        self.matrix = self._hecke_matrix()
        rows = [[a - (self.eigenvalue if i == j else ZERO) for j, a in enumerate(row)]
                for i, row in enumerate(self.matrix)]
        self.coords = kernel_basis(ExactMatrix(rows)) if rows else []
        self.basis = [PSVector(model, self.torus, self.orbits.expand(c)) for c in self.coords]

    def _hecke_matrix(self):
        """Matrix of tau_z1 on orbit coordinates, computed at orbit base points."""
        model, orbits, torus = self.model, self.orbits, self.torus
        ctx = model.ctx
        R1 = ResidueRing(model.p, model.f, 1)
        shifts = list(R1.elements())
        nlive = len(orbits.live_ids)
        weight = mpq(1, model.q ** 2)
        zinv = z_element(ctx, -1)
        mat = []
        for o in orbits.live_ids:
            row = [ZERO] * nlive
            x = model.lift(orbits.bases[o])
            for s in shifts:
                for t in shifts:
                    g = zinv @ MatF.from_ring(ctx, _nmat(R1, s, t)) @ x
                    fac = iwasawa_decompose(g)
                    j, beta = model.section(fac.k.to_ring(model.level))
                    coef = orbits.coefficient(j)
                    if coef is None:
                        continue
                    col, ph = coef
                    lg = (ph - torus.log_diag(beta)) % torus.E
                    val = torus.roots[lg] * torus.at_uniformizer_powers(fac.valuations).inverse() * weight
                    row[col] = row[col] + val
            mat.append(row)
        return mat

    @property
    def dimension(self) -> int:
        return len(self.basis)


def zlplus_eigenspace(model: FlagModel, chis) -> list:
    """Basis of {f N_0-fixed : tau_z f = chi(z) f for z in Z_L^+} at level M."""
    return Eigenspace(model, chis).basis


# restriction to the Levi and the Steinberg functional

def restrict_to_levi(f: PSVector, levi: LeviModel | None = None) -> LeviPSVector:
    """theta(f) = f restricted to L = GL_2 x GL_1."""
    model = f.model
    if levi is None:
        levi = LeviModel(model.p, model.f, model.level, model.ctx.cap)
    R = model.ring
    zero, one = R.zero(), R.one()
    vals = []
    for rep in levi.reps:
        rows = ((rep[0][0], rep[0][1], zero), (rep[1][0], rep[1][1], zero), (zero, zero, one))
        vals.append(f.eval_ring(rows))
    return LeviPSVector(levi, f.torus, vals)


def levi_lower(R: ResidueRing, a):
    """[[1, 0], [a, 1]]"""
    return ((R.one(), R.zero()), (R.reduce(a), R.one()))


def levi_upper_s1(R: ResidueRing, a):
    """[[1, a], [0, 1]] * s1 = [[a, -1], [1, 0]]"""
    return ((R.reduce(a), R.neg(R.one())), (R.one(), R.zero()))


class SupportError(ValueError):
    """The vector is not supported in the big cell (U cap L) s1 (B cap L)."""


def steinberg_projection(v: LeviPSVector) -> CycloNum:
    """Integral of v(x s1) over x in U cap L = F, for v vanishing near the identity coset.

    The part of the integral with val(x) < 0 is rewritten through x = 1/y as an integral of
    eta_1(y)^-1 |y|^-2 v(lower(y)) over y in pO minus 0.
    """
    model = v.model
    R = model.ring
    if not v.eval_ring(levi_lower(R, R.zero())).is_zero():
        raise SupportError("v(1) is nonzero, so v is not supported in the big cell")
    chi1, chi2 = v.torus.chis[0], v.torus.chis[1]
    eta1 = chi1.inverse() * chi2
    M = model.level
    q = model.q
    total = ZERO
    for a in R.elements():
        val = v.eval_ring(levi_upper_s1(R, a))
        if val:
            total = total + val
    total = total * mpq(1, q ** M)
    # y with 1 <= val(y) < M; v(lower(y)) depends on y mod p^M, eta_1 needs c(eta_1) more digits
    L = M + eta1.conductor
    RL = ResidueRing(model.p, model.f, L)
    inv = eta1.inverse()
    tail = ZERO
    for y in RL.elements():
        vy = RL.valuation(y)
        if vy == 0 or vy >= M:
            continue
        val = v.eval_ring(levi_lower(R, R.gr.reduce(y, M)))
        if not val:
            continue
        tail = tail + val * inv.on_ring(y, L) * mpq(q ** (2 * vy))
    return total + tail * mpq(1, q ** L)
