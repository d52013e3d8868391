"""The vectors f_n, h_n, h'_n and v, and finite-level checks of the approximation hypotheses.

Conventions: q = |O/p|, gamma = q / eta_2(p), g is the special test function of SpecialG,
and const_w0 is EtaPair.const_w0.  Points of the patches are exact elements of O (integers, or
integer coordinate tuples when f > 1); f_n and h_n only see them modulo p^M while h'_n, being
merely continuous, is evaluated at the exact point.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .coeff import INF, CycloNum, ZERO, padic_valuation
from .explicit import (PATCHES, CheckRecord, DensityIntegrals, EtaPair, LeviRestrictionData,
                       SpecialG, assemble, S1S2)
from .glin import ring_from_ints, ring_matmul
from .padic import FScalar, PrecisionError
from .prinseries import (Eigenspace, FlagModel, LeviModel, LeviPSVector, PSVector, SupportError,
                         TorusCharacter, TwistedOrbits, restrict_to_levi, steinberg_projection)


class ConfigError(ValueError):
    """Characters or range violate the standing assumptions of the construction."""


class DensityConfig:
    """Character triple, level M and the range of n for the density construction."""

    def __init__(self, chis, level: int, n_range=None):
        self.torus = chis if isinstance(chis, TorusCharacter) else TorusCharacter(chis)
        c1, c2, c3 = self.torus.chis
        if c1 == c2 or c2 == c3:
            raise ConfigError("need chi_1 != chi_2 and chi_2 != chi_3")
        self.p, self.f = c1.p, c1.f
        self.q = c1.q
        self.level = level
        try:
            self.eta = EtaPair.from_chis(self.torus.chis)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.eta.eta2.is_trivial():
            raise ConfigError("eta_2 must be nontrivial")
        self.gamma = CycloNum.rational(self.q) / self.eta.eta2.at_uniformizer
        self.gamma_val = padic_valuation(self.gamma, self.p)
        if self.gamma_val <= 0:
            raise ConfigError("need |gamma| < 1, i.e. v_p(q / eta_2(p)) > 0")
        self.g = SpecialG(self.eta.eta2)
        self.integrals = DensityIntegrals(self.eta, self.g)
        lo = max(self.eta.c2, 1)
        hi = level - self.g.level
        self.n_range = list(range(lo, hi + 1)) if n_range is None else list(n_range)
        for n in self.n_range:
            if n < lo or n > hi:
                raise ConfigError(f"n = {n} outside [{lo}, {hi}] (need c(eta_2) <= n <= M - level(g))")
        if not self.n_range:
            raise ConfigError("empty range of n at this level")
        self._model = None
        self._levi = None
        self._orbits = None
        self._eigenspace = None

    @property
    def ctx(self):
        return self.model.ctx

    @property
    def model(self) -> FlagModel:
        if self._model is None:
            self._model = FlagModel(self.p, self.f, self.level)
        return self._model

    @property
    def levi(self) -> LeviModel:
        if self._levi is None:
            self._levi = LeviModel(self.p, self.f, self.level)
        return self._levi

    @property
    def orbits(self) -> TwistedOrbits:
        if self._orbits is None:
            self._orbits = TwistedOrbits(self.model, self.torus, with_centre=True)
        return self._orbits

    @property
    def eigenspace(self) -> Eigenspace:
        """The brute-force eigenspace at level M; shares its orbit data with the assembly step."""
        if self._eigenspace is None:
            self._eigenspace = Eigenspace(self.model, self.torus)
            if self._orbits is None:
                self._orbits = self._eigenspace.orbits
        return self._eigenspace

    # small helpers on exact points
    def scalar(self, x) -> FScalar:
        return self.ctx.scalar(x)

    def eta2(self, x: FScalar) -> CycloNum:
        return self.eta.eta2(x)

    def abs_val(self, x: FScalar) -> CycloNum:
        """|x| = q^-val(x)"""
        return CycloNum.rational(self.q) ** (-x.val)


def _val(x: FScalar):
    return INF if x.is_zero() else x.val


# f_n

def fn_levi_values(cfg: DensityConfig, n: int):
    """The pair defining f_n: lower(a) -> 0 on pO, upper(a) s1 -> gamma^n g(a / p^n)."""
    R = cfg.model.ring
    gr = R.gr
    gn = cfg.gamma ** n

    def upper(a):
        if R.valuation(a) < n:
            return ZERO
        return gn * cfg.g.on_ring(gr.divide_p(gr.reduce(a, cfg.level), n))

    return (lambda a: ZERO), upper


def build_fn_levi(n: int, cfg: DensityConfig) -> LeviPSVector:
    lower, upper = fn_levi_values(cfg, n)
    return LeviPSVector.from_patches(cfg.levi, cfg.torus, lower, upper)


def build_fn(n: int, cfg: DensityConfig) -> PSVector:
    """The eigenspace vector with the prescribed Levi restriction, assembled from the formulas."""
    if n not in cfg.n_range:
        raise PrecisionError(f"n = {n} is not representable at level {cfg.level}")
    data = LeviRestrictionData.from_vector(build_fn_levi(n, cfg))
    vec, conflicts, uncovered = assemble(data, cfg.torus, cfg.model, cfg.orbits)
    if conflicts or uncovered:
        raise AssertionError(f"assembly failed: {len(conflicts)} conflicts, {len(uncovered)} uncovered orbits")
    return vec


class CellTable:
    """Closed-form values of f_n on the six patches (n >= c(eta_2), integral of g zero)."""

    def __init__(self, cfg: DensityConfig, n: int):
        self.cfg, self.n = cfg, n
        self.gn = cfg.gamma ** n

    def value(self, cell: str, point: dict) -> CycloNum:
        cfg, n = self.cfg, self.n
        eta, I = cfg.eta, cfg.integrals
        ctx = cfg.ctx
        if cell in ("e", "s2", "s2s1"):
            return ZERO
        pn = ctx.uniformizer_power(n)
        a = cfg.scalar(point.get("a", 0))
        if cell == "s1":
            # rows (1 a 0)(0 1 0)(c b 1): c in the first column, b in the second
            b = cfg.scalar(point["b"])
            c = cfg.scalar(point["c"])
            if _val(b) < eta.c12:
                return ZERO
            return self.gn * I.k(c, a.shift(-n), b.shift(-n))
        if cell == "s1s2":
            c = cfg.scalar(point["c"])
            va, vc = _val(a), _val(c)
            if vc < eta.c12:
                return ZERO
            if va >= n and vc >= n:
                return self.gn * I.h(a.shift(-n), (-c).shift(-n))
            if va >= n:
                ratio = pn / c
                return self.gn * cfg.eta2(ratio) * cfg.abs_val(ratio) * I.h(a.shift(-n), -ctx.one())
            if vc <= va:
                ratio = pn / c
                return self.gn * cfg.abs_val(ratio) * cfg.eta2(a / c) * I.k(-(pn / a), ctx.zero(), ctx.one())
            return ZERO
        if cell == "w0":
            if not eta.const_w0:
                return ZERO
            qn = CycloNum.rational(cfg.q) ** (-n)
            if _val(a) >= n:
                inner = cfg.eta2(pn) * qn * I.h(a.shift(-n), -ctx.one())
            else:
                inner = cfg.eta2(a) * qn * I.k(-(pn / a), ctx.zero(), ctx.one())
            return eta.const_w0 * self.gn * inner
        raise KeyError(cell)


def check_fn(cfg: DensityConfig, n: int, fn: PSVector, eigenspace: Eigenspace | None = None) -> list:
    """Levi data, eigencondition and the six cell tables of f_n."""
    R = cfg.model.ring
    out = []
    theta = CheckRecord("fn_levi_restriction", "f_n levi data")
    lower, upper = fn_levi_values(cfg, n)
    data = LeviRestrictionData.from_vector(fn)
    for i, a in enumerate(R.elements()):
        if not R.is_unit(a):
            theta.record(data.lower[i] == lower(a), {"a": a, "patch": "lower"})
        theta.record(data.upper_s1[i] == upper(a), {"a": a, "patch": "upper_s1"})
    out.append(theta)
    eig = CheckRecord("fn_in_eigenspace", "hecke eigencondition")
    if eigenspace is not None:
        coords = [fn.values[eigenspace.orbits.bases[o]] for o in eigenspace.orbits.live_ids]
        lam = eigenspace.eigenvalue
        for i, row in enumerate(eigenspace.matrix):
            lhs = sum((x * y for x, y in zip(row, coords) if x and y), ZERO)
            eig.record(lhs == lam * coords[i], {"orbit": eigenspace.orbits.live_ids[i]})
        out.append(eig)
    table = CellTable(cfg, n)
    for name, patch in PATCHES.items():
        rec = CheckRecord(f"fn_cell_table_{name}", "f_n cell table " + name)
        for point in patch.points(R):
            lhs = fn.eval_ring(patch.matrix(R, point))
            rhs = table.value(name, point)
            rec.record(lhs == rhs, {"n": n, "point": point, "lhs": lhs, "rhs": rhs})
        out.append(rec)
    return out


# v, h_n, h'_n

def v_lower_value(cfg: DensityConfig, a: FScalar) -> CycloNum:
    """delta(val a >= c(eta_1 eta_2)) q^val(a) / eta_2(a), and 0 at a = 0."""
    if a.is_zero() or a.val < cfg.eta.c12:
        return ZERO
    return CycloNum.rational(cfg.q) ** a.val * cfg.eta2(a).inverse()


def build_v(cfg: DensityConfig) -> LeviPSVector:
    """Level-M truncation of v: points with val(a) > M - c(eta_2) are set to 0 like v(1)."""
    R = cfg.levi.ring
    M, c2 = cfg.level, cfg.eta.c2
    ctx = cfg.ctx

    def lower(a):
        va = R.valuation(a)
        if va >= M or va > M - c2:
            return ZERO
        return v_lower_value(cfg, FScalar.from_ring(ctx, a, M, absolute=True))

    return LeviPSVector.from_patches(cfg.levi, cfg.torus, lower, lambda a: cfg.eta.const_w0)


class HPrime:
    """h'_n on the two patches of its support, evaluated at exact points."""

    def __init__(self, cfg: DensityConfig, n: int):
        self.cfg, self.n = cfg, n

    def _line(self, d: FScalar) -> CycloNum:
        cfg, n = self.cfg, self.n
        ctx, I = cfg.ctx, cfg.integrals
        if _val(d) >= n:
            return I.h(d.shift(-n), -ctx.one())
        pn = ctx.uniformizer_power(n)
        return cfg.eta2(d.shift(-n)) * I.k(-(pn / d), ctx.zero(), ctx.one())

    def on_lower(self, a, b, c) -> CycloNum:
        """h'_n at [[1,0,0],[a,1,0],[b,c,1]], a in pO, b, c in O."""
        cfg = self.cfg
        a, b, c = cfg.scalar(a), cfg.scalar(b), cfg.scalar(c)
        w = v_lower_value(cfg, a)
        if not w:
            return ZERO
        return self._line(b - a * c) * w

    def on_s1(self, a, b, c) -> CycloNum:
        """h'_n at [[1,a,0],[0,1,0],[c,b,1]] s1, a, b, c in O."""
        cfg = self.cfg
        if not cfg.eta.const_w0:
            return ZERO
        return cfg.eta.const_w0 * self._line(cfg.scalar(c))

    def on_normalized(self, b, c) -> CycloNum:
        """h'_n at the lower unipotent [[1,0,0],[0,1,0],[b,c,1]] as a multiple of v, returned as the scalar."""
        return self._line(self.cfg.scalar(b))


def hn_display_lower(cfg: DensityConfig, n: int, a, b, c) -> CycloNum:
    """Closed form of h_n at [[1,0,0],[a,1,0],[b,c,1]] for a in pO, b, c in O."""
    ctx, I = cfg.ctx, cfg.integrals
    a_s, b_s, c_s = cfg.scalar(a), cfg.scalar(b), cfg.scalar(c)
    va = _val(a_s)
    if va < cfg.eta.c12:
        return ZERO
    d = b_s - a_s * c_s
    vd = _val(d)
    if vd >= n and va >= n:
        return cfg.gamma ** n * I.h(d.shift(-n), (-a_s).shift(-n))
    w = v_lower_value(cfg, a_s)
    if vd >= n:
        return w * I.h(d.shift(-n), -ctx.one())
    if va <= vd:
        pn = ctx.uniformizer_power(n)
        return w * cfg.eta2(d.shift(-n)) * I.k(-(pn / d), ctx.zero(), ctx.one())
    return ZERO


def build_hn(n: int, cfg: DensityConfig, fn: PSVector | None = None) -> PSVector:
    """h_n = (s1 s2)^-1 f_n, i.e. h_n(x) = f_n(s1 s2 x)."""
    fn = fn or build_fn(n, cfg)
    model = cfg.model
    R = model.ring
    w = ring_from_ints(R, S1S2)
    values = [fn.eval_ring(ring_matmul(R, w, rep)) for rep in model.reps]
    return PSVector(model, cfg.torus, values)


def build_hprime(n: int, cfg: DensityConfig) -> HPrime:
    return HPrime(cfg, n)


# the report

def _lower_patch_points(R):
    for a in R.elements():
        if R.is_unit(a):
            continue
        for b in R.elements():
            for c in R.elements():
                yield a, b, c


def _matrix_lower(R, a, b, c):
    return ((R.one(), R.zero(), R.zero()), (a, R.one(), R.zero()), (b, c, R.one()))


def _matrix_s1(R, a, b, c):
    return PATCHES["s1"].matrix(R, {"a": a, "b": b, "c": c})


def _hn_cell(model, rep, w) -> str:
    """Cell label u with rep in I^{s1 s2} u B, read off the Iwahori cell of s1 s2 rep."""
    from .glin import iwahori_cell
    label = iwahori_cell(ring_matmul(model.ring, w, rep), model.ring)
    return {"s1s2": "e", "w0": "s1", "s1": "s2", "s2s1": "s1s2", "e": "s2s1", "s2": "w0"}[label]


@dataclass
class DensityReport:
    records: list
    r1: object = None
    sup_valuations: dict = field(default_factory=dict)


def check_density_hypotheses(cfg: DensityConfig, seed: int = 0, eigenspace: Eigenspace | None = None,
                             steinberg: bool = True) -> DensityReport:
    """All finite-level checks of the density argument for every n in cfg.n_range."""
    eigenspace = eigenspace or cfg.eigenspace
    model = cfg.model
    R = model.ring
    w = ring_from_ints(R, S1S2)
    gv = cfg.gamma_val
    records = []
    diff_samples = []  # (n, point label, valuation of h_n - h'_n)
    hprime_min = {}
    sup_diff = {}
    s1_rec = CheckRecord("hn_equals_hprime_on_s1_patch", "h_n s1 patch")
    lower_rec = CheckRecord("hn_display_on_lower_patch", "h_n lower patch")
    vanish_rec = CheckRecord("hn_vanishes_on_three_cells", "h_n vanishing cells")
    case_rec = CheckRecord("hn_minus_hprime_zero_cases", "h_n difference zero cases")
    cells = [_hn_cell(model, rep, w) for rep in model.reps]
    for n in cfg.n_range:
        fn = build_fn(n, cfg)
        records.extend(check_fn(cfg, n, fn, eigenspace))
        hn = build_hn(n, cfg, fn)
        hp = HPrime(cfg, n)
        vmin = INF
        dmin = INF
        for a, b, c in _lower_patch_points(R):
            lhs = hn.eval_ring(_matrix_lower(R, a, b, c))
            lower_rec.record(lhs == hn_display_lower(cfg, n, a, b, c), {"n": n, "a": a, "b": b, "c": c})
            rhs = hp.on_lower(a, b, c)
            if rhs:
                vmin = min(vmin, padic_valuation(rhs, cfg.p))
            diff = lhs - rhs
            dv = padic_valuation(diff, cfg.p) if diff else INF
            dmin = min(dmin, dv)
            diff_samples.append((n, ("lower", a, b, c), dv))
            a_s, b_s, c_s = cfg.scalar(a), cfg.scalar(b), cfg.scalar(c)
            va, vd = _val(a_s), _val(b_s - a_s * c_s)
            if (va <= vd < n) or (va < n <= vd):
                case_rec.record(not diff, {"n": n, "a": a, "b": b, "c": c, "difference": diff})
        for a in R.elements():
            for b in R.elements():
                for c in R.elements():
                    lhs = hn.eval_ring(_matrix_s1(R, a, b, c))
                    rhs = hp.on_s1(a, b, c)
                    s1_rec.record(lhs == rhs, {"n": n, "a": a, "b": b, "c": c, "lhs": lhs, "rhs": rhs})
                    if rhs:
                        vmin = min(vmin, padic_valuation(rhs, cfg.p))
        for i, (rep, cell) in enumerate(zip(model.reps, cells)):
            val = hn.values[i]
            if cell in ("s1s2", "s2s1", "w0"):
                vanish_rec.record(not val, {"n": n, "rep": i, "cell": cell})
            elif cell == "s2":
                dv = padic_valuation(val, cfg.p) if val else INF
                dmin = min(dmin, dv)
                diff_samples.append((n, ("s2", i), dv))
        hprime_min[n] = vmin
        sup_diff[n] = dmin
    records += [lower_rec, s1_rec, vanish_rec, case_rec]
    # (a) the infimum bound
    inf_rec = CheckRecord("hprime_inf_norm_bound", "sup norm bound")
    h0 = cfg.integrals.h(cfg.ctx.zero(), -cfg.ctx.one())
    c12 = cfg.eta.c12
    bound = padic_valuation(h0, cfg.p) + (c12 + 1) * gv if h0 else INF
    point_value = None
    for n in cfg.n_range:
        pv = HPrime(cfg, n).on_lower(cfg.p ** (c12 + 1), 0, 0)
        point_value = pv
        inf_rec.record(pv == h0 * cfg.gamma ** (c12 + 1), {"n": n, "value": pv})
        inf_rec.record(hprime_min[n] <= bound, {"n": n, "sup_valuation": hprime_min[n], "bound": bound})
    inf_rec.measured.update({"h_0_minus_1": h0, "bound_valuation": bound,
                             "sup_norm_valuation_hprime": {n: _fmt(v) for n, v in hprime_min.items()},
                             "value_at_test_point": point_value})
    records.append(inf_rec)
    # (b) fitted r1 with a validation split
    r1_rec = CheckRecord("hn_minus_hprime_decay", "decay estimate")
    finite = [s for s in diff_samples if s[2] != INF]
    rng = random.Random(seed)
    order = list(range(len(finite)))
    rng.shuffle(order)
    half = len(order) // 2
    fit = [finite[i] for i in order[:half]]
    hold = [finite[i] for i in order[half:]]
    r1 = max((n * gv - v for n, _, v in fit), default=0)
    for n, label, v in hold:
        r1_rec.record(v >= n * gv - r1, {"n": n, "point": label, "valuation": v, "r1": r1})
    r1_rec.measured.update({"r1": r1, "fit_size": len(fit), "validation_size": len(hold),
                            "sup_norm_valuation_difference": {n: _fmt(v) for n, v in sup_diff.items()},
                            "gamma_valuation": gv})
    records.append(r1_rec)
    if steinberg:
        records.append(check_steinberg(cfg))
    return DensityReport(records, r1, {n: _fmt(v) for n, v in sup_diff.items()})


def _fmt(v):
    return "inf" if v == INF else v


def check_steinberg(cfg: DensityConfig) -> CheckRecord:
    """phi(f_n restricted to L) = 0 for every n."""
    rec = CheckRecord("steinberg_projection_vanishes", "steinberg functional")
    for n in cfg.n_range:
        fn = build_fn(n, cfg)
        try:
            val = steinberg_projection(restrict_to_levi(fn, cfg.levi))
        except SupportError as exc:
            rec.record(False, {"n": n, "error": str(exc)})
            continue
        rec.record(val.is_zero(), {"n": n, "value": val})
    return rec
